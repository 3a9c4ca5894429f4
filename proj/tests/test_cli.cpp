#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kickbound/cli.hpp"

using namespace kickbound;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::vector<const char*> argv{"kickbound"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json result(const Run& r) { return json::parse(r.out)["result"]; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kickbound_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("lambda command") {
  const auto r = run({"lambda", "--r0", "1", "--a", "2.71828182845", "--b", "7.38905609893", "--json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["command"] == "lambda");
  CHECK(j.contains("meta"));
  CHECK(j["result"]["lambda"].get<double>() == doctest::Approx(0.8603335890193798).epsilon(1e-11));
  CHECK(std::abs(j["result"]["residual"].get<double>()) < 1e-10);
  CHECK(j["result"]["discrepancy_notes"][0].get<std::string>().find("0.46") != std::string::npos);

  const auto base = run({"lambda", "--r0", "1", "--a", "1", "--b", "2.718281828459045", "--json"});
  CHECK(result(base)["lambda"].get<double>() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-11));

  const auto deep = run({"lambda", "--k", "1", "--r0", "2", "--a", "3", "--b", "9", "--json"});
  CHECK(result(deep)["lambda"].get<double>() == doctest::Approx(1.42723760201).epsilon(1e-10));

  const auto text = run({"lambda", "--r0", "1", "--a", "2", "--b", "5"});
  CHECK(text.code == 0);
  CHECK(text.out.find("lambda") != std::string::npos);
}

TEST_CASE("invalid input exits with code 2") {
  CHECK(run({"lambda", "--r0", "1", "--a", "5", "--b", "2"}).code == 2);
  CHECK(run({"lambda", "--a", "2"}).code == 2);
  CHECK(run({"lambda", "--r0", "1", "--a", "2", "--b", "5", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"certify", "--profile", "no-such-profile"}).code == 2);
  CHECK(run({"surface", "--name", "capped-cylinder", "--cap", "-1"}).code == 2);
}

TEST_CASE("certify command verdicts and exit codes") {
  const auto compact = run({"certify", "--profile", "f0-kick", "--json", "--no-meta"});
  CHECK(compact.code == 0);
  const auto j = json::parse(compact.out);
  CHECK_FALSE(j.contains("meta"));
  CHECK(j["result"]["verdict"] == "Compact");
  CHECK(j["result"]["diameter_bound"].is_number());

  const auto eq = run({"certify", "--profile", "bf-equality", "--json", "--no-meta"});
  CHECK(eq.code == 1);
  CHECK(result(eq)["verdict"] == "Inconclusive");

  const auto nc = run({"certify", "--profile", "arctan-bifurcator", "--bifurcator",
                       "arctan-bifurcator", "--json", "--no-meta"});
  CHECK(nc.code == 0);
  CHECK(result(nc)["verdict"] == "NoncompactSide");

  const auto deep = run({"certify", "--profile", "fk-kick", "--json", "--no-meta"});
  CHECK(deep.code == 0);
  CHECK(result(deep)["verdict"] == "Compact");
}

TEST_CASE("bifurcate command") {
  const auto r = run({"bifurcate", "--profile", "arctan-example", "--r-max", "1e4", "--json"});
  REQUIRE(r.code == 0);
  const auto j = result(r);
  CHECK(j["classification"]["classification"] == "Bifurcator");
  CHECK(j["classification"]["w_limit"].get<double>() == doctest::Approx(1.5708).epsilon(1e-4));
  const auto b = run({"bifurcate", "--profile", "arctan-bifurcator", "--boundary-bump", "0.05",
                      "--sup", "arctan-bifurcator", "--json"});
  CHECK(result(b)["boundary"]["verdict"] == "CompactSide");
  CHECK(result(b)["noncompact"]["verdict"] == "NoncompactSide");
}

TEST_CASE("surface command writes the profile CSV") {
  const auto path = scratch("capped.csv");
  const auto r = run({"surface", "--name", "capped-cylinder", "--emit-profile", path.string(), "--json"});
  REQUIRE(r.code == 0);
  std::ifstream f(path);
  std::string header, line, last;
  std::getline(f, header);
  CHECK(header == "rho,z,r,K_exact,K_paper,K_r2,K_r3");
  while (std::getline(f, line)) last = line;
  const double kr3 = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(kr3 == doctest::Approx(2.0).epsilon(0.01));
  CHECK(result(r)["K_r3_at_r_max"].get<double>() == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("curve command reports a single crossing") {
  const auto r = run({"curve", "--family", "parabola-kick", "--t", "-0.2:0.2:0.05", "--window", "100", "--json"});
  REQUIRE(r.code == 0);
  const auto j = result(r);
  CHECK(j["crossings"] == 1);
  CHECK(j["transition_bracket"][0].get<double>() >= -0.05 - 1e-12);
  CHECK(j["transition_bracket"][1].get<double>() <= 0.05 + 1e-12);
  CHECK(j["entries"].size() == 9);

  const auto path = scratch("parabola.csv");
  const auto p = run({"curve", "--family", "parabola", "--k", "1", "--window", "10", "--emit-curve", path.string()});
  CHECK(p.code == 0);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "s,x,y,theta,kappa");
}

TEST_CASE("identical runs give identical output") {
  const std::vector<std::vector<std::string>> cmds{
      {"lambda", "--r0", "1", "--a", "2", "--b", "7", "--json", "--no-meta"},
      {"certify", "--profile", "f0-kick", "--json", "--no-meta"},
      {"bifurcate", "--profile", "capped-cylinder", "--json", "--no-meta"},
      {"surface", "--name", "paraboloid", "--json", "--no-meta"}};
  for (const auto& c : cmds) CHECK(run(c).out == run(c).out);
}

TEST_CASE("output file option") {
  const auto path = scratch("lambda.json");
  const auto r = run({"lambda", "--r0", "1", "--a", "2", "--b", "7", "--json", "--no-meta", "--out", path.string()});
  REQUIRE(r.code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(json::parse(ss.str())["command"] == "lambda");
}

TEST_CASE("CSV profiles are interpolated monotonically") {
  const auto path = scratch("profile.csv");
  {
    std::ofstream f(path);
    f << "r,b\n0,1\n1,0.5\n2,0.25\n4,0.1\n";
  }
  const auto p = cli::load_csv_profile(path.string());
  CHECK(p(0.0) == doctest::Approx(1.0));
  CHECK(p(1.0) == doctest::Approx(0.5));
  for (double r = 0.0; r < 4.0; r += 0.05) CHECK(p(r + 0.05) <= p(r) + 1e-15);
  CHECK(p(10.0) == doctest::Approx(0.1));
  {
    std::ofstream f(path);
    f << "r,b\n0,1\n0,2\n";
  }
  CHECK_THROWS(cli::load_csv_profile(path.string()));
}
