#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kickbound/bifurcator.hpp"
#include "kickbound/closed_form.hpp"
#include "kickbound/errors.hpp"
#include "kickbound/kick.hpp"
#include "kickbound/sl_engine.hpp"

using namespace kickbound;
using std::numbers::e;
using std::numbers::pi;

TEST_CASE("threshold root of cot x = x") {
  const double lam = lambda_linear(1.0, e, e * e);
  CHECK(lam == doctest::Approx(0.8603335890193798).epsilon(1e-12));
  CHECK(std::abs(lambda_residual(0, 1.0, e, e * e, lam)) < 1e-10);
}

TEST_CASE("threshold with base at the shell") {
  CHECK(lambda_linear(1.0, 1.0, e) == doctest::Approx(pi / 2).epsilon(1e-14));
  CHECK(lambda_linear(2.0, 2.0, 10.0) == doctest::Approx(pi / (2 * std::log(5.0))).epsilon(1e-14));
  const double L = iter_log(2, 9.0) - iter_log(2, 3.0);
  CHECK(lambda_log(1, 3.0, 3.0, 9.0) == doctest::Approx(pi / (2 * L)).epsilon(1e-14));
}

TEST_CASE("threshold decreases with the shell length") {
  double prev = INFINITY;
  for (int l = 1; l <= 20; ++l) {
    const double lam = lambda_linear(1.0, e, std::exp(l + 1.0));
    CHECK(lam < prev);
    prev = lam;
  }
  CHECK(prev == doctest::Approx(0.07480644758179289).epsilon(1e-12));
  CHECK(lambda_linear(1.0, e, std::exp(201.0)) < 0.008);
}

TEST_CASE("log threshold against a grid scan and a high precision value") {
  const double lam = lambda_log(1, 2.0, 3.0, 9.0);
  CHECK(lam == doctest::Approx(1.4272376020061817).epsilon(1e-12));
  const double dL = iter_log(2, 9.0) - iter_log(2, 3.0);
  const double step = 1e-6;
  double x = step;
  while (lambda_residual(1, 2.0, 3.0, 9.0, x) > 0.0 && x < pi / (2 * dL)) x += step;
  CHECK(std::abs(x - lam) <= step);
  CHECK(lambda_log(0, 1.0, e, e * e) == lambda_linear(1.0, e, e * e));
}

TEST_CASE("threshold monotonicity and scale invariance") {
  const std::vector<double> as{1.2, 1.7, 2.5, 3.3, 4.0};
  const std::vector<double> ratios{1.5, 2.0, 3.0, 4.5, 6.0};
  for (double a : as) {
    double prev = INFINITY;
    for (double q : ratios) {
      const double lam = lambda_linear(1.0, a, a * q);
      CHECK(lam <= prev);
      prev = lam;
    }
  }
  for (double q : ratios) {
    double prev = 0.0;
    for (double a : as) {
      const double lam = lambda_linear(1.0, a, 9.0 * q);
      CHECK(lam >= prev);
      prev = lam;
    }
  }
  for (double c : {0.01, 0.5, 3.0, 1e4}) {
    const double ref = lambda_linear(1.0, 2.2, 7.9);
    CHECK(std::abs(lambda_linear(c, 2.2 * c, 7.9 * c) - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("threshold width scaling") {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const double x = std::log(eps), y = std::log(lambda_linear(1.0, e, e + eps));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("diameter bounds") {
  CHECK(diameter_bound({1.0, 1.0, 30.0, 1.0, 0}) == doctest::Approx(2 * std::exp(pi)).epsilon(1e-13));
  CHECK(diameter_bound({1.0, 1.0, 30.0, 1.0, 0}, true) == doctest::Approx(std::exp(pi)).epsilon(1e-13));
  const double mu = 1.6;
  const KickSpec spec{1.0, 1.0, e, mu, 0};
  const double expect = 2 * e * std::exp(-std::tan(mu) / mu);
  CHECK(diameter_bound(spec) == doctest::Approx(expect).epsilon(1e-12));
  const auto z = find_second_zero(kicked_profile(spec), 1.0, 1e12, 1e-12);
  REQUIRE(z.r1);
  CHECK(2 * *z.r1 == doctest::Approx(expect).epsilon(1e-6));
  CHECK_THROWS_AS(diameter_bound({1.0, 1.0, e, 1.5, 0}), NoSecondZero);
}

TEST_CASE("certificate for the linear kick") {
  const KickSpec spec{1.0, e, e * e, 1.1 * lambda_linear(1.0, e, e * e), 0};
  const auto c = certify(kicked_profile(spec), 2, spec);
  REQUIRE(c.verdict == Verdict::Compact);
  REQUIRE(c.r1);
  CHECK(*c.r0 < *c.r1);
  CHECK(*c.r1 == doctest::Approx(second_zero_closed_form(spec)).epsilon(1e-7));
  CHECK(*c.diameter_bound == doctest::Approx(2 * *c.r1));
  CHECK(std::isfinite(*c.diameter_bound));
  CHECK(c.grid_size == 10000);

  CertifyOptions tight;
  tight.tol = 1e-11;
  const auto t = certify(kicked_profile(spec), 2, spec, tight);
  REQUIRE(t.r1);
  CHECK(std::abs(*t.r1 / *c.r1 - 1) <= 1e-5);

  CertifyOptions all;
  all.all_origins = true;
  const auto h = certify(kicked_profile(spec), 2, spec, all);
  CHECK(*h.diameter_bound == doctest::Approx(*h.r1));
}

TEST_CASE("certificate on the equality profile is inconclusive") {
  const KickSpec spec{1.0, e, e * e, 1.1 * lambda_linear(1.0, e, e * e), 0};
  const auto c = certify(critical_profile(0, 0.0, 1.0), 2, spec);
  CHECK(c.verdict == Verdict::Inconclusive);
  CHECK_FALSE(c.r1);
  CHECK(c.failing_radius);
}

TEST_CASE("certificate for a log-depth kick") {
  const KickSpec spec{2.0, 3.0, 9.0, 1.5 * lambda_log(1, 2.0, 3.0, 9.0), 1};
  const auto c = certify(kicked_profile(spec), 2, spec);
  REQUIRE(c.verdict == Verdict::Compact);
  CHECK(*c.r1 == doctest::Approx(log_second_zero_closed_form(spec)).epsilon(1e-7));
  CertifyOptions tight;
  tight.tol = 1e-11;
  CHECK(*certify(kicked_profile(spec), 2, spec, tight).r1 == doctest::Approx(*c.r1).epsilon(1e-5));
  bool noted = false;
  for (const auto& n : c.discrepancy_notes) noted = noted || n.find("beta") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("certificate falls back to the noncompact side") {
  const KickSpec spec{1.0, e, e * e, 1.1 * lambda_linear(1.0, e, e * e), 0};
  CertifyOptions opts;
  opts.bifurcator = profiles::arctan_bifurcator();
  const auto c = certify(profiles::arctan_bifurcator(), 2, spec, opts);
  CHECK(c.verdict == Verdict::NoncompactSide);
}

TEST_CASE("certificate JSON field order") {
  const KickSpec spec{1.0, e, e * e, 1.1 * lambda_linear(1.0, e, e * e), 0};
  const auto j = to_json(certify(kicked_profile(spec), 2, spec));
  const std::vector<std::string> expect{"verdict", "r0", "r1", "diameter_bound", "lambda",
                                        "spec", "grid_size", "tolerances", "discrepancy_notes"};
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() >= expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(keys[i] == expect[i]);
  CHECK(j["verdict"] == "Compact");
  bool note = false;
  for (const auto& n : j["discrepancy_notes"]) note = note || n.get<std::string>().find("0.46") != std::string::npos;
  CHECK(note);
}
