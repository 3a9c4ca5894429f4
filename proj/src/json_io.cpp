#include "kickbound/json_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>

namespace kickbound::json_io {

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_sig(x);
}

Json number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

void round_all(Json& j) {
  if (j.is_number_float()) {
    j = number(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_all(v);
  }
}

Json envelope(const std::string& command, Json result, bool with_meta) {
  round_all(result);
  Json out;
  out["command"] = command;
  out["result"] = std::move(result);
  if (with_meta) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out["meta"] = {{"tool", "kickbound"}, {"version", "1.0.0"}, {"timestamp", stamp}};
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace kickbound::json_io
