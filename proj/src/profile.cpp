#include "kickbound/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kickbound/errors.hpp"

namespace kickbound {

CurvatureProfile::CurvatureProfile(Function eval, double r_min, std::string label,
                                   std::vector<double> breakpoints)
    : eval_(std::make_shared<const Function>(std::move(eval))),
      r_min_(r_min),
      label_(std::move(label)),
      breakpoints_(std::move(breakpoints)) {
  if (!*eval_) throw PreconditionError("CurvatureProfile: empty evaluator");
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

std::vector<double> CurvatureProfile::breakpoints_between(double lo, double hi) const {
  std::vector<double> out;
  for (double p : breakpoints_)
    if (p > lo && p < hi) out.push_back(p);
  return out;
}

CurvatureProfile CurvatureProfile::scaled(double factor, std::string label) const {
  auto inner = eval_;
  return CurvatureProfile([inner, factor](double r) { return factor * (*inner)(r); }, r_min_,
                          std::move(label), breakpoints_);
}

double mollifier(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

double bump(double r, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  return mollifier((r - mid) / half);
}

namespace profiles {

CurvatureProfile constant(double value, double r_min) {
  return CurvatureProfile([value](double) { return value; }, r_min,
                          "constant(" + std::to_string(value) + ")");
}

CurvatureProfile arctan_bifurcator() {
  return CurvatureProfile(
      [](double r) {
        const double q = (1.0 + r * r) * (1.0 + r * r);
        if (std::abs(r) < 1e-4) {
          // arctan(r)/r = 1 - r^2/3 + r^4/5 - ...
          const double r2 = r * r;
          return 2.0 / (q * (1.0 - r2 / 3.0 + r2 * r2 / 5.0));
        }
        return 2.0 * r / (q * std::atan(r));
      },
      0.0, "arctan-bifurcator");
}

CurvatureProfile add_bump(const CurvatureProfile& base, double lo, double hi, double height) {
  return CurvatureProfile(
      [base, lo, hi, height](double r) { return base(r) + height * bump(r, lo, hi); },
      base.r_min(),
      base.label() + "+bump(" + std::to_string(height) + ")",
      std::vector<double>(base.breakpoints().begin(), base.breakpoints().end()));
}

CurvatureProfile scale_bump(const CurvatureProfile& base, double lo, double hi,
                            double fraction) {
  return CurvatureProfile(
      [base, lo, hi, fraction](double r) {
        return base(r) * (1.0 + fraction * bump(r, lo, hi));
      },
      base.r_min(),
      base.label() + "*(1+" + std::to_string(fraction) + " bump)",
      std::vector<double>(base.breakpoints().begin(), base.breakpoints().end()));
}

}  // namespace profiles
}  // namespace kickbound
