#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace kickbound {

/// A radial coefficient r -> b(r) on [r_min, inf), the right-hand side of
/// w'' + b(r) w = 0.
///
/// Breakpoints mark radii where b may jump (the edges of a kick shell, the
/// rim of a surface cap).  Integrators stop at every breakpoint and evaluate
/// b strictly inside each piece, so the one-sided values are used.
class CurvatureProfile {
 public:
  using Function = std::function<double(double)>;

  CurvatureProfile(Function eval, double r_min, std::string label,
                   std::vector<double> breakpoints = {});

  double operator()(double r) const { return (*eval_)(r); }

  double r_min() const noexcept { return r_min_; }
  const std::string& label() const noexcept { return label_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  /// Breakpoints strictly inside (lo, hi).
  std::vector<double> breakpoints_between(double lo, double hi) const;

  CurvatureProfile scaled(double factor, std::string label) const;

 private:
  std::shared_ptr<const Function> eval_;
  double r_min_;
  std::string label_;
  std::vector<double> breakpoints_;
};

/// Smooth mollifier exp(1 - 1/(1 - x^2)) on (-1, 1), zero outside, peak 1 at 0.
double mollifier(double x);

/// Mollifier rescaled to the support [lo, hi].
double bump(double r, double lo, double hi);

namespace profiles {

CurvatureProfile constant(double value, double r_min = 0.0);

/// b(r) = 2r / ((1 + r^2)^2 arctan r), finite at the origin with b(0) = 2.
/// Its normalized solution is w(r) = arctan r.
CurvatureProfile arctan_bifurcator();

/// base(r) + height * bump(r, lo, hi).
CurvatureProfile add_bump(const CurvatureProfile& base, double lo, double hi, double height);

/// base(r) * (1 + fraction * bump(r, lo, hi)).
CurvatureProfile scale_bump(const CurvatureProfile& base, double lo, double hi,
                            double fraction);

}  // namespace profiles
}  // namespace kickbound
