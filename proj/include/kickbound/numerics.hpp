#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kickbound::numerics {

/// Root of f on [lo, hi] with f(lo), f(hi) of opposite sign, by a hybrid of
/// secant (regula falsi with the Illinois modification) and bisection.
/// Stops when the bracket is narrower than xtol.
double bracket_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                    double f_hi, double xtol);

/// Plain bisection on a sign change; runs to adjacent doubles when xtol is 0.
double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol = 0.0);

/// 8-point Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  static constexpr std::size_t size = 8;
  std::array<double, size> nodes;
  std::array<double, size> weights;
};
const GaussRule& gauss8();

/// Fixed 8-point Gauss-Legendre integral over [a, b].
double gauss_integral(const std::function<double(double)>& f, double a, double b);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b] (b may be +inf).
QuadratureResult adaptive_integral(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol = 1e-12, unsigned max_depth = 30);

/// n points, uniform on [lo, min(hi, 1)] when lo <= 0, log-spaced above.
std::vector<double> sampling_grid(double lo, double hi, std::size_t n);

/// n log-spaced points on [lo, hi], lo > 0, endpoints included.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Quintic Hermite interpolant on one interval from values, first and second
/// derivatives at both ends.
class QuinticHermite {
 public:
  QuinticHermite(double x0, double x1, double f0, double d0, double s0, double f1, double d1,
                 double s1);
  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

 private:
  double x0_, h_;
  std::array<double, 6> c_;
};

/// Shape-preserving piecewise cubic (Fritsch-Carlson) on strictly increasing
/// abscissae.  Outside the table the end cubics are not used: evaluation is
/// clamped or linearly extrapolated as requested by the caller.
class MonotoneSpline {
 public:
  MonotoneSpline() = default;
  MonotoneSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double front_x() const { return x_.front(); }
  double back_x() const { return x_.back(); }
  /// Slope of the last interval (for linear extrapolation).
  double tail_slope() const;
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace kickbound::numerics
