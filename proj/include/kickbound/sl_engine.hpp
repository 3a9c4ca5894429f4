#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kickbound/profile.hpp"

namespace kickbound {

/// Midpoint ODE residuals are checked against max(tol, kResidualFloor): below
/// that level the second difference of stored values is dominated by the
/// per-step truncation error divided by h.
inline constexpr double kResidualFloor = 1e-8;

struct IntegrateOptions {
  double tol = 1e-10;
  bool stop_at_first_zero = false;
  std::size_t max_steps = 20'000'000;
};

struct MonotoneSegment {
  double lo;
  double hi;
  bool increasing;
};

/// Dense numerical solution of w'' + b(r) w = 0.
///
/// Between consecutive grid radii the solution is represented by the quintic
/// Hermite interpolant of (w, w', w'' = -b w) at both ends.
class SLTrajectory {
 public:
  struct Node {
    double r;
    double w;
    double wp;
  };

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& zeros() const noexcept { return zeros_; }
  const std::vector<double>& extrema() const noexcept { return extrema_; }
  const CurvatureProfile& profile() const noexcept { return profile_; }
  double r_start() const noexcept { return nodes_.front().r; }
  double r_end() const noexcept { return nodes_.back().r; }
  double tol() const noexcept { return tol_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }

  double value(double r) const;
  double slope(double r) const;

  /// Maximal normalized residual |w''_H + b w_H| / (|b w_H| + 1) at interval
  /// midpoints, with w''_H from the cubic Hermite interpolant of w'.
  double ode_residual() const;

  std::vector<MonotoneSegment> monotone_segments() const;

  /// Index of the interval [r_i, r_{i+1}] containing r.
  std::size_t interval_of(double r) const;

 private:
  friend SLTrajectory integrate_sl(const CurvatureProfile&, double, double, double, double,
                                   const IntegrateOptions&);
  explicit SLTrajectory(CurvatureProfile profile, double tol)
      : profile_(std::move(profile)), tol_(tol) {}

  double midpoint_residual(std::size_t i) const;
  void locate_events(std::size_t i);

  CurvatureProfile profile_;
  double tol_;
  std::size_t rejected_ = 0;
  std::vector<Node> nodes_;
  // w'' at the left and right end of each interval, evaluated with the
  // coefficient of that interval (one-sided at breakpoints).
  std::vector<double> acc_lo_, acc_hi_;
  std::vector<double> zeros_, extrema_;
};

/// Adaptive Dormand-Prince 5(4) integration with defect control and event
/// location for zeros and extrema of w.  Zeros are reported in
/// (r_start, r_end]; the starting point is never listed.
SLTrajectory integrate_sl(const CurvatureProfile& profile, double r_start, double w0, double w0p,
                          double r_end, const IntegrateOptions& options);

inline SLTrajectory integrate_sl(const CurvatureProfile& profile, double r_start, double w0,
                                 double w0p, double r_end, double tol) {
  return integrate_sl(profile, r_start, w0, w0p, r_end, IntegrateOptions{.tol = tol});
}

/// Initial data for the normalized solution w(0) = 0, w'(0) = 1: the origin
/// itself when b is finite there, otherwise r = eps with w = eps, w' = 1
/// (initialization error O(eps^2 b)).
struct StartPoint {
  double r;
  double w;
  double wp;
};
StartPoint origin_start(const CurvatureProfile& profile, double eps = 1e-6);

struct SecondZero {
  std::optional<double> r1;
  double r_end = 0.0;
  double w_end = 0.0;
  double wp_end = 0.0;
  /// w > 0, w' < 0 at r_end: concavity forces a zero no later than this radius.
  std::optional<double> forced_zero_bound;
};

/// First zero beyond r0 of the solution with y(r0) = 0, y'(r0) = 1.
SecondZero find_second_zero(const CurvatureProfile& profile, double r0, double r_max,
                            double tol = 1e-10);

struct IndexFormInput {
  int n;
  const SLTrajectory* y;
  double r0;
  double r1;
  CurvatureProfile ric;
};

/// (n - 1) int (y')^2 dr - int ric(r) y^2 dr over [r0, r1].
double index_form(const IndexFormInput& input);

struct PiconeReport {
  double max_residual = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double bound = 0.0;  // 10 * tol * window length
  std::size_t samples = 0;
  bool within_bound = false;
};

/// Residual of y'/y = w'/w - I/w^2, where w solves with coefficient b and y
/// with coefficient c, both normalized at the common left endpoint, and I is
/// int (c - b) w^2 + int ((w' y - w y') / y)^2.
///
/// The window is [left, window_hi]; window_hi defaults to r_max.
PiconeReport picone_residual(const CurvatureProfile& b, const CurvatureProfile& c, double r_max,
                             double tol, std::optional<double> window_hi = std::nullopt);

}  // namespace kickbound
