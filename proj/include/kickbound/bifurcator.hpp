#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "kickbound/profile.hpp"

namespace kickbound {

enum class BifurcatorClass { Bifurcator, NotBifurcator, Inconclusive };
enum class NotBifurcatorReason { None, SecondZero, Unbounded, NonMonotone };

std::string to_string(BifurcatorClass c);
std::string to_string(NotBifurcatorReason r);

struct ClassifyOptions {
  double r_max = 1e4;
  double tol = 1e-10;
  /// Cauchy tail tolerance as a fraction of w(r_max).
  double tail_rel_tol = 1e-4;
  /// w beyond this with w'(r_max) >= unbounded_slope counts as unbounded.
  double unbounded_cap = 1e6;
  double unbounded_slope = 1e-3;
  /// Start radius when b is not finite at the origin.
  double eps = 1e-6;
};

struct BifurcatorReport {
  BifurcatorClass classification = BifurcatorClass::Inconclusive;
  NotBifurcatorReason reason = NotBifurcatorReason::None;
  std::string label;
  double r_start = 0.0;
  double r_max = 0.0;
  double tol = 0.0;
  double w_at_rmax = 0.0;
  double wp_at_rmax = 0.0;
  double w_at_half = 0.0;
  double tail_increment = 0.0;  // w(r_max) - w(r_max / 2)
  double tail_tol = 0.0;
  std::optional<double> first_zero;
  std::optional<double> first_extremum;
  /// w(r_max) plus the power-law tail of w' beyond r_max.
  std::optional<double> w_limit;
};

BifurcatorReport classify(const CurvatureProfile& b, const ClassifyOptions& options = {});

struct AbreschReport {
  // (a) moment integral of r b(r)
  double moment_integral = 0.0;
  double moment_last_dyad = 0.0;
  double moment_tail_ratio = 0.0;  // last dyad over the one before
  double moment_tail_bound = 0.0;  // geometric extrapolation of the remaining tail
  bool moment_quadrature_converged = false;
  // (b) limit derivatives
  double wp_at_rmax = 0.0;
  double wp_loglog_slope = 0.0;
  bool wp_has_limit = false;
  double vp_at_rmax = 0.0;
  // (c) independent solution v = w int dr / w^2
  double r_split = 0.0;
  double v_at_rmax = 0.0;
  double v_ode_at_rmax = 0.0;
  double v_relative_mismatch = 0.0;
  double wronskian_deviation = 0.0;
  bool v_diverges = false;
};

AbreschReport abresch_checks(const CurvatureProfile& b, double r_max, double tol = 1e-10);

enum class BoundaryVerdict { CompactSide, NoEvidence };
std::string to_string(BoundaryVerdict v);

struct BoundaryReport {
  BoundaryVerdict verdict = BoundaryVerdict::NoEvidence;
  std::optional<double> second_zero;
  double r_max = 0.0;
  double max_excess = 0.0;
  double max_excess_radius = 0.0;
  double w_end = 0.0;
  double wp_end = 0.0;
  std::optional<double> forced_zero_bound;
  std::string note;
};

/// Requires c >= b on a sampling grid; throws ExceedanceViolated otherwise.
BoundaryReport boundary_test(const CurvatureProfile& b, const CurvatureProfile& c, double r_max,
                             double tol = 1e-10, std::size_t grid_size = 10'000);

enum class NoncompactVerdict { NoncompactSide, NotApplicable };
std::string to_string(NoncompactVerdict v);

struct NoncompactReport {
  NoncompactVerdict verdict = NoncompactVerdict::NotApplicable;
  std::optional<double> first_violation;
  double liminf_diagnostic = 0.0;  // min of b over [r_max / 2, r_max]
  double r_max = 0.0;
};

NoncompactReport noncompact_side_check(const CurvatureProfile& profile_sup,
                                       const CurvatureProfile& b, double r_max,
                                       std::size_t grid_size = 10'000);

nlohmann::ordered_json to_json(const BifurcatorReport& r);
nlohmann::ordered_json to_json(const AbreschReport& r);
nlohmann::ordered_json to_json(const BoundaryReport& r);
nlohmann::ordered_json to_json(const NoncompactReport& r);

}  // namespace kickbound
