#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kickbound/closed_form.hpp"
#include "kickbound/profile.hpp"

namespace kickbound {

/// Smallest positive root of cot(lambda ln(b/a)) = lambda ln(a/r0).
/// The root lies in (0, pi / (2 ln(b/a))]; found by bisection.
double lambda_linear(double r0, double a, double b);

/// Smallest positive root of cot(lambda (L(b) - L(a))) = lambda (L(a) - L(r0))
/// with L = ln^{k+1}.  k = 0 is lambda_linear.
double lambda_log(int k, double r0, double a, double b);

/// cot(lambda dL) - lambda c for the threshold equation at depth k.
double lambda_residual(int k, double r0, double a, double b, double lambda);

/// 2 r1 for the linear kick (r1 when all_origins is set).
double diameter_bound(const KickSpec& spec, bool all_origins = false);

enum class Verdict { Compact, NoncompactSide, Inconclusive };
std::string to_string(Verdict v);

struct CertifyOptions {
  double tol = 1e-10;
  std::size_t grid_size = 10'000;
  double margin = 1e-3;  // relative margin over F_k(r, lambda) on [a, b]
  double r_max = 1e8;
  bool all_origins = false;
  /// Supplied SL-bifurcator for the noncompact-side test.
  std::optional<CurvatureProfile> bifurcator;
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  KickSpec spec;
  int dimension = 2;
  std::string label;
  std::optional<double> r0, r1;
  std::optional<double> diameter_bound;
  std::optional<double> lambda;
  std::optional<double> mu_effective;
  std::optional<double> index_form;
  std::optional<double> failing_radius;
  std::string reason;
  std::size_t grid_size = 0;
  double tol = 0.0;
  double margin = 0.0;
  double r_max = 0.0;
  bool all_origins = false;
  std::vector<std::string> discrepancy_notes;
};

/// Discrepancy notes attached to every report on this threshold.
std::vector<std::string> threshold_notes(const KickSpec& spec);

/// Checks profile >= F_k(r, 0) on [r0, r_max] and profile > (1 + margin) F_k
/// at amplitude lambda on [a, b], both on a sampling grid, then locates the
/// conjugate pair of the comparison equation.
Certificate certify(const CurvatureProfile& profile, int dimension, const KickSpec& spec,
                    const CertifyOptions& options = {});

nlohmann::ordered_json to_json(const Certificate& c);

}  // namespace kickbound
