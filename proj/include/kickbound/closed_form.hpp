#pragma once

#include <string>

#include "kickbound/profile.hpp"

namespace kickbound {

/// A curvature kick: base radius r0, shell [a, b], amplitude mu and
/// logarithm depth k.  Depth 0 is the linear kick (1 + 4 mu^2)/(4 r^2).
struct KickSpec {
  double r0 = 1.0;
  double a = 0.0;
  double b = 0.0;
  double mu = 0.0;
  int k = 0;

  /// Throws InvalidShell unless e_k < r0 <= a < b and mu >= 0.
  void validate() const;
};

/// First derivative together with the value.
struct Jet {
  double value;
  double slope;
};

// ---------------------------------------------------------------------------
// Iterated logarithms

/// e_0 = 0, e_{k+1} = exp(e_k): the radius where ln^k first vanishes.
double superpower(int k);

enum class LogContract {
  positive,  ///< require ln^k(r) > 0, i.e. r > e_k
  defined,   ///< only require every intermediate argument to be positive
};

/// ln applied k times; iter_log(0, r) == r.
double iter_log(int k, double r, LogContract contract = LogContract::defined);

/// r * ln r * ... * ln^k r  (the product inside the last term of F_k).
double log_product(int k, double r);

/// F_k(r, mu) = 1/4 (1/r^2 + 1/(r ln r)^2 + ... + (1 + 4 mu^2)/(r ln r ... ln^k r)^2).
/// Requires r > e_k.
double critical_curvature(int k, double r, double mu);

/// Phi_k(r) = (r ln r ... ln^{k-1} r)^{1/2}, k >= 1; phi(1, r) = sqrt(r).
double envelope(int k, double r);

/// The depth-k equation y'' + F_k(r, mu) y = 0 is solved by
/// envelope(k + 1, r) * (A cos(mu L) + B sin(mu L)) with L = ln^{k+1} r,
/// degenerating to envelope(k + 1, r) * (A + B L) at mu = 0.
double phase(int k, double r);

/// Coefficient F_k(r, mu * chi_[a,b](r)) of the kicked equation, defined on
/// [spec.r0, inf) with breakpoints at a and b.
CurvatureProfile kicked_profile(const KickSpec& spec);

/// F_k(r, mu) on (e_k, inf) with no shell (the kick spread over all radii).
CurvatureProfile critical_profile(int k, double mu, double r_min);

// ---------------------------------------------------------------------------
// Linear kick (k = 0)

/// Piecewise solution of the kicked equation with y(r0) = 0, y'(r0) = 1:
/// r^{1/2} ln r on [1, a], r^{1/2}(ln a cos(mu ln(r/a)) + sin(mu ln(r/a))/mu)
/// on [a, b] and (r/b)^{1/2}(alpha + beta ln(r/b)) beyond b, in the
/// normalized variable r / r0.  mu = 0 is dispatched to r^{1/2} ln r.
Jet linear_kick_jet(const KickSpec& spec, double r);
double linear_kick_solution(const KickSpec& spec, double r);

/// Middle branch alone; throws DegenerateMu when mu = 0.
Jet linear_middle_branch(const KickSpec& spec, double r);

struct MatchingCoefficients {
  double A;
  double B;
  double alpha;
  double beta;
};

/// k = 0: alpha, beta of the outer branch (r/b)^{1/2}(alpha + beta ln(r/b)) and
/// A, B of the middle branch r^{1/2}(A cos(mu ln r) + B sin(mu ln r)), all in
/// the normalized variable r / r0.
/// k >= 1: A, B of the middle branch Phi (A cos mu L + B sin mu L) and alpha,
/// beta of the outer branch Phi (alpha + beta L), the latter obtained by C^1
/// matching at b.
MatchingCoefficients matching_coefficients(const KickSpec& spec);

/// Closed form of beta for k >= 1 as it is commonly printed, with
/// cos(mu (L(a) + L(b))) as second term.  Kept only to report the discrepancy
/// against the matched value.
double printed_log_beta(const KickSpec& spec);

/// Piecewise solution of y'' + F_k(r, mu chi) y = 0 for any depth, first
/// branch Phi (L(r) - L(r0)); its slope at r0 is Phi(r0) L'(r0), not 1.
Jet log_kick_jet(const KickSpec& spec, double r);

/// First zero beyond r0 of the linear-kick solution: a e^{phi*/mu} with
/// phi* = pi - atan(mu ln(a/r0)) when that lies in (a, b], otherwise
/// b e^F with F = alpha / (-beta).  Throws NoSecondZero when mu <= lambda.
double second_zero_closed_form(const KickSpec& spec);

/// Same for depth k >= 0 through the log-form coefficients.  The result may
/// overflow to +inf for deep k.
double log_second_zero_closed_form(const KickSpec& spec);

}  // namespace kickbound
