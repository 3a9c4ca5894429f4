#include "kickbound/kick.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kickbound/bifurcator.hpp"
#include "kickbound/errors.hpp"
#include "kickbound/json_io.hpp"
#include "kickbound/numerics.hpp"
#include "kickbound/sl_engine.hpp"

namespace kickbound {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-12;

// Smallest root of cos(lambda L) - lambda c sin(lambda L) on (0, pi / (2L)].
double threshold_root(double L, double c) {
  const double hi = 0.5 * kPi / L;
  if (c == 0.0) return hi;
  const auto g = [L, c](double x) { return std::cos(x * L) - x * c * std::sin(x * L); };
  return numerics::bisect(g, 0.0, hi);
}

bool near_ratio(double x, double target) { return std::abs(x - target) <= 1e-9 * target; }

}  // namespace

double lambda_linear(double r0, double a, double b) {
  KickSpec{r0, a, b, 0.0, 0}.validate();
  return threshold_root(std::log(b / a), std::log(a / r0));
}

double lambda_log(int k, double r0, double a, double b) {
  if (k == 0) return lambda_linear(r0, a, b);
  KickSpec{r0, a, b, 0.0, k}.validate();
  const double L0 = iter_log(k + 1, r0);
  const double La = iter_log(k + 1, a);
  const double Lb = iter_log(k + 1, b);
  return threshold_root(Lb - La, La - L0);
}

double lambda_residual(int k, double r0, double a, double b, double lambda) {
  double dL, c;
  if (k == 0) {
    dL = std::log(b / a);
    c = std::log(a / r0);
  } else {
    const double L0 = iter_log(k + 1, r0);
    const double La = iter_log(k + 1, a);
    dL = iter_log(k + 1, b) - La;
    c = La - L0;
  }
  return 1.0 / std::tan(lambda * dL) - lambda * c;
}

double diameter_bound(const KickSpec& spec, bool all_origins) {
  spec.validate();
  const double lam = lambda_log(spec.k, spec.r0, spec.a, spec.b);
  if (!(spec.mu > lam)) {
    std::ostringstream msg;
    msg << "mu = " << spec.mu << " does not exceed lambda = " << lam;
    throw NoSecondZero(msg.str());
  }
  const double r1 =
      spec.k == 0 ? second_zero_closed_form(spec) : log_second_zero_closed_form(spec);
  return all_origins ? r1 : 2.0 * r1;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Compact: return "Compact";
    case Verdict::NoncompactSide: return "NoncompactSide";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<std::string> threshold_notes(const KickSpec& spec) {
  std::vector<std::string> notes;
  const double e = std::numbers::e;
  if (spec.k == 0 && near_ratio(spec.a / spec.r0, e) && near_ratio(spec.b / spec.r0, e * e)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "literature value lambda ~ 0.46 for a = e, b = e^2 does not solve "
           "cot(lambda ln(b/a)) = lambda ln(a/r0) with r0 = 1; computed root is "
        << lambda_linear(spec.r0, spec.a, spec.b);
    notes.push_back(msg.str());
  }
  if (spec.k >= 1 && spec.mu > 0.0) {
    const double matched = matching_coefficients(spec).beta;
    const double printed = printed_log_beta(spec);
    std::ostringstream msg;
    msg.precision(12);
    msg << "outer-branch beta from C1 matching is " << matched
        << "; the printed closed form with cos(mu (L(a) + L(b))) gives " << printed;
    notes.push_back(msg.str());
  }
  return notes;
}

Certificate certify(const CurvatureProfile& profile, int dimension, const KickSpec& spec,
                    const CertifyOptions& options) {
  spec.validate();
  if (dimension < 2) throw PreconditionError("certify: dimension must be >= 2");
  if (profile.r_min() > spec.r0)
    throw DomainMismatch("certify: profile '" + profile.label() + "' is undefined at r0");
  if (!(options.r_max > spec.b)) throw PreconditionError("certify: r_max must exceed b");

  Certificate cert;
  cert.spec = spec;
  cert.dimension = dimension;
  cert.label = profile.label();
  cert.grid_size = options.grid_size;
  cert.tol = options.tol;
  cert.margin = options.margin;
  cert.r_max = options.r_max;
  cert.all_origins = options.all_origins;
  cert.discrepancy_notes = threshold_notes(spec);

  const int k = spec.k;
  const double lam = lambda_log(k, spec.r0, spec.a, spec.b);
  cert.lambda = lam;

  const auto fail = [&](double r, std::string reason) {
    cert.failing_radius = r;
    cert.reason = std::move(reason);
    if (options.bifurcator) {
      const auto nc = noncompact_side_check(profile, *options.bifurcator, options.r_max,
                                            options.grid_size);
      if (nc.verdict == NoncompactVerdict::NoncompactSide) {
        cert.verdict = Verdict::NoncompactSide;
        cert.reason = "profile lies below the supplied SL-bifurcator '" +
                      options.bifurcator->label() + "' on the grid";
        cert.failing_radius.reset();
        return cert;
      }
    }
    cert.verdict = Verdict::Inconclusive;
    return cert;
  };

  // Base hypothesis: profile >= F_k(r, 0) for r >= r0.
  const auto grid = numerics::log_grid(spec.r0, options.r_max, options.grid_size);
  for (double r : grid) {
    const double base = critical_curvature(k, r, 0.0);
    const double v = profile(r);
    if (!std::isfinite(v)) throw NonFiniteCoefficient(r, profile.label());
    if (v < base * (1.0 - kSlack)) {
      std::ostringstream msg;
      msg << "profile falls below the critical decay F_" << k << "(r, 0)";
      return fail(r, msg.str());
    }
  }

  // Kick hypothesis on the shell, measured as an effective amplitude.
  const std::size_t n_shell = std::max<std::size_t>(1000, options.grid_size / 10);
  const auto shell = numerics::log_grid(spec.a, spec.b, n_shell);
  double mu_eff = std::numeric_limits<double>::infinity();
  double worst_r = spec.a;
  for (double r : shell) {
    const double excess = std::max(0.0, profile(r) - critical_curvature(k, r, 0.0));
    const double m = log_product(k, r) * std::sqrt(excess);
    if (m < mu_eff) {
      mu_eff = m;
      worst_r = r;
    }
  }
  cert.mu_effective = mu_eff;
  if (!(mu_eff > (1.0 + options.margin) * lam)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "kick amplitude " << mu_eff << " on [a, b] does not exceed (1 + " << options.margin
        << ") lambda = " << (1.0 + options.margin) * lam;
    return fail(worst_r, msg.str());
  }

  // Comparison equation with the certified amplitude.
  KickSpec cmp = spec;
  cmp.mu = mu_eff;
  const CurvatureProfile comparison = kicked_profile(cmp);
  const SecondZero z = find_second_zero(comparison, spec.r0, options.r_max, options.tol);
  if (!z.r1) {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = "no second zero of the comparison solution up to r_max";
    cert.failing_radius = options.r_max;
    return cert;
  }
  cert.verdict = Verdict::Compact;
  cert.r0 = spec.r0;
  cert.r1 = *z.r1;
  cert.diameter_bound = options.all_origins ? *z.r1 : 2.0 * *z.r1;

  const SLTrajectory y = integrate_sl(comparison, spec.r0, 0.0, 1.0, *z.r1, options.tol);
  const double n1 = dimension - 1;
  const CurvatureProfile ric = profile.scaled(n1, profile.label() + "*(n-1)");
  cert.index_form = index_form({dimension, &y, spec.r0, *z.r1, ric});
  cert.reason = "hypothesis verified on the sampling grid";
  return cert;
}

nlohmann::ordered_json to_json(const Certificate& c) {
  using json_io::number;
  nlohmann::ordered_json j;
  j["verdict"] = to_string(c.verdict);
  j["r0"] = number(c.r0);
  j["r1"] = number(c.r1);
  j["diameter_bound"] = number(c.diameter_bound);
  j["lambda"] = number(c.lambda);
  j["spec"] = {{"r0", number(c.spec.r0)}, {"a", number(c.spec.a)},   {"b", number(c.spec.b)},
               {"mu", number(c.spec.mu)}, {"k", c.spec.k},           {"n", c.dimension},
               {"all_origins", c.all_origins}};
  j["grid_size"] = c.grid_size;
  j["tolerances"] = {{"tol", number(c.tol)}, {"margin", number(c.margin)},
                     {"r_max", number(c.r_max)}};
  j["discrepancy_notes"] = c.discrepancy_notes;
  j["label"] = c.label;
  j["mu_effective"] = number(c.mu_effective);
  j["index_form"] = number(c.index_form);
  j["failing_radius"] = number(c.failing_radius);
  j["reason"] = c.reason;
  return j;
}

}  // namespace kickbound
