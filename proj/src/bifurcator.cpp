#include "kickbound/bifurcator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "kickbound/errors.hpp"
#include "kickbound/json_io.hpp"
#include "kickbound/numerics.hpp"
#include "kickbound/sl_engine.hpp"

namespace kickbound {

namespace {

constexpr double kSlack = 1e-12;

double start_radius(const CurvatureProfile& b) { return origin_start(b).r; }

// Least-squares slope of log f against log r on n log-spaced points.
double loglog_slope(const std::function<double(double)>& f, double lo, double hi, int n = 21) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1);
    const double y = std::log(std::abs(f(std::clamp(std::exp(x), lo, hi))));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::string to_string(BifurcatorClass c) {
  switch (c) {
    case BifurcatorClass::Bifurcator: return "Bifurcator";
    case BifurcatorClass::NotBifurcator: return "NotBifurcator";
    case BifurcatorClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(NotBifurcatorReason r) {
  switch (r) {
    case NotBifurcatorReason::None: return "None";
    case NotBifurcatorReason::SecondZero: return "SecondZero";
    case NotBifurcatorReason::Unbounded: return "Unbounded";
    case NotBifurcatorReason::NonMonotone: return "NonMonotone";
  }
  return "None";
}

std::string to_string(BoundaryVerdict v) {
  return v == BoundaryVerdict::CompactSide ? "CompactSide" : "NoEvidence";
}

std::string to_string(NoncompactVerdict v) {
  return v == NoncompactVerdict::NoncompactSide ? "NoncompactSide" : "NotApplicable";
}

BifurcatorReport classify(const CurvatureProfile& b, const ClassifyOptions& opt) {
  const StartPoint s = origin_start(b, opt.eps);
  if (!(opt.r_max > 2.0 * s.r)) throw PreconditionError("classify: r_max too small");
  const SLTrajectory w = integrate_sl(b, s.r, s.w, s.wp, opt.r_max, opt.tol);

  BifurcatorReport rep;
  rep.label = b.label();
  rep.r_start = s.r;
  rep.r_max = opt.r_max;
  rep.tol = opt.tol;
  rep.w_at_rmax = w.nodes().back().w;
  rep.wp_at_rmax = w.nodes().back().wp;
  rep.w_at_half = w.value(0.5 * opt.r_max);
  rep.tail_increment = rep.w_at_rmax - rep.w_at_half;
  rep.tail_tol = opt.tail_rel_tol * std::abs(rep.w_at_rmax);
  if (!w.zeros().empty()) rep.first_zero = w.zeros().front();
  if (!w.extrema().empty()) rep.first_extremum = w.extrema().front();

  if (rep.first_zero) {
    rep.classification = BifurcatorClass::NotBifurcator;
    rep.reason = NotBifurcatorReason::SecondZero;
    return rep;
  }
  if (rep.first_extremum) {
    rep.classification = BifurcatorClass::NotBifurcator;
    rep.reason = NotBifurcatorReason::NonMonotone;
    return rep;
  }
  if (rep.w_at_rmax > opt.unbounded_cap && rep.wp_at_rmax >= opt.unbounded_slope) {
    rep.classification = BifurcatorClass::NotBifurcator;
    rep.reason = NotBifurcatorReason::Unbounded;
    return rep;
  }
  if (rep.tail_increment > rep.tail_tol) return rep;

  rep.classification = BifurcatorClass::Bifurcator;
  const double p = std::log(rep.wp_at_rmax / w.slope(0.5 * opt.r_max)) / std::log(2.0);
  rep.w_limit = p < -1.0 ? rep.w_at_rmax + rep.wp_at_rmax * opt.r_max / (-p - 1.0)
                         : rep.w_at_rmax;
  return rep;
}

AbreschReport abresch_checks(const CurvatureProfile& b, double r_max, double tol) {
  AbreschReport rep;
  const double r_lo = start_radius(b);

  // (a) dyadic pieces of int r b(r) dr from r_max down to r_lo.
  std::vector<double> cuts{r_max};
  while (cuts.back() / 2.0 > std::max(r_lo, 1.0)) cuts.push_back(cuts.back() / 2.0);
  cuts.push_back(r_lo);
  std::reverse(cuts.begin(), cuts.end());
  for (double p : b.breakpoints_between(r_lo, r_max)) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto rb = [&b](double r) { return r * b(r); };
  rep.moment_quadrature_converged = true;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = numerics::adaptive_integral(rb, cuts[i], cuts[i + 1], 1e-13);
    rep.moment_integral += q.value;
    rep.moment_quadrature_converged = rep.moment_quadrature_converged && q.converged;
  }
  const auto last = numerics::adaptive_integral(rb, 0.5 * r_max, r_max, 1e-13);
  const auto prev = numerics::adaptive_integral(rb, 0.25 * r_max, 0.5 * r_max, 1e-13);
  rep.moment_last_dyad = last.value;
  rep.moment_tail_ratio = last.value / prev.value;
  const double q = rep.moment_tail_ratio;
  rep.moment_tail_bound = q < 1.0 ? last.value * q / (1.0 - q)
                                  : std::numeric_limits<double>::infinity();

  // (b) limit derivative of w.
  const StartPoint s = origin_start(b);
  const SLTrajectory w = integrate_sl(b, s.r, s.w, s.wp, r_max, tol);
  if (!w.zeros().empty()) throw PreconditionError("abresch_checks: w vanishes before r_max");
  rep.wp_at_rmax = w.nodes().back().wp;
  rep.wp_loglog_slope =
      loglog_slope([&w](double r) { return w.slope(r); }, 0.25 * r_max, r_max);
  rep.wp_has_limit = rep.wp_at_rmax > 0.0 && rep.wp_loglog_slope < 0.0;

  // (c) second solution past the last structure of b.
  double r_split = std::max(1.0, 2.0 * s.r);
  for (double p : b.breakpoints()) r_split = std::max(r_split, p);
  rep.r_split = r_split;
  const auto inv_w2 = [&w](double r) {
    const double v = w.value(r);
    return 1.0 / (v * v);
  };
  std::vector<double> dyads{r_split};
  while (dyads.back() * 2.0 < r_max) dyads.push_back(dyads.back() * 2.0);
  dyads.push_back(r_max);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < dyads.size(); ++i)
    integral += numerics::adaptive_integral(inv_w2, dyads[i], dyads[i + 1], 1e-13).value;
  const double w_end = w.nodes().back().w;
  rep.v_at_rmax = w_end * integral;
  rep.vp_at_rmax = rep.wp_at_rmax * integral + 1.0 / w_end;

  const double w_split = w.value(r_split);
  const SLTrajectory v = integrate_sl(b, r_split, 0.0, 1.0 / w_split, r_max, tol);
  rep.v_ode_at_rmax = v.nodes().back().w;
  rep.v_relative_mismatch =
      std::abs(rep.v_ode_at_rmax - rep.v_at_rmax) / std::max(1.0, std::abs(rep.v_at_rmax));
  for (const auto& n : v.nodes()) {
    const double wr = w.value(n.r), wpr = w.slope(n.r);
    rep.wronskian_deviation = std::max(rep.wronskian_deviation, std::abs(wr * n.wp - wpr * n.w - 1.0));
  }
  rep.v_diverges = std::abs(rep.v_at_rmax) > 1e3;
  return rep;
}

BoundaryReport boundary_test(const CurvatureProfile& b, const CurvatureProfile& c, double r_max,
                             double tol, std::size_t grid_size) {
  const StartPoint s = origin_start(c);
  const double lo = std::max(s.r, start_radius(b));
  BoundaryReport rep;
  rep.r_max = r_max;
  for (double r : numerics::sampling_grid(lo, r_max, grid_size)) {
    const double bv = b(r), cv = c(r);
    if (cv < bv - kSlack * std::abs(bv)) throw ExceedanceViolated(r);
    if (cv - bv > rep.max_excess) {
      rep.max_excess = cv - bv;
      rep.max_excess_radius = r;
    }
  }
  IntegrateOptions opt;
  opt.tol = tol;
  opt.stop_at_first_zero = true;
  const SLTrajectory y = integrate_sl(c, s.r, s.w, s.wp, r_max, opt);
  rep.w_end = y.nodes().back().w;
  rep.wp_end = y.nodes().back().wp;
  if (!y.zeros().empty()) {
    rep.verdict = BoundaryVerdict::CompactSide;
    rep.second_zero = y.zeros().front();
    rep.note = "second zero found";
  } else {
    rep.verdict = BoundaryVerdict::NoEvidence;
    if (rep.w_end > 0 && rep.wp_end < 0) rep.forced_zero_bound = r_max + rep.w_end / -rep.wp_end;
    rep.note = rep.max_excess > 0.0
                   ? "no zero up to r_max; the comparison solution may vanish further out"
                   : "c does not exceed b anywhere on the grid";
  }
  return rep;
}

NoncompactReport noncompact_side_check(const CurvatureProfile& profile_sup,
                                       const CurvatureProfile& b, double r_max,
                                       std::size_t grid_size) {
  const double lo = std::max(profile_sup.r_min(), b.r_min());
  NoncompactReport rep;
  rep.r_max = r_max;
  rep.verdict = NoncompactVerdict::NoncompactSide;
  for (double r : numerics::sampling_grid(lo, r_max, grid_size)) {
    const double bv = b(r);
    if (!std::isfinite(bv)) continue;
    if (profile_sup(r) > bv + kSlack * std::abs(bv)) {
      rep.verdict = NoncompactVerdict::NotApplicable;
      rep.first_violation = r;
      break;
    }
  }
  rep.liminf_diagnostic = std::numeric_limits<double>::infinity();
  for (double r : numerics::log_grid(0.5 * r_max, r_max, 257))
    rep.liminf_diagnostic = std::min(rep.liminf_diagnostic, b(r));
  return rep;
}

nlohmann::ordered_json to_json(const BifurcatorReport& r) {
  using json_io::number;
  nlohmann::ordered_json j;
  j["classification"] = to_string(r.classification);
  j["reason"] = to_string(r.reason);
  j["label"] = r.label;
  j["w_limit"] = number(r.w_limit);
  j["w_at_rmax"] = number(r.w_at_rmax);
  j["wp_at_rmax"] = number(r.wp_at_rmax);
  j["tail_increment"] = number(r.tail_increment);
  j["tail_tol"] = number(r.tail_tol);
  j["first_zero"] = number(r.first_zero);
  j["first_extremum"] = number(r.first_extremum);
  j["r_start"] = number(r.r_start);
  j["r_max"] = number(r.r_max);
  j["tol"] = number(r.tol);
  return j;
}

nlohmann::ordered_json to_json(const AbreschReport& r) {
  using json_io::number;
  nlohmann::ordered_json j;
  j["moment_integral"] = number(r.moment_integral);
  j["moment_tail_ratio"] = number(r.moment_tail_ratio);
  j["moment_tail_bound"] = number(r.moment_tail_bound);
  j["moment_quadrature_converged"] = r.moment_quadrature_converged;
  j["wp_at_rmax"] = number(r.wp_at_rmax);
  j["wp_loglog_slope"] = number(r.wp_loglog_slope);
  j["wp_has_limit"] = r.wp_has_limit;
  j["vp_at_rmax"] = number(r.vp_at_rmax);
  j["r_split"] = number(r.r_split);
  j["v_at_rmax"] = number(r.v_at_rmax);
  j["v_ode_at_rmax"] = number(r.v_ode_at_rmax);
  j["wronskian_deviation"] = number(r.wronskian_deviation);
  j["v_diverges"] = r.v_diverges;
  return j;
}

nlohmann::ordered_json to_json(const BoundaryReport& r) {
  using json_io::number;
  nlohmann::ordered_json j;
  j["verdict"] = to_string(r.verdict);
  j["second_zero"] = number(r.second_zero);
  j["r_max"] = number(r.r_max);
  j["max_excess"] = number(r.max_excess);
  j["max_excess_radius"] = number(r.max_excess_radius);
  j["w_end"] = number(r.w_end);
  j["wp_end"] = number(r.wp_end);
  j["forced_zero_bound"] = number(r.forced_zero_bound);
  j["note"] = r.note;
  return j;
}

nlohmann::ordered_json to_json(const NoncompactReport& r) {
  using json_io::number;
  nlohmann::ordered_json j;
  j["verdict"] = to_string(r.verdict);
  j["first_violation"] = number(r.first_violation);
  j["liminf_diagnostic"] = number(r.liminf_diagnostic);
  j["r_max"] = number(r.r_max);
  return j;
}

}  // namespace kickbound
