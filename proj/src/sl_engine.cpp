#include "kickbound/sl_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "kickbound/errors.hpp"
#include "kickbound/numerics.hpp"

namespace kickbound {

namespace {

using numerics::QuinticHermite;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
  double w, wp;
};

State operator+(State a, State b) { return {a.w + b.w, a.wp + b.wp}; }
State operator*(double s, State a) { return {s * a.w, s * a.wp}; }

bool strictly_opposite(double a, double b) { return (a < 0 && b > 0) || (a > 0 && b < 0); }

// Coefficient restricted to one piece [lo, hi] between breakpoints; radii on a
// breakpoint edge are nudged inside so the piece's own side is used.
class PieceCoefficient {
 public:
  PieceCoefficient(const CurvatureProfile& p, double lo, double hi, bool lo_is_break,
                   bool hi_is_break)
      : p_(p),
        lo_(lo_is_break ? std::nextafter(lo, hi) : lo),
        hi_(hi_is_break ? std::nextafter(hi, lo) : hi) {}

  double operator()(double r) const {
    const double rr = std::clamp(r, lo_, hi_);
    const double v = p_(rr);
    if (!std::isfinite(v)) throw NonFiniteCoefficient(rr, p_.label());
    return v;
  }

 private:
  const CurvatureProfile& p_;
  double lo_, hi_;
};

double midpoint_residual_of(double r0, double r1, double w0, double wp0, double acc0, double w1,
                            double wp1, double acc1, double b_mid) {
  const double h = r1 - r0;
  const QuinticHermite q(r0, r1, w0, wp0, acc0, w1, wp1, acc1);
  const double w_mid = q.value(0.5 * (r0 + r1));
  const double acc_mid = 1.5 * (wp1 - wp0) / h - 0.25 * (acc0 + acc1);
  return std::abs(acc_mid + b_mid * w_mid) / (std::abs(b_mid * w_mid) + 1.0);
}

}  // namespace

std::size_t SLTrajectory::interval_of(double r) const {
  if (nodes_.size() < 2) return 0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                                   [](double x, const Node& n) { return x < n.r; });
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, nodes_.size() - 2);
}

double SLTrajectory::value(double r) const {
  if (r < r_start() || r > r_end())
    throw DomainError("SLTrajectory::value outside the integrated range");
  if (nodes_.size() == 1) return nodes_.front().w;
  const std::size_t i = interval_of(r);
  const Node &a = nodes_[i], &b = nodes_[i + 1];
  return QuinticHermite(a.r, b.r, a.w, a.wp, acc_lo_[i], b.w, b.wp, acc_hi_[i]).value(r);
}

double SLTrajectory::slope(double r) const {
  if (r < r_start() || r > r_end())
    throw DomainError("SLTrajectory::slope outside the integrated range");
  if (nodes_.size() == 1) return nodes_.front().wp;
  const std::size_t i = interval_of(r);
  const Node &a = nodes_[i], &b = nodes_[i + 1];
  return QuinticHermite(a.r, b.r, a.w, a.wp, acc_lo_[i], b.w, b.wp, acc_hi_[i]).derivative(r);
}

double SLTrajectory::midpoint_residual(std::size_t i) const {
  const Node &a = nodes_[i], &b = nodes_[i + 1];
  const double mid = 0.5 * (a.r + b.r);
  return midpoint_residual_of(a.r, b.r, a.w, a.wp, acc_lo_[i], b.w, b.wp, acc_hi_[i],
                              profile_(mid));
}

double SLTrajectory::ode_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    worst = std::max(worst, midpoint_residual(i));
  return worst;
}

std::vector<MonotoneSegment> SLTrajectory::monotone_segments() const {
  std::vector<MonotoneSegment> out;
  double lo = r_start();
  bool increasing = nodes_.front().wp != 0.0 || nodes_.size() < 2 ? nodes_.front().wp >= 0.0
                                                                   : nodes_[1].wp > 0.0;
  for (double e : extrema_) {
    out.push_back({lo, e, increasing});
    lo = e;
    increasing = !increasing;
  }
  out.push_back({lo, r_end(), increasing});
  return out;
}

void SLTrajectory::locate_events(std::size_t i) {
  const Node &a = nodes_[i], &b = nodes_[i + 1];
  const QuinticHermite q(a.r, b.r, a.w, a.wp, acc_lo_[i], b.w, b.wp, acc_hi_[i]);

  std::vector<double> cuts{a.r};
  if (strictly_opposite(a.wp, b.wp)) {
    const double e = numerics::bracket_root([&](double r) { return q.derivative(r); }, a.r, b.r,
                                            a.wp, b.wp, 1e-3 * tol_ * std::max(1.0, a.r));
    extrema_.push_back(e);
    cuts.push_back(e);
  } else if (b.wp == 0.0 && a.wp != 0.0) {
    extrema_.push_back(b.r);  // w' vanishes exactly on the node
  }
  cuts.push_back(b.r);

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    const double f_lo = k == 0 ? a.w : q.value(lo);
    const double f_hi = k + 2 == cuts.size() ? b.w : q.value(hi);
    if (strictly_opposite(f_lo, f_hi)) {
      zeros_.push_back(numerics::bracket_root([&](double r) { return q.value(r); }, lo, hi, f_lo,
                                              f_hi, 1e-2 * tol_ * std::max(1.0, lo)));
    }
  }
  if (b.w == 0.0 && a.w != 0.0 && b.wp != 0.0) zeros_.push_back(b.r);
}

StartPoint origin_start(const CurvatureProfile& profile, double eps) {
  if (profile.r_min() <= 0.0) {
    const double b0 = profile(0.0);
    if (std::isfinite(b0)) return {0.0, 0.0, 1.0};
  }
  if (profile.r_min() > eps)
    throw DomainMismatch("origin_start: profile '" + profile.label() + "' starts at r = " +
                         std::to_string(profile.r_min()));
  return {eps, eps, 1.0};
}

SLTrajectory integrate_sl(const CurvatureProfile& profile, double r_start, double w0, double w0p,
                          double r_end, const IntegrateOptions& options) {
  const double tol = options.tol;
  if (!(r_start < r_end)) throw PreconditionError("integrate_sl: need r_start < r_end");
  if (!(tol >= 1e-13 && tol <= 1e-3)) throw PreconditionError("integrate_sl: tol outside [1e-13, 1e-3]");
  if (r_start < profile.r_min())
    throw DomainMismatch("integrate_sl: r_start below the profile domain");

  SLTrajectory traj(profile, tol);
  traj.nodes_.push_back({r_start, w0, w0p});

  const double rtol = tol;
  const double atol = 1e-3 * tol;
  const double defect_tol = std::max(tol, kResidualFloor);

  std::vector<double> edges{r_start};
  for (double p : profile.breakpoints_between(r_start, r_end)) edges.push_back(p);
  edges.push_back(r_end);

  State y{w0, w0p};
  std::size_t steps = 0;
  bool done = false;

  for (std::size_t seg = 0; seg + 1 < edges.size() && !done; ++seg) {
    const double lo = edges[seg], hi = edges[seg + 1];
    const PieceCoefficient b(profile, lo, hi, seg > 0, seg + 2 < edges.size());
    auto f = [&](double r, State s) { return State{s.wp, -b(r) * s.w}; };

    double r = lo;
    State k1 = f(r, y);

    // Initial step (Hairer, Norsett & Wanner, II.4).
    auto norm = [&](State d, State ref) {
      const double s0 = atol + rtol * std::abs(ref.w);
      const double s1 = atol + rtol * std::abs(ref.wp);
      return std::sqrt(0.5 * ((d.w / s0) * (d.w / s0) + (d.wp / s1) * (d.wp / s1)));
    };
    double h;
    {
      const double d0 = norm(y, y), d1 = norm(k1, y);
      double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * std::max(1.0, std::abs(r)) : 0.01 * d0 / d1;
      h0 = std::min(h0, hi - lo);
      const State y1 = y + h0 * k1;
      const State k = f(r + h0, y1);
      const double d2 = norm(State{k.w - k1.w, k.wp - k1.wp}, y) / h0;
      const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                   : std::pow(0.01 / std::max(d1, d2), 0.2);
      h = std::min({100 * h0, h1, hi - lo});
    }

    while (r < hi) {
      if (++steps > options.max_steps) throw StepUnderflow(r);
      if (h < 16 * kEps * std::max(1.0, std::abs(r))) throw StepUnderflow(r);
      bool last = false;
      if (r + h >= hi || hi - (r + h) < 1e-6 * h) {
        h = hi - r;
        last = true;
      }

      const State k2 = f(r + c2 * h, y + (h * a21) * k1);
      const State k3 = f(r + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const State k4 = f(r + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const State k5 = f(r + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const State k6 =
          f(r + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const double r_new = last ? hi : r + h;
      const State y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      const State k7 = f(r_new, y_new);
      const State err =
          h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const State ref{std::max(std::abs(y.w), std::abs(y_new.w)),
                      std::max(std::abs(y.wp), std::abs(y_new.wp))};
      const double en = norm(err, ref);
      if (!std::isfinite(en)) throw NonFiniteCoefficient(r, profile.label());

      if (en > 1.0) {
        ++traj.rejected_;
        h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        continue;
      }
      const double defect = midpoint_residual_of(r, r_new, y.w, y.wp, k1.wp, y_new.w, y_new.wp,
                                                 k7.wp, b(0.5 * (r + r_new)));
      if (defect > 0.5 * defect_tol) {
        ++traj.rejected_;
        h *= std::clamp(0.9 * std::pow(0.5 * defect_tol / defect, 0.25), 0.2, 0.9);
        continue;
      }

      traj.acc_lo_.push_back(k1.wp);
      traj.acc_hi_.push_back(k7.wp);
      traj.nodes_.push_back({r_new, y_new.w, y_new.wp});
      const std::size_t before = traj.zeros_.size();
      traj.locate_events(traj.nodes_.size() - 2);
      r = r_new;
      y = y_new;
      k1 = k7;
      h *= std::min(5.0, 0.9 * std::pow(std::max(en, 1e-10), -0.2));

      if (options.stop_at_first_zero && traj.zeros_.size() > before) {
        done = true;
        break;
      }
    }
  }
  return traj;
}

SecondZero find_second_zero(const CurvatureProfile& profile, double r0, double r_max,
                            double tol) {
  if (!(r0 < r_max)) throw PreconditionError("find_second_zero: need r0 < r_max");
  IntegrateOptions opt;
  opt.tol = tol;
  opt.stop_at_first_zero = true;
  const SLTrajectory traj = integrate_sl(profile, r0, 0.0, 1.0, r_max, opt);
  SecondZero out;
  const auto& last = traj.nodes().back();
  out.r_end = last.r;
  out.w_end = last.w;
  out.wp_end = last.wp;
  if (!traj.zeros().empty()) {
    out.r1 = traj.zeros().front();
  } else if (last.w > 0 && last.wp < 0) {
    out.forced_zero_bound = last.r + last.w / -last.wp;
  }
  return out;
}

double index_form(const IndexFormInput& in) {
  if (in.n < 2) throw PreconditionError("index_form: dimension must be >= 2");
  if (in.y == nullptr) throw PreconditionError("index_form: missing trajectory");
  const SLTrajectory& y = *in.y;
  if (!(in.r0 < in.r1)) throw PreconditionError("index_form: need r0 < r1");
  if (in.r0 < y.r_start() || in.r1 > y.r_end())
    throw DomainMismatch("index_form: [r0, r1] outside the trajectory");
  if (in.r0 < in.ric.r_min()) throw DomainMismatch("index_form: ric undefined at r0");
  for (double r : {in.r0, in.r1}) {
    const double slack = 10.0 * y.tol() * std::max(1.0, std::abs(r)) *
                         std::max(1.0, std::abs(y.slope(r)));
    if (std::abs(y.value(r)) > slack)
      throw PreconditionError("index_form: y does not vanish at r = " + std::to_string(r));
  }

  std::vector<double> cuts{in.r0};
  for (const auto& n : y.nodes())
    if (n.r > in.r0 && n.r < in.r1) cuts.push_back(n.r);
  for (double p : in.ric.breakpoints_between(in.r0, in.r1)) cuts.push_back(p);
  cuts.push_back(in.r1);
  std::sort(cuts.begin(), cuts.end());

  const auto& g = numerics::gauss8();
  double kinetic = 0.0, potential = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], h = cuts[i + 1] - lo;
    if (h <= 0) continue;
    for (std::size_t j = 0; j < g.size; ++j) {
      const double r = lo + h * g.nodes[j];
      const double v = y.value(r), s = y.slope(r);
      kinetic += h * g.weights[j] * s * s;
      potential += h * g.weights[j] * in.ric(r) * v * v;
    }
  }
  return (in.n - 1) * kinetic - potential;
}

PiconeReport picone_residual(const CurvatureProfile& b, const CurvatureProfile& c, double r_max,
                             double tol, std::optional<double> window_hi) {
  // Common normalized start for both equations.
  StartPoint start{0.0, 0.0, 1.0};
  const double left = std::max(b.r_min(), c.r_min());
  if (left > 0.0 || !std::isfinite(b(0.0)) || !std::isfinite(c(0.0))) {
    const StartPoint sb = origin_start(b), sc = origin_start(c);
    const double r = std::max(sb.r, sc.r);
    start = {r, r, 1.0};
  }
  const double hi = window_hi.value_or(r_max);
  if (!(hi > start.r) || hi > r_max) throw PreconditionError("picone_residual: bad window");

  const SLTrajectory w = integrate_sl(b, start.r, start.w, start.wp, hi, tol);
  const SLTrajectory y = integrate_sl(c, start.r, start.w, start.wp, hi, tol);
  if (!y.zeros().empty()) throw YVanished(y.zeros().front());
  if (!w.zeros().empty())
    throw PreconditionError("picone_residual: reference solution w vanishes in the window");

  std::vector<double> cuts;
  for (const auto& n : y.nodes()) cuts.push_back(n.r);
  for (double p : b.breakpoints_between(start.r, hi)) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double x) {
    const double wv = w.value(x), wpv = w.slope(x);
    const double yv = y.value(x), ypv = y.slope(x);
    const double q = (wpv * yv - wv * ypv) / yv;
    return (c(x) - b(x)) * wv * wv + q * q;
  };

  PiconeReport rep;
  rep.window_lo = start.r;
  rep.window_hi = hi;
  rep.bound = 10.0 * tol * (hi - start.r);
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    cumulative += numerics::gauss_integral(integrand, cuts[i], cuts[i + 1]);
    const double x = cuts[i + 1];
    const double wv = w.value(x), wpv = w.slope(x);
    const double yv = y.value(x), ypv = y.slope(x);
    const double lhs = ypv / yv;
    const double rhs = wpv / wv - cumulative / (wv * wv);
    rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs));
    ++rep.samples;
  }
  rep.within_bound = rep.max_residual <= rep.bound;
  return rep;
}

}  // namespace kickbound
