#include "kickbound/planar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "kickbound/errors.hpp"
#include "kickbound/json_io.hpp"
#include "kickbound/numerics.hpp"
#include "kickbound/profile.hpp"

namespace kickbound {

namespace {

constexpr std::size_t kNodes = numerics::GaussRule::size;
using Matrix = std::array<std::array<double, kNodes>, kNodes>;

// A[j][m] = int_0^{t_j} l_m(t) dt for the Lagrange basis on the Gauss nodes,
// so that theta(t_j) = theta_0 + h sum_m A[j][m] kappa(t_m).
const Matrix& collocation_matrix() {
  static const Matrix A = [] {
    const auto& g = numerics::gauss8();
    Matrix out{};
    for (std::size_t j = 0; j < kNodes; ++j) {
      const double tj = g.nodes[j];
      for (std::size_t m = 0; m < kNodes; ++m) {
        double sum = 0.0;
        for (std::size_t q = 0; q < kNodes; ++q) {
          const double t = tj * g.nodes[q];
          double l = 1.0;
          for (std::size_t p = 0; p < kNodes; ++p)
            if (p != m) l *= (t - g.nodes[p]) / (g.nodes[m] - g.nodes[p]);
          sum += g.weights[q] * l;
        }
        out[j][m] = tj * sum;
      }
    }
    return out;
  }();
  return A;
}

struct StepResult {
  double dtheta, dx, dy;
};

StepResult integrate_step(const std::function<double(double)>& kappa, double s0, double h,
                          double theta0) {
  const auto& g = numerics::gauss8();
  const Matrix& A = collocation_matrix();
  std::array<double, kNodes> k{};
  for (std::size_t m = 0; m < kNodes; ++m) {
    k[m] = kappa(s0 + h * g.nodes[m]);
    if (!std::isfinite(k[m])) throw NonFiniteCoefficient(s0 + h * g.nodes[m], "kappa");
  }
  StepResult out{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < kNodes; ++j) {
    double th = 0.0;
    for (std::size_t m = 0; m < kNodes; ++m) th += A[j][m] * k[m];
    th = theta0 + h * th;
    out.dtheta += g.weights[j] * k[j];
    out.dx += g.weights[j] * std::cos(th);
    out.dy += g.weights[j] * std::sin(th);
  }
  out.dtheta *= h;
  out.dx *= h;
  out.dy *= h;
  return out;
}

int sign_of(const boost::multiprecision::cpp_rational& v) { return v.sign(); }

bool within(double a, double b, double c) { return std::min(a, b) <= c && c <= std::max(a, b); }

bool on_segment(const CurveSample& p, const CurveSample& q, const CurveSample& r) {
  return within(p.x, q.x, r.x) && within(p.y, q.y, r.y);
}

bool segments_intersect(const CurveSample& p1, const CurveSample& p2, const CurveSample& q1,
                        const CurveSample& q2) {
  const int d1 = orient2d(q1.x, q1.y, q2.x, q2.y, p1.x, p1.y);
  const int d2 = orient2d(q1.x, q1.y, q2.x, q2.y, p2.x, p2.y);
  const int d3 = orient2d(p1.x, p1.y, p2.x, p2.y, q1.x, q1.y);
  const int d4 = orient2d(p1.x, p1.y, p2.x, p2.y, q2.x, q2.y);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  const double detleft = (ax - cx) * (by - cy);
  const double detright = (ay - cy) * (bx - cx);
  const double det = detleft - detright;
  constexpr double eps = std::numeric_limits<double>::epsilon() / 2.0;
  constexpr double errbound = (3.0 + 16.0 * eps) * eps;
  const double bound = errbound * (std::abs(detleft) + std::abs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  using Q = boost::multiprecision::cpp_rational;
  const Q exact = (Q(ax) - Q(cx)) * (Q(by) - Q(cy)) - (Q(ay) - Q(cy)) * (Q(bx) - Q(cx));
  return sign_of(exact);
}

PlanarCurve reconstruct(const std::function<double(double)>& kappa, double s_lo, double s_hi,
                        double step, const Frame& frame, const std::vector<double>& knots) {
  if (!(s_lo < s_hi)) throw PreconditionError("reconstruct: need s_lo < s_hi");
  if (!(step > 0.0)) throw PreconditionError("reconstruct: step must be positive");
  const double anchor = (s_lo <= 0.0 && 0.0 <= s_hi) ? 0.0 : s_lo;

  std::vector<double> grid;
  const auto n_hi = static_cast<std::size_t>(std::ceil((s_hi - anchor) / step));
  const auto n_lo = static_cast<std::size_t>(std::ceil((anchor - s_lo) / step));
  for (std::size_t i = n_lo; i > 0; --i) grid.push_back(std::max(s_lo, anchor - i * step));
  for (std::size_t i = 0; i <= n_hi; ++i) grid.push_back(std::min(s_hi, anchor + i * step));
  for (double k : knots)
    if (k > s_lo && k < s_hi) grid.push_back(k);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t ia =
      static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), anchor) - grid.begin());
  PlanarCurve c;
  c.s_lo = s_lo;
  c.s_hi = s_hi;
  c.samples.resize(grid.size());
  c.samples[ia] = {anchor, frame.x, frame.y, frame.angle, kappa(anchor)};
  for (std::size_t i = ia; i + 1 < grid.size(); ++i) {
    const auto& p = c.samples[i];
    const StepResult st = integrate_step(kappa, grid[i], grid[i + 1] - grid[i], p.theta);
    c.samples[i + 1] = {grid[i + 1], p.x + st.dx, p.y + st.dy, p.theta + st.dtheta,
                        kappa(grid[i + 1])};
  }
  for (std::size_t i = ia; i > 0; --i) {
    const auto& p = c.samples[i];
    const StepResult st = integrate_step(kappa, grid[i], grid[i - 1] - grid[i], p.theta);
    c.samples[i - 1] = {grid[i - 1], p.x + st.dx, p.y + st.dy, p.theta + st.dtheta,
                        kappa(grid[i - 1])};
  }
  return c;
}

double parabola_x_of_s(double k, double s) {
  if (!(k > 0.0)) throw PreconditionError("parabola: k must be positive");
  if (!(s >= 0.0)) throw PreconditionError("parabola: s must be >= 0");
  if (s == 0.0) return 0.0;
  const auto arc = [k](double x) {
    const double q = 2.0 * k * x;
    return 0.5 * (x * std::sqrt(1.0 + q * q) + std::asinh(q) / (2.0 * k));
  };
  double lo = 0.0, hi = std::min(s, std::sqrt(s / k) + 1.0);
  while (arc(hi) < s) hi *= 2.0;
  double x = std::clamp(std::sqrt(s / k), lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double f = arc(x) - s;
    if (f == 0.0) return x;
    if (f > 0.0) hi = x;
    else lo = x;
    const double q = 2.0 * k * x;
    double next = x - f / std::sqrt(1.0 + q * q);
    if (!(next > lo && next < hi)) next = lo + 0.5 * (hi - lo);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x) return next;
    x = next;
  }
  return x;
}

double parabola_curvature(double k, double s) {
  const double x = parabola_x_of_s(k, std::abs(s));
  const double q = 2.0 * k * x;
  const double d = 1.0 + q * q;
  return 2.0 * k / (d * std::sqrt(d));
}

std::optional<Intersection> self_intersects(const PlanarCurve& curve) {
  const auto& p = curve.samples;
  if (p.size() < 3) throw PreconditionError("self_intersects: need at least 2 segments");
  const std::size_t n = p.size() - 1;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::hypot(p[i + 1].x - p[i].x, p[i + 1].y - p[i].y);
  const double cell = std::max(4.0 * total / static_cast<double>(n), 1e-300);

  const auto key = [](std::int64_t cx, std::int64_t cy) {
    return static_cast<std::uint64_t>(cx) * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(cy);
  };
  struct Cell {
    std::int64_t cx, cy;
    std::vector<std::size_t> segs;
  };
  std::unordered_map<std::uint64_t, std::vector<Cell>> grid;
  const auto cells_of = [&](std::size_t i, auto&& visit) {
    const auto lo_x = static_cast<std::int64_t>(std::floor(std::min(p[i].x, p[i + 1].x) / cell));
    const auto hi_x = static_cast<std::int64_t>(std::floor(std::max(p[i].x, p[i + 1].x) / cell));
    const auto lo_y = static_cast<std::int64_t>(std::floor(std::min(p[i].y, p[i + 1].y) / cell));
    const auto hi_y = static_cast<std::int64_t>(std::floor(std::max(p[i].y, p[i + 1].y) / cell));
    for (auto cx = lo_x; cx <= hi_x; ++cx)
      for (auto cy = lo_y; cy <= hi_y; ++cy) visit(cx, cy);
  };

  for (std::size_t j = 0; j < n; ++j) {
    std::optional<std::size_t> best;
    cells_of(j, [&](std::int64_t cx, std::int64_t cy) {
      const auto it = grid.find(key(cx, cy));
      if (it == grid.end()) return;
      for (const Cell& c : it->second) {
        if (c.cx != cx || c.cy != cy) continue;
        for (std::size_t i : c.segs) {
          if (i + 1 >= j || (best && i >= *best)) continue;
          if (segments_intersect(p[i], p[i + 1], p[j], p[j + 1])) best = i;
        }
      }
    });
    if (best) return Intersection{*best, j, p[*best].s, p[j].s};
    cells_of(j, [&](std::int64_t cx, std::int64_t cy) {
      auto& bucket = grid[key(cx, cy)];
      for (Cell& c : bucket) {
        if (c.cx == cx && c.cy == cy) {
          c.segs.push_back(j);
          return;
        }
      }
      bucket.push_back({cx, cy, {j}});
    });
  }
  return std::nullopt;
}

std::string to_string(TransitionVerdict v) {
  switch (v) {
    case TransitionVerdict::Embedded: return "Embedded";
    case TransitionVerdict::SelfIntersecting: return "SelfIntersecting";
    case TransitionVerdict::WindowTooSmall: return "WindowTooSmall";
  }
  return "Embedded";
}

TransitionEntry kick_family_member(double t, const KickFamilyOptions& opt) {
  if (!(opt.window > 1.0)) throw PreconditionError("kick family: window must exceed the bump support");
  const std::function<double(double)> bump =
      opt.bump ? opt.bump : std::function<double(double)>(mollifier);
  const double k = opt.k;
  const auto kappa = [&bump, k, t](double s) { return parabola_curvature(k, s) + t * bump(s); };
  const PlanarCurve c = reconstruct(kappa, -opt.window, opt.window, opt.step, {}, {-1.0, 1.0});

  TransitionEntry e;
  e.t = t;
  e.total_turn = c.samples.back().theta - c.samples.front().theta;
  e.intersection = self_intersects(c);
  if (e.intersection) {
    e.verdict = TransitionVerdict::SelfIntersecting;
    e.witness_window = std::max({std::abs(e.intersection->s_i), std::abs(e.intersection->s_j),
                                 std::abs(c.samples[e.intersection->i + 1].s),
                                 std::abs(c.samples[e.intersection->j + 1].s)});
  } else if (t > 0.0 && e.total_turn < std::numbers::pi) {
    throw WindowTooSmall("t = " + std::to_string(t) + ": total turn " +
                         std::to_string(e.total_turn) + " < pi on window " +
                         std::to_string(opt.window));
  }
  return e;
}

TransitionReport kick_family_transition(const std::vector<double>& ts,
                                        const KickFamilyOptions& opt) {
  std::vector<std::future<TransitionEntry>> jobs;
  jobs.reserve(ts.size());
  for (double t : ts) {
    jobs.push_back(std::async(std::launch::async, [t, &opt] {
      try {
        return kick_family_member(t, opt);
      } catch (const WindowTooSmall&) {
        TransitionEntry e;
        e.t = t;
        e.verdict = TransitionVerdict::WindowTooSmall;
        return e;
      }
    }));
  }
  TransitionReport rep;
  rep.options = opt;
  for (auto& j : jobs) rep.entries.push_back(j.get());
  for (std::size_t i = 0; i + 1 < rep.entries.size(); ++i) {
    const auto& a = rep.entries[i];
    const auto& b = rep.entries[i + 1];
    const bool ia = a.verdict == TransitionVerdict::SelfIntersecting;
    const bool ib = b.verdict == TransitionVerdict::SelfIntersecting;
    if (ia == ib) continue;
    ++rep.crossings;
    if (!ia && !rep.bracket) rep.bracket = std::make_pair(a.t, b.t);
  }
  return rep;
}

void write_curve_csv(std::ostream& out, const PlanarCurve& curve) {
  out << "s,x,y,theta,kappa\n";
  char line[160];
  for (const auto& p : curve.samples) {
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g\n", p.s, p.x, p.y, p.theta,
                  p.kappa);
    out << line;
  }
}

nlohmann::ordered_json to_json(const TransitionReport& r) {
  using json_io::number;
  nlohmann::ordered_json j;
  j["family"] = "parabola-kick";
  j["k"] = number(r.options.k);
  j["window"] = number(r.options.window);
  j["step"] = number(r.options.step);
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json x;
    x["t"] = number(e.t);
    x["verdict"] = to_string(e.verdict);
    if (e.intersection)
      x["first_intersection_s_pair"] = {number(e.intersection->s_i), number(e.intersection->s_j)};
    else
      x["first_intersection_s_pair"] = nullptr;
    x["window"] = number(r.options.window);
    x["witness_window"] = number(e.witness_window);
    x["total_turn"] = number(e.total_turn);
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  j["crossings"] = r.crossings;
  if (r.bracket)
    j["transition_bracket"] = {number(r.bracket->first), number(r.bracket->second)};
  else
    j["transition_bracket"] = nullptr;
  return j;
}

}  // namespace kickbound
