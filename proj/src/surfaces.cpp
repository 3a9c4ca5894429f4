#include "kickbound/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "kickbound/errors.hpp"

namespace kickbound {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double speed(const RevolutionSurface& s, double rho) {
  const double d = s.dz(rho);
  return std::sqrt(1.0 + d * d);
}

// Meridians approaching a finite edge are parametrized by u = rho_max - rho.
bool edge_parametrized(const RevolutionSurface& s) {
  return std::isfinite(s.rho_max) && s.rho_max <= 1e3;
}

void check_rho(const RevolutionSurface& s, double rho) {
  if (!(rho >= 0.0) || !(rho < s.rho_max))
    throw DomainError(s.label + ": rho = " + std::to_string(rho) + " outside [0, " +
                      std::to_string(s.rho_max) + ")");
}

}  // namespace

RevolutionSurface capped_cylinder(double cap) {
  if (!(cap >= 0.0 && cap < 1.0)) throw PreconditionError("capped_cylinder: cap must be in [0, 1)");
  RevolutionSurface s;
  s.rho_max = 1.0;
  s.rim = cap;
  const auto z = [](double rho) { return 1.0 / (1.0 - rho); };
  const auto dz = [](double rho) { return 1.0 / ((1.0 - rho) * (1.0 - rho)); };
  const auto d2z = [](double rho) {
    const double u = 1.0 - rho;
    return 2.0 / (u * u * u);
  };
  if (cap == 0.0) {
    s.label = "capped-cylinder-raw";
    s.z = z;
    s.dz = dz;
    s.d2z = d2z;
    return s;
  }
  const double slope = dz(cap);
  const double R = cap * std::sqrt(1.0 + 1.0 / (slope * slope));
  const double z0 = z(cap) + std::sqrt(R * R - cap * cap);
  s.label = "capped-cylinder";
  s.z = [=](double rho) { return rho <= cap ? z0 - std::sqrt(R * R - rho * rho) : z(rho); };
  s.dz = [=](double rho) { return rho <= cap ? rho / std::sqrt(R * R - rho * rho) : dz(rho); };
  s.d2z = [=](double rho) {
    if (rho > cap) return d2z(rho);
    const double q = R * R - rho * rho;
    return R * R / (q * std::sqrt(q));
  };
  return s;
}

RevolutionSurface paraboloid(double c) {
  if (!(c > 0.0)) throw PreconditionError("paraboloid: coefficient must be positive");
  RevolutionSurface s;
  s.label = "paraboloid";
  s.rho_max = std::numeric_limits<double>::infinity();
  s.z = [c](double rho) { return c * rho * rho; };
  s.dz = [c](double rho) { return 2.0 * c * rho; };
  s.d2z = [c](double) { return 2.0 * c; };
  return s;
}

RevolutionSurface flat_disk(double rho_max) {
  return linear_graph(0.0, 0.0, rho_max);
}

RevolutionSurface linear_graph(double slope, double offset, double rho_max) {
  RevolutionSurface s;
  s.label = slope == 0.0 && offset == 0.0 ? "flat-disk" : "linear-graph";
  s.rho_max = rho_max;
  s.z = [=](double rho) { return slope * rho + offset; };
  s.dz = [=](double) { return slope; };
  s.d2z = [](double) { return 0.0; };
  return s;
}

double profile_curvature(const RevolutionSurface& s, double rho) {
  check_rho(s, rho);
  const double d = s.dz(rho);
  const double q = 1.0 + d * d;
  return s.d2z(rho) / (q * std::sqrt(q));
}

double gauss_curvature(const RevolutionSurface& s, double rho, CurvatureMode mode) {
  check_rho(s, rho);
  if (!(rho > 0.0)) throw DomainError(s.label + ": Gaussian curvature formula is singular on the axis");
  if (mode == CurvatureMode::paper) return profile_curvature(s, rho) / rho;
  const double d = s.dz(rho);
  const double q = 1.0 + d * d;
  return d * s.d2z(rho) / (rho * q * q);
}

double axis_curvature(const RevolutionSurface& s) {
  const double c = s.d2z(0.0);
  return c * c;
}

numerics::QuadratureResult geodesic_radius(const RevolutionSurface& s, double rho) {
  check_rho(s, rho);
  std::vector<double> cuts{0.0};
  if (s.rim > 0.0 && rho > s.rim) cuts.push_back(s.rim);
  double x = cuts.back();
  if (edge_parametrized(s)) {
    double u = s.rho_max - x;
    while (s.rho_max - 0.5 * u < rho) {
      u *= 0.5;
      cuts.push_back(s.rho_max - u);
    }
  } else {
    for (x = std::max(1.0, 2.0 * x); x < rho; x *= 2.0) cuts.push_back(x);
  }
  cuts.push_back(rho);
  numerics::QuadratureResult out;
  out.converged = true;
  const auto f = [&s](double u) { return speed(s, u); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const auto q = numerics::adaptive_integral(f, cuts[i], cuts[i + 1], 1e-13);
    out.value += q.value;
    out.error += q.error;
    out.converged = out.converged && q.converged;
  }
  return out;
}

struct SurfaceProfile::State {
  RevolutionSurface surface;
  std::vector<double> rho, r;
  std::vector<SurfaceSample> samples;
  numerics::MonotoneSpline rho_of_r;
  double tail_k = 0.0, tail_r = 0.0, tail_p = 0.0;

  double arclength(std::size_t i, double rho_hi) const {
    return numerics::gauss_integral([this](double u) { return speed(surface, u); }, rho[i],
                                    rho_hi);
  }

  double rho_at(double rr) const {
    if (rr <= 0.0) return 0.0;
    if (rr >= r.back()) throw DomainError(surface.label + ": radius beyond the tabulated range");
    const auto it = std::upper_bound(r.begin(), r.end(), rr);
    const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    double lo = rho[i], hi = rho[i + 1];
    double x = std::clamp(rho_of_r(rr), lo, hi);
    for (int it_n = 0; it_n < 50; ++it_n) {
      const double f = r[i] + arclength(i, x) - rr;
      if (f == 0.0) return x;
      if (f > 0.0) hi = x;
      else lo = x;
      double next = x - f / speed(surface, x);
      if (!(next > lo && next < hi)) next = lo + 0.5 * (hi - lo);
      if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x) ||
          next == lo || next == hi) {
        return next;
      }
      x = next;
    }
    return x;
  }

  double curvature(double rr) const {
    if (rr >= r.back()) return tail_k * std::pow(rr / tail_r, tail_p);
    const double x = rho_at(rr);
    return x > 0.0 ? gauss_curvature(surface, x) : axis_curvature(surface);
  }
};

SurfaceProfile::SurfaceProfile(const RevolutionSurface& s, double r_max, double step_ratio)
    : state_(nullptr), profile_([](double) { return 0.0; }, 0.0, "empty") {
  if (!(r_max > 0.0)) throw PreconditionError("curvature_profile: r_max must be positive");
  if (!(step_ratio > 1.0)) throw PreconditionError("curvature_profile: step ratio must exceed 1");
  auto st = std::make_shared<State>();
  st->surface = s;

  std::vector<double> nodes;
  double start = 0.0;
  if (s.rim > 0.0) {
    for (int i = 0; i <= 64; ++i) nodes.push_back(s.rim * i / 64.0);
    start = s.rim;
  } else {
    const double first = std::min(0.05, 0.05 * s.rho_max);
    for (int i = 0; i <= 16; ++i) nodes.push_back(first * i / 16.0);
    start = first;
  }

  st->rho.push_back(0.0);
  st->r.push_back(0.0);
  const double target = 2.0 * r_max;
  auto push = [&](double x) {
    const std::size_t i = st->rho.size() - 1;
    st->r.push_back(st->r[i] + st->arclength(i, x));
    st->rho.push_back(x);
  };
  for (std::size_t i = 1; i < nodes.size(); ++i) push(nodes[i]);
  const bool edge = edge_parametrized(s);
  double u = edge ? s.rho_max - start : start;
  while (st->r.back() < target) {
    if (st->rho.size() > 2'000'000) throw PreconditionError("curvature_profile: table too large");
    u = edge ? u / step_ratio : u * step_ratio;
    const double x = edge ? s.rho_max - u : u;
    if (!(x > st->rho.back())) break;
    push(x);
  }

  for (std::size_t i = 0; i < st->rho.size(); ++i) {
    const double x = st->rho[i];
    SurfaceSample sm{x, s.z(x), st->r[i], 0.0, kNaN};
    if (x > 0.0) {
      sm.k_exact = gauss_curvature(s, x);
      sm.k_paper = gauss_curvature(s, x, CurvatureMode::paper);
    } else {
      sm.k_exact = axis_curvature(s);
    }
    st->samples.push_back(sm);
  }
  st->rho_of_r = numerics::MonotoneSpline(st->r, st->rho);
  const std::size_t n = st->samples.size();
  st->tail_r = st->r[n - 1];
  st->tail_k = st->samples[n - 1].k_exact;
  const double k_prev = st->samples[n - 2].k_exact;
  st->tail_p = st->tail_k > 0.0 && k_prev > 0.0
                   ? std::log(st->tail_k / k_prev) / std::log(st->r[n - 1] / st->r[n - 2])
                   : 0.0;

  std::vector<double> breaks;
  if (s.rim > 0.0) breaks.push_back(st->r[64]);
  state_ = st;
  profile_ = CurvatureProfile([st](double rr) { return st->curvature(rr); }, 0.0,
                              s.label + "-K(r)", breaks);
}

const std::vector<SurfaceSample>& SurfaceProfile::table() const noexcept {
  return state_->samples;
}

double SurfaceProfile::rho_at(double r) const { return state_->rho_at(r); }

double SurfaceProfile::r_table_max() const { return state_->r.back(); }

SurfaceProfile curvature_profile(const RevolutionSurface& s, double r_max) {
  return SurfaceProfile(s, r_max);
}

void write_surface_csv(std::ostream& out, const std::vector<SurfaceSample>& table) {
  out << "rho,z,r,K_exact,K_paper,K_r2,K_r3\n";
  char line[256];
  for (const auto& s : table) {
    const double r2 = s.r * s.r;
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.rho, s.z,
                  s.r, s.k_exact, s.k_paper, s.k_exact * r2, s.k_exact * r2 * s.r);
    out << line;
  }
}

}  // namespace kickbound
