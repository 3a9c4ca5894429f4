#include "kickbound/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kickbound/errors.hpp"

namespace kickbound::numerics {

namespace {
bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }
}  // namespace

double bracket_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                    double f_hi, double xtol) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!opposite(f_lo, f_hi)) throw PreconditionError("bracket_root: no sign change");
  int stale = 0;  // consecutive secant steps that did not halve the bracket
  int side = 0;
  for (int it = 0; it < 400; ++it) {
    const double width = hi - lo;
    if (width <= xtol) break;
    double c = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    const double mid = lo + 0.5 * width;
    if (!(c > lo && c < hi) || stale >= 2) {
      c = mid;
      stale = 0;
    }
    if (c <= lo || c >= hi) break;  // bracket is at adjacent doubles
    const double fc = f(c);
    if (fc == 0.0) return c;
    if (opposite(f_lo, fc)) {
      hi = c;
      f_hi = fc;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    } else {
      lo = c;
      f_lo = fc;
      if (side == +1) f_hi *= 0.5;
      side = +1;
    }
    stale = (hi - lo) > 0.5 * width ? stale + 1 : 0;
  }
  return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!opposite(f_lo, f_hi)) throw PreconditionError("bisect: no sign change");
  while (hi - lo > xtol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (opposite(f_lo, fm)) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = fm;
    }
  }
  return lo + 0.5 * (hi - lo);
}

const GaussRule& gauss8() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 8>;
    GaussRule g{};
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    // boost stores the non-negative half of the symmetric rule on [-1, 1].
    std::size_t i = 0;
    for (std::size_t j = x.size(); j-- > 0;) {
      g.nodes[i] = 0.5 * (1.0 - x[j]);
      g.weights[i] = 0.5 * w[j];
      ++i;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
      g.nodes[i] = 0.5 * (1.0 + x[j]);
      g.weights[i] = 0.5 * w[j];
      ++i;
    }
    return g;
  }();
  return rule;
}

double gauss_integral(const std::function<double(double)>& f, double a, double b) {
  const auto& g = gauss8();
  const double h = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i < GaussRule::size; ++i) sum += g.weights[i] * f(a + h * g.nodes[i]);
  return h * sum;
}

QuadratureResult adaptive_integral(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol, unsigned max_depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  std::function<double(double)> g = f;
  if (std::isinf(b)) {
    g = [&f, a](double t) {
      const double s = 1.0 - t;
      return f(a + t / s) / (s * s);
    };
    a = 0.0;
    b = 1.0;
  }
  struct Piece {
    double a, b, value, error, l1;
    unsigned depth;
  };
  // Boost 1.74 reports the single-rule error on [-1, 1]; rescale it to [a, b].
  const auto rule = [&g](double lo, double hi, unsigned depth) {
    Piece p{lo, hi, 0.0, 0.0, 0.0, depth};
    p.value = GK::integrate(g, lo, hi, 0, 0.0, &p.error, &p.l1);
    p.error *= 0.5 * (hi - lo);
    return p;
  };
  const auto by_error = [](const Piece& x, const Piece& y) { return x.error < y.error; };
  std::vector<Piece> heap{rule(a, b, 0)};
  const auto total = [&heap](auto field) {
    double sum = 0.0;
    for (const auto& p : heap) sum += p.*field;
    return sum;
  };
  constexpr std::size_t kMaxPieces = 20'000;
  while (heap.size() < kMaxPieces) {
    const double l1 = total(&Piece::l1);
    const double target = std::max(rel_tol * l1, 64 * std::numeric_limits<double>::epsilon() * l1);
    if (total(&Piece::error) <= target) break;
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Piece worst = heap.back();
    if (worst.depth >= max_depth) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(rule(worst.a, mid, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(rule(mid, worst.b, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
  std::sort(heap.begin(), heap.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  QuadratureResult out;
  double l1 = 0.0;
  for (const auto& p : heap) {
    out.value += p.value;
    out.error += p.error;
    l1 += p.l1;
  }
  out.converged = std::isfinite(out.value) &&
                  out.error <= std::max(rel_tol * l1, 64 * std::numeric_limits<double>::epsilon() * l1);
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw PreconditionError("log_grid: need 0 < lo < hi, n >= 2");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> sampling_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 4) throw PreconditionError("sampling_grid: need lo < hi, n >= 4");
  if (lo > 0.0) return log_grid(lo, hi, n);
  const double split = std::min(1.0, hi);
  const std::size_t n_lin = hi > 1.0 ? n / 10 : n;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n_lin; ++i)
    out.push_back(lo + (split - lo) * static_cast<double>(i) / static_cast<double>(n_lin - 1));
  if (hi > 1.0) {
    auto tail = log_grid(1.0, hi, n - n_lin + 1);
    out.insert(out.end(), tail.begin() + 1, tail.end());
  }
  return out;
}

QuinticHermite::QuinticHermite(double x0, double x1, double f0, double d0, double s0, double f1,
                               double d1, double s1)
    : x0_(x0), h_(x1 - x0) {
  // Scale derivatives to the unit interval.
  d0 *= h_;
  d1 *= h_;
  s0 *= h_ * h_;
  s1 *= h_ * h_;
  const double df = f1 - f0;
  c_[0] = f0;
  c_[1] = d0;
  c_[2] = 0.5 * s0;
  c_[3] = 10.0 * df - 6.0 * d0 - 4.0 * d1 - 1.5 * s0 + 0.5 * s1;
  c_[4] = -15.0 * df + 8.0 * d0 + 7.0 * d1 + 1.5 * s0 - s1;
  c_[5] = 6.0 * df - 3.0 * d0 - 3.0 * d1 - 0.5 * s0 + 0.5 * s1;
}

double QuinticHermite::value(double x) const {
  const double t = (x - x0_) / h_;
  return c_[0] + t * (c_[1] + t * (c_[2] + t * (c_[3] + t * (c_[4] + t * c_[5]))));
}

double QuinticHermite::derivative(double x) const {
  const double t = (x - x0_) / h_;
  return (c_[1] + t * (2 * c_[2] + t * (3 * c_[3] + t * (4 * c_[4] + t * 5 * c_[5])))) / h_;
}

double QuinticHermite::second_derivative(double x) const {
  const double t = (x - x0_) / h_;
  return (2 * c_[2] + t * (6 * c_[3] + t * (12 * c_[4] + t * 20 * c_[5]))) / (h_ * h_);
}

MonotoneSpline::MonotoneSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw PreconditionError("MonotoneSpline: need >= 2 matching points");
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    if (!(h > 0.0)) throw PreconditionError("MonotoneSpline: abscissae must increase");
    delta[i] = (y_[i + 1] - y_[i]) / h;
  }
  m_.assign(n, 0.0);
  m_.front() = delta.front();
  m_.back() = delta.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) continue;
    // Weighted harmonic mean (Fritsch-Butland form used by PCHIP).
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
    m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
}

double MonotoneSpline::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * m_[i + 1];
}

double MonotoneSpline::tail_slope() const {
  const std::size_t n = x_.size();
  return (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]);
}

}  // namespace kickbound::numerics
