#include "kickbound/closed_form.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kickbound/errors.hpp"

namespace kickbound {

namespace {

constexpr double kPi = std::numbers::pi;

// Log-form data at one radius for depth k: L = ln^{k+1} r, dL = L',
// dlogphi = Phi'/Phi with Phi = envelope(k + 1, r).
struct LogFrame {
  double phi;
  double dlogphi;
  double L;
  double dL;
};

LogFrame log_frame(int k, double r) {
  double sum_inv = 0.0;
  double prod = 1.0;
  double lj = r;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) lj = std::log(lj);
    if (!(lj > 0.0)) throw DomainError("log_frame: r must exceed e_k");
    prod *= lj;
    sum_inv += 1.0 / prod;
  }
  return {std::sqrt(prod), 0.5 * sum_inv, std::log(lj), 1.0 / prod};
}

// Inverse of L = ln^{m}: exp applied m times.
double iter_exp(int m, double v) {
  for (int i = 0; i < m; ++i) v = std::exp(v);
  return v;
}

struct LogCoefficients {
  double A, B, alpha, beta;
};

LogCoefficients log_coefficients(const KickSpec& s) {
  if (s.mu == 0.0) throw DegenerateMu();
  const double L0 = iter_log(s.k + 1, s.r0);
  const double La = iter_log(s.k + 1, s.a);
  const double mu = s.mu;
  const double ca = std::cos(mu * La), sa = std::sin(mu * La);
  LogCoefficients c{};
  c.A = ca * (La - L0) - sa / mu;
  c.B = sa * (La - L0) + ca / mu;

  // C^1 matching of Phi (alpha + beta L) to the middle branch at b.
  const LogFrame fb = log_frame(s.k, s.b);
  const double cb = std::cos(mu * fb.L), sb = std::sin(mu * fb.L);
  const double mid = c.A * cb + c.B * sb;
  const double y_b = fb.phi * mid;
  const double dy_b = fb.phi * (fb.dlogphi * mid + mu * fb.dL * (-c.A * sb + c.B * cb));
  const double dphi = fb.phi * fb.dlogphi;
  // [phi, phi L; phi', phi' L + phi L'] [alpha; beta] = [y_b; dy_b]
  const double m11 = fb.phi, m12 = fb.phi * fb.L;
  const double m21 = dphi, m22 = dphi * fb.L + fb.phi * fb.dL;
  const double det = m11 * m22 - m12 * m21;
  c.alpha = (y_b * m22 - m12 * dy_b) / det;
  c.beta = (m11 * dy_b - m21 * y_b) / det;
  return c;
}

}  // namespace

void KickSpec::validate() const {
  std::ostringstream msg;
  const double ek = superpower(k);
  if (k < 0) msg << "log depth k must be >= 0";
  else if (!(std::isfinite(r0) && std::isfinite(a) && std::isfinite(b) && std::isfinite(mu)))
    msg << "non-finite kick parameter";
  else if (!(r0 > ek)) msg << "need r0 > e_k = " << ek << ", got r0 = " << r0;
  else if (!(r0 <= a)) msg << "need r0 <= a, got r0 = " << r0 << ", a = " << a;
  else if (!(a < b)) msg << "need a < b, got a = " << a << ", b = " << b;
  else if (!(mu >= 0.0)) msg << "need mu >= 0, got " << mu;
  else return;
  throw InvalidShell(msg.str());
}

double superpower(int k) {
  if (k < 0) throw DomainError("superpower: k must be >= 0");
  double e = 0.0;
  for (int i = 0; i < k; ++i) e = std::exp(e);
  return e;
}

double iter_log(int k, double r, LogContract contract) {
  if (k < 0) throw DomainError("iter_log: k must be >= 0");
  double v = r;
  for (int i = 0; i < k; ++i) {
    if (!(v > 0.0))
      throw DomainError("iter_log: non-positive argument at stage " + std::to_string(i + 1));
    v = std::log(v);
  }
  if (contract == LogContract::positive && !(v > 0.0))
    throw DomainError("iter_log: ln^" + std::to_string(k) + "(r) is not positive");
  return v;
}

double log_product(int k, double r) {
  double prod = 1.0;
  double lj = r;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) lj = std::log(lj);
    if (!(lj > 0.0)) throw DomainError("log_product: r must exceed e_k");
    prod *= lj;
  }
  return prod;
}

double critical_curvature(int k, double r, double mu) {
  if (k < 0) throw DomainError("critical_curvature: k must be >= 0");
  double sum = 0.0;
  double prod = 1.0;
  double lj = r;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) lj = std::log(lj);
    if (!(lj > 0.0)) throw DomainError("critical_curvature: r must exceed e_k");
    prod *= lj;
    const double term = 1.0 / (prod * prod);
    sum += j == k ? (1.0 + 4.0 * mu * mu) * term : term;
  }
  return 0.25 * sum;
}

double envelope(int k, double r) {
  if (k < 1) throw DomainError("envelope: k must be >= 1");
  return std::sqrt(log_product(k - 1, r));
}

double phase(int k, double r) { return iter_log(k + 1, r); }

CurvatureProfile kicked_profile(const KickSpec& spec) {
  spec.validate();
  const KickSpec s = spec;
  std::ostringstream label;
  label << "kick(k=" << s.k << ",r0=" << s.r0 << ",a=" << s.a << ",b=" << s.b << ",mu=" << s.mu
        << ")";
  return CurvatureProfile(
      [s](double r) {
        const double mu = (r >= s.a && r <= s.b) ? s.mu : 0.0;
        return critical_curvature(s.k, r, mu);
      },
      s.r0, label.str(), {s.a, s.b});
}

CurvatureProfile critical_profile(int k, double mu, double r_min) {
  if (!(r_min > superpower(k))) throw DomainError("critical_profile: r_min must exceed e_k");
  std::ostringstream label;
  label << "F_" << k << "(mu=" << mu << ")";
  return CurvatureProfile([k, mu](double r) { return critical_curvature(k, r, mu); }, r_min,
                          label.str());
}

Jet linear_middle_branch(const KickSpec& spec, double r) {
  if (spec.mu == 0.0) throw DegenerateMu();
  const double x = r / spec.r0;
  const double xa = spec.a / spec.r0;
  const double la = std::log(xa);
  const double mu = spec.mu;
  const double ph = mu * std::log(x / xa);
  const double g = la * std::cos(ph) + std::sin(ph) / mu;
  const double dg = (std::cos(ph) - mu * la * std::sin(ph)) / x;
  const double sx = std::sqrt(x);
  return {spec.r0 * sx * g, g / (2 * sx) + sx * dg};
}

Jet linear_kick_jet(const KickSpec& spec, double r) {
  if (spec.k != 0) throw PreconditionError("linear_kick_jet: depth must be 0");
  spec.validate();
  if (r < spec.r0) throw DomainError("linear_kick_jet: r < r0");
  const double x = r / spec.r0;
  const double xa = spec.a / spec.r0, xb = spec.b / spec.r0;
  const double sx = std::sqrt(x);
  if (spec.mu == 0.0 || x <= xa) {
    const double lx = std::log(x);
    return {spec.r0 * sx * lx, (0.5 * lx + 1.0) / sx};
  }
  if (x <= xb) return linear_middle_branch(spec, r);
  const MatchingCoefficients m = matching_coefficients(spec);
  const double lxb = std::log(x / xb);
  const double s = std::sqrt(x * xb);
  const double v = m.alpha + m.beta * lxb;
  return {spec.r0 * std::sqrt(x / xb) * v, v / (2 * s) + m.beta / s};
}

double linear_kick_solution(const KickSpec& spec, double r) {
  return linear_kick_jet(spec, r).value;
}

MatchingCoefficients matching_coefficients(const KickSpec& spec) {
  spec.validate();
  if (spec.mu == 0.0) throw DegenerateMu();
  if (spec.k >= 1) {
    const LogCoefficients c = log_coefficients(spec);
    return {c.A, c.B, c.alpha, c.beta};
  }
  const double mu = spec.mu;
  const double xa = spec.a / spec.r0, xb = spec.b / spec.r0;
  const double la = std::log(xa);
  const double th = mu * std::log(xb / xa);
  const double sb = std::sqrt(xb);
  MatchingCoefficients m{};
  m.alpha = sb * (la * std::cos(th) + std::sin(th) / mu);
  m.beta = sb * (std::cos(th) - mu * la * std::sin(th));
  m.A = std::cos(mu * la) * la - std::sin(mu * la) / mu;
  m.B = std::sin(mu * la) * la + std::cos(mu * la) / mu;
  return m;
}

double printed_log_beta(const KickSpec& spec) {
  spec.validate();
  const double L0 = iter_log(spec.k + 1, spec.r0);
  const double La = iter_log(spec.k + 1, spec.a);
  const double Lb = iter_log(spec.k + 1, spec.b);
  const double mu = spec.mu;
  return mu * std::sin(mu * (La - Lb)) * (La - L0) + std::cos(mu * (La + Lb));
}

Jet log_kick_jet(const KickSpec& spec, double r) {
  spec.validate();
  if (r < spec.r0) throw DomainError("log_kick_jet: r < r0");
  const LogFrame f = log_frame(spec.k, r);
  const double L0 = iter_log(spec.k + 1, spec.r0);
  if (spec.mu == 0.0 || r <= spec.a) {
    const double u = f.L - L0;
    return {f.phi * u, f.phi * (f.dlogphi * u + f.dL)};
  }
  const LogCoefficients c = log_coefficients(spec);
  if (r <= spec.b) {
    const double x = spec.mu * f.L;
    const double u = c.A * std::cos(x) + c.B * std::sin(x);
    const double du = spec.mu * f.dL * (-c.A * std::sin(x) + c.B * std::cos(x));
    return {f.phi * u, f.phi * (f.dlogphi * u + du)};
  }
  const double u = c.alpha + c.beta * f.L;
  return {f.phi * u, f.phi * (f.dlogphi * u + c.beta * f.dL)};
}

double second_zero_closed_form(const KickSpec& spec) {
  if (spec.k != 0) throw PreconditionError("second_zero_closed_form: depth must be 0");
  spec.validate();
  const double mu = spec.mu;
  if (mu == 0.0) throw NoSecondZero("mu = 0: the solution r^(1/2) ln r never returns to zero");
  const double xa = spec.a / spec.r0, xb = spec.b / spec.r0;
  const double la = std::log(xa);
  const double th = mu * std::log(xb / xa);

  // Case 1: zero inside the shell, tan(mu ln(r/a)) = -mu ln a.
  const double phi_star = kPi - std::atan(mu * la);
  if (phi_star <= th) return spec.r0 * xa * std::exp(phi_star / mu);

  // Case 2: positive on the shell, zero of alpha + beta ln(r/b) beyond b.
  const double beta_sign = std::cos(th) - mu * la * std::sin(th);
  if (!(beta_sign < 0.0))
    throw NoSecondZero("beta >= 0: mu does not exceed the kick threshold");
  const double F = (la * std::cos(th) + std::sin(th) / mu) / (mu * la * std::sin(th) - std::cos(th));
  return spec.r0 * xb * std::exp(F);
}

double log_second_zero_closed_form(const KickSpec& spec) {
  spec.validate();
  const double mu = spec.mu;
  if (mu == 0.0) throw NoSecondZero("mu = 0: the degenerate solution never returns to zero");
  const LogCoefficients c = log_coefficients(spec);
  const double La = iter_log(spec.k + 1, spec.a);
  const double Lb = iter_log(spec.k + 1, spec.b);

  // A cos x + B sin x = R cos(x - delta) vanishes at x = delta + pi/2 + n pi.
  const double delta = std::atan2(c.B, c.A);
  const double xa = mu * La, xb = mu * Lb;
  const double base = delta + 0.5 * kPi;
  double n = std::ceil((xa - base) / kPi);
  double xz = base + n * kPi;
  if (xz <= xa + 1e-14 * std::max(1.0, std::abs(xa))) xz += kPi;
  if (xz <= xb) return iter_exp(spec.k + 1, xz / mu);

  if (!(c.beta < 0.0)) throw NoSecondZero("beta >= 0: mu does not exceed the kick threshold");
  return iter_exp(spec.k + 1, -c.alpha / c.beta);
}

}  // namespace kickbound
