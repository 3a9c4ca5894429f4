#include "kickbound/cli.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "kickbound/bifurcator.hpp"
#include "kickbound/closed_form.hpp"
#include "kickbound/errors.hpp"
#include "kickbound/json_io.hpp"
#include "kickbound/kick.hpp"
#include "kickbound/numerics.hpp"
#include "kickbound/planar.hpp"
#include "kickbound/sl_engine.hpp"
#include "kickbound/surfaces.hpp"

namespace kickbound::cli {

namespace {

using json_io::Json;
using json_io::number;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : "none"; }

struct Output {
  bool json = false;
  bool no_meta = false;
  std::string out_path;
};

void add_output_flags(CLI::App* app, Output& o) {
  app->add_flag("--json", o.json, "Print the JSON report");
  app->add_flag("--no-meta", o.no_meta, "Omit the timestamped meta block");
  app->add_option("--out", o.out_path, "Write the JSON report to this file");
}

void emit(const Output& o, const std::string& command, Json result, const std::string& text,
          std::ostream& out) {
  const Json doc = json_io::envelope(command, std::move(result), !o.no_meta);
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw PreconditionError("cannot write " + o.out_path);
    f << json_io::dump(doc);
  }
  if (o.json) out << json_io::dump(doc);
  else out << text;
}

struct SpecArgs {
  std::optional<double> r0, a, b, mu;
  std::optional<double> mu_factor;
  std::optional<int> k;
};

void add_spec_flags(CLI::App* app, SpecArgs& s) {
  app->add_option("--r0", s.r0, "Base radius");
  app->add_option("--a", s.a, "Inner shell radius");
  app->add_option("--b", s.b, "Outer shell radius");
  app->add_option("--k", s.k, "Logarithm depth")->check(CLI::NonNegativeNumber);
  app->add_option("--mu", s.mu, "Kick amplitude");
  app->add_option("--mu-factor", s.mu_factor, "Amplitude as a multiple of the threshold");
}

KickSpec resolve_spec(const SpecArgs& s, int default_k) {
  KickSpec spec;
  spec.k = s.k.value_or(default_k);
  if (spec.k == 0) {
    spec.r0 = s.r0.value_or(1.0);
    spec.a = s.a.value_or(std::numbers::e * spec.r0);
    spec.b = s.b.value_or(std::numbers::e * std::numbers::e * spec.r0);
  } else {
    spec.r0 = s.r0.value_or(superpower(spec.k) + 1.0);
    spec.a = s.a.value_or(spec.r0 + 1.0);
    spec.b = s.b.value_or(3.0 * spec.a);
  }
  spec.mu = 0.0;
  spec.validate();
  // At depth >= 1 an amplitude of 1.1 lambda puts r1 beyond double range.
  const double factor = s.mu_factor.value_or(spec.k == 0 ? 1.1 : 1.5);
  spec.mu = s.mu ? *s.mu : factor * lambda_log(spec.k, spec.r0, spec.a, spec.b);
  spec.validate();
  return spec;
}

CurvatureProfile named_profile(const std::string& name, const KickSpec& spec, double r_max) {
  if (name == "f0-kick" || name == "fk-kick") return kicked_profile(spec);
  if (name == "bf-equality") return critical_profile(spec.k, 0.0, spec.r0);
  if (name == "arctan-bifurcator" || name == "arctan-example") return profiles::arctan_bifurcator();
  if (name == "capped-cylinder") return curvature_profile(capped_cylinder(), r_max).profile();
  if (name == "paraboloid") return curvature_profile(paraboloid(), r_max).profile();
  if (name.rfind("csv:", 0) == 0) return load_csv_profile(name.substr(4));
  throw PreconditionError("unknown profile '" + name + "'");
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw PreconditionError("bad number '" + item + "' in range '" + text + "'");
    }
    if (used != item.size()) throw PreconditionError("bad number '" + item + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw PreconditionError("range must be lo:hi:step with step > 0");
  const auto n = static_cast<std::size_t>(std::llround((parts[1] - parts[0]) / parts[2]));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) {
    double t = parts[0] + static_cast<double>(i) * parts[2];
    if (std::abs(t) < 1e-9 * parts[2]) t = 0.0;
    out.push_back(json_io::round_sig(t));
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_lambda(const SpecArgs& s, const Output& o, std::ostream& out) {
  KickSpec spec;
  spec.k = s.k.value_or(0);
  spec.r0 = s.r0.value_or(1.0);
  if (!s.a || !s.b) throw PreconditionError("lambda: --a and --b are required");
  spec.a = *s.a;
  spec.b = *s.b;
  spec.validate();
  const double lam = lambda_log(spec.k, spec.r0, spec.a, spec.b);
  const double res = lambda_residual(spec.k, spec.r0, spec.a, spec.b, lam);
  const auto notes = threshold_notes(spec);

  Json j;
  j["lambda"] = number(lam);
  j["residual"] = number(res);
  j["spec"] = {{"r0", number(spec.r0)}, {"a", number(spec.a)}, {"b", number(spec.b)},
               {"k", spec.k}};
  j["discrepancy_notes"] = notes;
  std::ostringstream text;
  text << "lambda: " << fmt(lam) << "\nresidual: " << fmt(res) << "\n";
  for (const auto& n : notes) text << "note: " << n << "\n";
  emit(o, "lambda", j, text.str(), out);
  return kOk;
}

struct CertifyArgs {
  std::string profile = "f0-kick";
  std::string bifurcator;
  int n = 2;
  double r_max = 1e8;
  double tol = 1e-10;
  double margin = 1e-3;
  std::size_t grid = 10'000;
  bool all_origins = false;
};

int cmd_certify(const CertifyArgs& c, const SpecArgs& s, const Output& o, std::ostream& out) {
  const KickSpec spec = resolve_spec(s, c.profile == "fk-kick" ? 1 : 0);
  const CurvatureProfile profile = named_profile(c.profile, spec, c.r_max);
  CertifyOptions opt;
  opt.tol = c.tol;
  opt.grid_size = c.grid;
  opt.margin = c.margin;
  opt.r_max = c.r_max;
  opt.all_origins = c.all_origins;
  if (!c.bifurcator.empty()) opt.bifurcator = named_profile(c.bifurcator, spec, c.r_max);
  const Certificate cert = certify(profile, c.n, spec, opt);

  std::ostringstream text;
  text << "verdict: " << to_string(cert.verdict) << "\nprofile: " << cert.label
       << "\nlambda: " << fmt(cert.lambda) << "\nmu_effective: " << fmt(cert.mu_effective)
       << "\nr1: " << fmt(cert.r1) << "\ndiameter_bound: " << fmt(cert.diameter_bound)
       << "\nreason: " << cert.reason << "\n";
  for (const auto& n : cert.discrepancy_notes) text << "note: " << n << "\n";
  emit(o, "certify", to_json(cert), text.str(), out);
  return cert.verdict == Verdict::Inconclusive ? kInconclusive : kOk;
}

struct BifurcateArgs {
  std::string profile = "arctan-bifurcator";
  double r_max = 1e4;
  double tol = 1e-10;
  std::optional<double> boundary_bump;
  std::string sup;
};

int cmd_bifurcate(const BifurcateArgs& a, const Output& o, std::ostream& out) {
  const CurvatureProfile b = named_profile(a.profile, KickSpec{1.0, std::numbers::e,
                                                               std::numbers::e * std::numbers::e,
                                                               0.0, 0},
                                           a.r_max);
  ClassifyOptions opt;
  opt.r_max = a.r_max;
  opt.tol = a.tol;
  const BifurcatorReport rep = classify(b, opt);

  Json j;
  j["classification"] = to_json(rep);
  std::ostringstream text;
  text << "classification: " << to_string(rep.classification);
  if (rep.reason != NotBifurcatorReason::None) text << " (" << to_string(rep.reason) << ")";
  text << "\nw_limit: " << fmt(rep.w_limit) << "\nw(r_max): " << fmt(rep.w_at_rmax)
       << "\nw'(r_max): " << fmt(rep.wp_at_rmax) << "\n";
  if (rep.classification == BifurcatorClass::Bifurcator) {
    const AbreschReport ab = abresch_checks(b, a.r_max, a.tol);
    j["abresch"] = to_json(ab);
    text << "moment_integral: " << fmt(ab.moment_integral)
         << " (tail ratio " << fmt(ab.moment_tail_ratio) << ")\n"
         << "w' log-log slope: " << fmt(ab.wp_loglog_slope) << "\n"
         << "independent solution at r_max: " << fmt(ab.v_at_rmax) << "\n";
  } else {
    j["abresch"] = nullptr;
  }
  if (a.boundary_bump) {
    const CurvatureProfile c = profiles::scale_bump(b, 1.0, 2.0, *a.boundary_bump);
    const BoundaryReport br = boundary_test(b, c, a.r_max, a.tol);
    j["boundary"] = to_json(br);
    text << "boundary_test: " << to_string(br.verdict) << " second_zero " << fmt(br.second_zero)
         << "\n";
  }
  if (!a.sup.empty()) {
    const CurvatureProfile sup = named_profile(a.sup, KickSpec{1.0, std::numbers::e,
                                                               std::numbers::e * std::numbers::e,
                                                               0.0, 0},
                                               a.r_max);
    const NoncompactReport nr = noncompact_side_check(sup, b, a.r_max);
    j["noncompact"] = to_json(nr);
    text << "noncompact_side_check: " << to_string(nr.verdict) << "\n";
  }
  emit(o, "bifurcate", j, text.str(), out);
  return rep.classification == BifurcatorClass::Inconclusive ? kInconclusive : kOk;
}

struct SurfaceArgs {
  std::string name = "capped-cylinder";
  double r_max = 1e3;
  double cap = 0.05;
  std::string emit_profile;
};

int cmd_surface(const SurfaceArgs& a, const Output& o, std::ostream& out) {
  RevolutionSurface s;
  if (a.name == "capped-cylinder") s = capped_cylinder(a.cap);
  else if (a.name == "paraboloid") s = paraboloid();
  else if (a.name == "flat-disk") s = flat_disk();
  else throw PreconditionError("unknown surface '" + a.name + "'");
  const SurfaceProfile sp = curvature_profile(s, a.r_max);

  std::vector<SurfaceSample> rows;
  for (const auto& r : sp.table())
    if (r.r <= a.r_max) rows.push_back(r);
  if (!a.emit_profile.empty()) {
    std::ofstream f(a.emit_profile);
    if (!f) throw PreconditionError("cannot write " + a.emit_profile);
    write_surface_csv(f, rows);
  }
  const double k_end = sp.profile()(a.r_max);
  Json j;
  j["surface"] = s.label;
  j["r_max"] = number(a.r_max);
  j["rim"] = number(s.rim);
  j["samples"] = rows.size();
  j["axis_curvature"] = number(axis_curvature(s));
  j["K_at_r_max"] = number(k_end);
  j["K_r2_at_r_max"] = number(k_end * a.r_max * a.r_max);
  j["K_r3_at_r_max"] = number(k_end * a.r_max * a.r_max * a.r_max);
  j["csv"] = a.emit_profile.empty() ? Json(nullptr) : Json(a.emit_profile);
  std::ostringstream text;
  text << "surface: " << s.label << "\nsamples: " << rows.size()
       << "\nK(r_max) r^2: " << fmt(k_end * a.r_max * a.r_max)
       << "\nK(r_max) r^3: " << fmt(k_end * a.r_max * a.r_max * a.r_max) << "\n";
  emit(o, "surface", j, text.str(), out);
  return kOk;
}

struct CurveArgs {
  std::string family = "parabola-kick";
  double k = 25.0;
  std::string t = "-0.3:0.3:0.05";
  double window = 100.0;
  double step = 5e-3;
  std::string emit_curve;
};

int cmd_curve(const CurveArgs& a, const Output& o, std::ostream& out) {
  KickFamilyOptions opt;
  opt.k = a.k;
  opt.window = a.window;
  opt.step = a.step;
  if (!(a.k > 0.0)) throw PreconditionError("curve: --k must be positive");
  if (!(a.step > 0.0)) throw PreconditionError("curve: --step must be positive");

  if (a.family == "parabola") {
    const auto kappa = [k = a.k](double s) { return parabola_curvature(k, s); };
    const PlanarCurve c = reconstruct(kappa, -a.window, a.window, a.step);
    if (!a.emit_curve.empty()) {
      std::ofstream f(a.emit_curve);
      if (!f) throw PreconditionError("cannot write " + a.emit_curve);
      write_curve_csv(f, c);
    }
    const auto hit = self_intersects(c);
    Json j;
    j["family"] = "parabola";
    j["k"] = number(a.k);
    j["window"] = number(a.window);
    j["total_turn"] = number(c.samples.back().theta - c.samples.front().theta);
    j["embedded"] = !hit.has_value();
    std::ostringstream text;
    text << "total_turn: " << fmt(c.samples.back().theta - c.samples.front().theta)
         << "\nembedded: " << (hit ? "no" : "yes") << "\n";
    emit(o, "curve", j, text.str(), out);
    return kOk;
  }
  if (a.family != "parabola-kick") throw PreconditionError("unknown family '" + a.family + "'");

  const std::vector<double> ts = parse_range(a.t);
  if (!a.emit_curve.empty()) {
    if (ts.size() != 1) throw PreconditionError("--emit-curve needs a single --t value");
    const double t = ts.front();
    const auto kappa = [k = a.k, t](double s) { return parabola_curvature(k, s) + t * mollifier(s); };
    std::ofstream f(a.emit_curve);
    if (!f) throw PreconditionError("cannot write " + a.emit_curve);
    write_curve_csv(f, reconstruct(kappa, -a.window, a.window, a.step, {}, {-1.0, 1.0}));
  }
  const TransitionReport rep = kick_family_transition(ts, opt);
  std::ostringstream text;
  for (const auto& e : rep.entries) {
    text << "t = " << fmt(e.t) << ": " << to_string(e.verdict);
    if (e.intersection)
      text << " at s = (" << fmt(e.intersection->s_i) << ", " << fmt(e.intersection->s_j) << ")";
    text << "\n";
  }
  text << "crossings: " << rep.crossings << "\n";
  if (rep.bracket)
    text << "transition in [" << fmt(rep.bracket->first) << ", " << fmt(rep.bracket->second)
         << "]\n";
  emit(o, "curve", to_json(rep), text.str(), out);
  return kOk;
}

}  // namespace

CurvatureProfile load_csv_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot open profile " + path);
  std::vector<double> r, b;
  std::string line;
  bool header = true;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) {
      if (header) {
        header = false;
        continue;
      }
      throw PreconditionError("malformed row in " + path + ": " + line);
    }
    header = false;
    if (!r.empty() && !(x > r.back())) throw PreconditionError("radii must increase in " + path);
    r.push_back(x);
    b.push_back(y);
  }
  if (r.size() < 2) throw PreconditionError("profile " + path + " needs at least two rows");
  auto spline = std::make_shared<numerics::MonotoneSpline>(r, b);
  const double r0 = r.front();
  return CurvatureProfile([spline](double x) { return (*spline)(x); }, r0, "csv:" + path);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kick thresholds, conjugate-point certificates and SL-bifurcators", "kickbound"};
  app.require_subcommand(1);

  Output o_lambda, o_certify, o_bif, o_surface, o_curve;
  SpecArgs s_lambda, s_certify;
  CertifyArgs certify_args;
  BifurcateArgs bif_args;
  SurfaceArgs surface_args;
  CurveArgs curve_args;

  auto* lam = app.add_subcommand("lambda", "Kick threshold lambda_k(r0, a, b)");
  add_spec_flags(lam, s_lambda);
  add_output_flags(lam, o_lambda);

  auto* cert = app.add_subcommand("certify", "Compactness certificate for a kicked profile");
  add_spec_flags(cert, s_certify);
  add_output_flags(cert, o_certify);
  cert->add_option("--profile", certify_args.profile,
                   "f0-kick | fk-kick | bf-equality | arctan-bifurcator | capped-cylinder | "
                   "paraboloid | csv:PATH");
  cert->add_option("--bifurcator", certify_args.bifurcator, "SL-bifurcator for the noncompact test");
  cert->add_option("--n", certify_args.n, "Manifold dimension")->check(CLI::Range(2, 1000));
  cert->add_option("--r-max", certify_args.r_max, "Largest radius checked and integrated");
  cert->add_option("--tol", certify_args.tol, "Integrator tolerance");
  cert->add_option("--margin", certify_args.margin, "Relative amplitude margin over lambda");
  cert->add_option("--grid", certify_args.grid, "Sampling grid size");
  cert->add_flag("--all-origins", certify_args.all_origins,
                 "Hypotheses hold at every origin (bound r1 instead of 2 r1)");

  auto* bif = app.add_subcommand("bifurcate", "Classify an SL-bifurcator candidate");
  add_output_flags(bif, o_bif);
  bif->add_option("--profile", bif_args.profile, "Profile name or csv:PATH");
  bif->add_option("--r-max", bif_args.r_max, "Integration range");
  bif->add_option("--tol", bif_args.tol, "Integrator tolerance");
  bif->add_option("--boundary-bump", bif_args.boundary_bump,
                  "Run the boundary test with b (1 + F bump on [1, 2])");
  bif->add_option("--sup", bif_args.sup, "Supremal profile for the noncompact-side check");

  auto* surf = app.add_subcommand("surface", "Gaussian curvature of a surface of revolution");
  add_output_flags(surf, o_surface);
  surf->add_option("--name", surface_args.name, "capped-cylinder | paraboloid | flat-disk");
  surf->add_option("--r-max", surface_args.r_max, "Largest geodesic radius");
  surf->add_option("--cap", surface_args.cap, "Cap radius of the capped cylinder");
  surf->add_option("--emit-profile", surface_args.emit_profile, "CSV output path");

  auto* curve = app.add_subcommand("curve", "Planar curves from curvature");
  add_output_flags(curve, o_curve);
  curve->add_option("--family", curve_args.family, "parabola | parabola-kick");
  curve->add_option("--k", curve_args.k, "Parabola coefficient");
  curve->add_option("--t", curve_args.t, "Kick size or range lo:hi:step");
  curve->add_option("--window", curve_args.window, "Arclength window [-S, S]");
  curve->add_option("--step", curve_args.step, "Reconstruction step");
  curve->add_option("--emit-curve", curve_args.emit_curve, "CSV output path (single t)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (lam->parsed()) return cmd_lambda(s_lambda, o_lambda, out);
    if (cert->parsed()) return cmd_certify(certify_args, s_certify, o_certify, out);
    if (bif->parsed()) return cmd_bifurcate(bif_args, o_bif, out);
    if (surf->parsed()) return cmd_surface(surface_args, o_surface, out);
    if (curve->parsed()) return cmd_curve(curve_args, o_curve, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  }
  return kInvalidInput;
}

}  // namespace kickbound::cli
