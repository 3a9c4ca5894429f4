#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kickbound {

struct CurveSample {
  double s;
  double x;
  double y;
  double theta;
  double kappa;
};

/// Unit-speed polyline sampled from a curvature function.
struct PlanarCurve {
  std::vector<CurveSample> samples;
  double s_lo = 0.0;
  double s_hi = 0.0;
};

/// Position and tangent angle at the anchor s = 0 (or s_lo when 0 is outside).
struct Frame {
  double x = 0.0;
  double y = 0.0;
  double angle = 0.0;
};

/// theta = int kappa by 8-point Gauss-Legendre collocation on every step, then
/// (x, y) = int (cos theta, sin theta) with the same nodes.  Knots are added
/// to the grid (e.g. the support edges of a bump).
PlanarCurve reconstruct(const std::function<double(double)>& kappa, double s_lo, double s_hi,
                        double step, const Frame& frame = {},
                        const std::vector<double>& knots = {});

/// x >= 0 with s(x) = (x sqrt(1 + 4k^2 x^2) + asinh(2kx)/(2k)) / 2 = s.
double parabola_x_of_s(double k, double s);

/// Curvature of y = k x^2 at arclength s from the vertex (even in s).
double parabola_curvature(double k, double s);

struct Intersection {
  std::size_t i;  // segment [i, i+1]
  std::size_t j;  // segment [j, j+1], j > i + 1
  double s_i;
  double s_j;
};

/// First pair of non-adjacent intersecting segments, ordered by the later
/// segment and then the earlier one.  Orientation tests are exact.
std::optional<Intersection> self_intersects(const PlanarCurve& curve);

/// Sign of the orientation determinant of (a, b, c): +1 left turn, -1 right
/// turn, 0 collinear.  Exact for all finite doubles.
int orient2d(double ax, double ay, double bx, double by, double cx, double cy);

enum class TransitionVerdict { Embedded, SelfIntersecting, WindowTooSmall };
std::string to_string(TransitionVerdict v);

struct KickFamilyOptions {
  double k = 25.0;
  double window = 100.0;
  double step = 5e-3;
  std::function<double(double)> bump;  // defaults to the standard mollifier
};

struct TransitionEntry {
  double t = 0.0;
  TransitionVerdict verdict = TransitionVerdict::Embedded;
  std::optional<Intersection> intersection;
  double total_turn = 0.0;
  /// Smallest symmetric window containing the intersection.
  std::optional<double> witness_window;
};

/// One member kappa_t = kappa_P + t bump on [-window, window].  Throws
/// WindowTooSmall when t > 0, no crossing is seen and the total turn is
/// still below pi.
TransitionEntry kick_family_member(double t, const KickFamilyOptions& options = {});

struct TransitionReport {
  KickFamilyOptions options;
  std::vector<TransitionEntry> entries;
  std::size_t crossings = 0;  // changes of the self-intersection verdict along t
  std::optional<std::pair<double, double>> bracket;
};

/// Runs the members in parallel; entries keep the order of ts.
TransitionReport kick_family_transition(const std::vector<double>& ts,
                                        const KickFamilyOptions& options = {});

void write_curve_csv(std::ostream& out, const PlanarCurve& curve);

nlohmann::ordered_json to_json(const TransitionReport& r);

}  // namespace kickbound
