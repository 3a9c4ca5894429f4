#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "kickbound/numerics.hpp"
#include "kickbound/profile.hpp"

namespace kickbound {

/// Graph of revolution z = z(rho), rho in [0, rho_max).
struct RevolutionSurface {
  std::string label;
  double rho_max = 0.0;  // may be +inf
  double rim = 0.0;      // edge of a smoothing cap at the axis; 0 when absent
  std::function<double(double)> z, dz, d2z;
};

/// z = 1/(1 - rho) with a spherical cap on [0, cap] matched C^1 at the rim.
/// cap = 0 gives the raw profile.
RevolutionSurface capped_cylinder(double cap = 0.05);

/// z = c rho^2.
RevolutionSurface paraboloid(double c = 1.0);

/// z = 0 on [0, rho_max).
RevolutionSurface flat_disk(double rho_max = 1e6);

/// z = slope rho + offset (zero Gaussian curvature away from the axis).
RevolutionSurface linear_graph(double slope, double offset, double rho_max = 1e6);

/// z'' / (1 + z'^2)^{3/2}.
double profile_curvature(const RevolutionSurface& s, double rho);

enum class CurvatureMode { exact, paper };

/// exact: z' z'' / (rho (1 + z'^2)^2).  paper: profile curvature over rho.
/// Throws DomainError at rho <= 0.
double gauss_curvature(const RevolutionSurface& s, double rho,
                       CurvatureMode mode = CurvatureMode::exact);

/// Limit of the exact Gaussian curvature at the axis, z''(0)^2.
double axis_curvature(const RevolutionSurface& s);

/// Meridian arclength int_0^rho sqrt(1 + z'^2) du.
numerics::QuadratureResult geodesic_radius(const RevolutionSurface& s, double rho);

struct SurfaceSample {
  double rho;
  double z;
  double r;
  double k_exact;
  double k_paper;  // NaN on the axis
};

/// Exact Gaussian curvature as a function of geodesic radius.
///
/// rho(r) is tabulated and interpolated with a monotone spline; each
/// evaluation then polishes rho by Newton steps on the local arclength
/// quadrature so that b(r) = K(rho(r)) is accurate to rounding.  Beyond the
/// table K is extrapolated as a power law.
class SurfaceProfile {
 public:
  SurfaceProfile(const RevolutionSurface& s, double r_max, double step_ratio = 1.01);

  const CurvatureProfile& profile() const noexcept { return profile_; }
  const std::vector<SurfaceSample>& table() const noexcept;
  double rho_at(double r) const;
  double r_table_max() const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
  CurvatureProfile profile_;
};

SurfaceProfile curvature_profile(const RevolutionSurface& s, double r_max);

/// Columns rho, z, r, K_exact, K_paper, K_r2, K_r3.
void write_surface_csv(std::ostream& out, const std::vector<SurfaceSample>& table);

}  // namespace kickbound
