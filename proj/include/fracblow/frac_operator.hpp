#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracblow/grid.hpp"
#include "fracblow/quadrature.hpp"

namespace fracblow {

/// A value with a certified (or estimated) absolute error bound.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Discretization policy for the principal-value integral.
///
/// Radial shells run from 0 to far_cutoff * max(scale, |x|). The innermost
/// shell is [0, inner_radius * max(scale, |x|)]; the remaining ones grow
/// geometrically by `growth`.
struct PVQuadratureConfig {
  double inner_radius = 1e-2;
  double growth = 2.0;
  double far_cutoff = 1e8;
  int nodes = 16;
  double tolerance = 1e-6;
  double rel_tolerance = 1e-11;
  int max_depth = 40;

  void validate() const;
};

/// Smooth, radially nonincreasing function f(|x|) given through |x|^2.
struct RadialProfile {
  std::string name;
  /// f as a function of r^2.
  std::function<double(double)> value_sq;
  /// Characteristic length: innermost PV shell and breakpoints scale with it.
  double scale = 1.0;

  double operator()(double r) const { return value_sq(r * r); }
  /// sup_{|z| >= rho} |f(z)|; equals f(rho) for nonincreasing nonnegative profiles.
  double tail_sup(double rho) const { return std::abs(value_sq(rho * rho)); }
};

/// x -> <x/R>^{-q} with <x> = (1 + |x|^2)^{1/2}.
struct WeightProfile {
  double q = 2.0;
  double R = 1.0;

  WeightProfile() = default;
  WeightProfile(double q_, double R_);
  double operator()(double r) const;
  RadialProfile profile() const;
  /// Samples the weight on every lattice site.
  std::vector<double> sample(const GridSpec& grid) const;
};

RadialProfile gaussian_profile();
RadialProfile constant_profile(double c);

/// B = ( int_{R^n} (1 - cos xi_1) / |xi|^{n+1} dxi )^{-1}, n in {1, 2}.
/// Throws QuadratureError if the error bound exceeds config.tolerance scaled
/// to the default 1e-8 target (see tolerance argument).
Estimate normalization_constant(int dim, double tolerance = 1e-8);

/// B * PV int (f(x) - f(x+y)) / |y|^{n+1} dy at a point with |x| = r.
Estimate frac_laplacian_pv(const RadialProfile& f, int dim, double r, double B,
                           const PVQuadratureConfig& config = {});

/// Same as above for an explicit point (only |x| enters for radial profiles).
Estimate frac_laplacian_pv(const RadialProfile& f, std::span<const double> x, double B,
                           const PVQuadratureConfig& config = {});

/// Evaluates frac_laplacian_pv at many radii; `threads` workers split the
/// index range, results are position-stable.
std::vector<Estimate> frac_laplacian_pv_batch(const RadialProfile& f, int dim, std::span<const double> radii,
                                              double B, const PVQuadratureConfig& config, unsigned threads = 1);

/// inverse-DFT(|xi| * DFT(f)) on the periodic lattice.
Field frac_laplacian_spectral(const Field& f);

/// max over the lattice of (-Delta)^{1/2}(phi^2) - 2 phi (-Delta)^{1/2} phi.
/// phi must be real and below 1e-8 * max|phi| on the boundary.
double cordoba_check(const Field& phi);

/// True when the boundary values of `f` are below `ratio` times its maximum.
bool boundary_negligible(const Field& f, double ratio);

}  // namespace fracblow
