#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracblow/frac_operator.hpp"
#include "fracblow/grid.hpp"

namespace fracblow {

/// i u_t + (-Delta)^{1/2} u = lambda |u|^p, paired with alpha in M_R.
struct ProblemParams {
  int dim = 1;
  double p = 2.0;
  Complex lambda{0.0, 1.0};
  Complex alpha{0.0, -1.0};

  /// n in {1, 2}, p > 1. lambda = 0 passes (degenerate linear flow).
  void validate() const;
  double re_alpha_lambda() const { return (alpha * lambda).real(); }
};

/// Raised when the initial field carries too much energy near the Nyquist band.
class UnresolvedGridError : public std::runtime_error {
 public:
  UnresolvedGridError(const std::string& what, double tail) : std::runtime_error(what), tail_(tail) {}
  double tail_fraction() const { return tail_; }

 private:
  double tail_;
};

struct EvolutionConfig {
  GridSpec grid;
  double dt = 1e-3;
  double t_max = 1.0;
  /// Blow-up threshold on the sup norm.
  double threshold = 1e6;
  /// Step halvings allowed before the run is declared blown up.
  int max_halvings = 10;
  /// A step is rejected when dt |lambda| max(sup before, sup after)^{p-1} exceeds this.
  double step_control = 0.05;
  /// Refusal limit for spectral_tail_fraction(u0).
  double tail_limit = 1e-3;
  /// Times at which full snapshots are stored; the stepper lands on them exactly.
  std::vector<double> checkpoints;
  /// Store every k-th accepted step in the trajectory (the last one always).
  std::size_t record_stride = 1;

  void validate() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> M_R;
  std::vector<double> sup_norm;
  std::vector<double> l2_norm;
  bool blew_up = false;
  double T_num = std::numeric_limits<double>::quiet_NaN();
  /// "horizon", "threshold" or "halving".
  std::string stop_reason;
  std::size_t steps = 0;
  int halvings = 0;
  double final_dt = 0.0;
  double initial_tail = 0.0;
  std::vector<Field> snapshots;
};

/// -Im(alpha * sum u w dx^n) for a weight sampled on the lattice.
double weighted_functional(const Field& u, Complex alpha, std::span<const double> weight);

/// inverse-DFT(e^{i t |xi|} DFT(f)).
Field linear_propagator(const Field& f, double t);

/// Midpoint update of u' = -i lambda |u|^p over dt, pointwise.
Field nonlinear_step(const Field& f, double dt, const ProblemParams& params);

/// Strang splitting (half linear, nonlinear, half linear). Records M_R with
/// `weight` every step. Throws UnresolvedGridError when u0 is under-resolved.
TrajectoryRecord evolve(const Field& u0, const ProblemParams& params, const EvolutionConfig& config,
                        const WeightProfile& weight);

using InitialProfile = std::function<Complex(std::span<const double>)>;

/// Runs u0 on config.grid up to rho * max(checkpoints) and
/// rho^{1/(p-1)} u0(rho x) on the grid with half width L / rho up to
/// max(checkpoints), both with config.dt. Returns the largest relative
/// lattice L2 distance between rho^{1/(p-1)} u(rho t, rho x) and the second
/// run over the checkpoints.
double scaling_check(const InitialProfile& u0, const ProblemParams& params, const EvolutionConfig& config, double rho);

/// CSV with columns t,M_R,sup_norm,l2_norm.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record);

}  // namespace fracblow
