#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracblow/blowup_theory.hpp"
#include "fracblow/evolution.hpp"
#include "fracblow/frac_operator.hpp"
#include "fracblow/grid.hpp"

namespace fracblow {

/// Malformed or inconsistent configuration; the message names the file,
/// line and field when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LemmaSection {
  std::vector<double> q_dim1{0.5, 1.0, 2.0, 3.0};
  std::vector<double> q_dim2{1.0, 2.0, 3.0, 4.0};
  double window_min = 1e2;
  double window_max = 1e4;
  std::size_t window_samples = 17;
  bool gaussian = true;
};

struct FracSection {
  /// lorentzian, bracket1, bracket3 or gaussian.
  std::string profile = "lorentzian";
  double r_max = 5.0;
  std::size_t count = 50;
};

struct EvolutionSection {
  double dt = 1e-3;
  double t_max = 1.0;
  double threshold = 1e6;
  int max_halvings = 10;
  double step_control = 0.05;
  double tail_limit = 1e-3;
  std::size_t record_stride = 1;
};

/// Per-mu grid and step selection for sweeps.
struct SweepSection {
  std::vector<double> mu;
  double mu_min = 40.0;
  double mu_max = 400.0;
  std::size_t count = 8;
  std::size_t workers = 1;
  /// Inner-singular data: lattice cells per R_1.
  double cells_per_radius = 8.0;
  /// Outer-decay data: fixed lattice spacing.
  double spacing = 0.05;
  double min_half_width = 40.0;
  /// Outer-decay data: half width at least this multiple of R_2.
  double radius_margin = 20.0;
  /// dt = dt_factor * step_control / (|lambda| sup|u0|^{p-1}).
  double dt_factor = 0.5;
  /// Blow-up threshold as a multiple of sup|u0|.
  double threshold_factor = 1e3;
  /// Horizon as a multiple of T_R (t_max from [evolution] when T_R is infinite).
  double horizon_factor = 2.0;
  /// Rows enter fits only when R_1 < inner_regime or R_2 > outer_regime.
  double inner_regime = 0.5;
  double outer_regime = 20.0;
  /// Write one trajectory CSV per row.
  bool trajectories = true;
};

struct RunConfig {
  std::string source;
  ProblemParams problem;
  /// Lemma constant; 0 means a_factor times the measured A_hat.
  double A = 0.0;
  double A_factor = 1.2;
  GridSpec grid;
  PVQuadratureConfig quadrature;
  LemmaSection lemma;
  FracSection frac;
  EvolutionSection evolution;
  InitialDataSpec data;
  SweepSection sweep;
};

RunConfig parse_config(std::istream& in, const std::string& source_name);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved mu list (explicit list, or log-spaced mu_min..mu_max).
std::vector<double> sweep_mu_values(const SweepSection& sweep);

}  // namespace fracblow
