#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracblow/blowup_theory.hpp"
#include "fracblow/config.hpp"
#include "fracblow/evolution.hpp"
#include "fracblow/fitting.hpp"
#include "fracblow/lemma_verifier.hpp"
#include "json.hpp"

namespace fracblow {

inline constexpr const char* kSchema = "fracblow/1";

/// Numerical breakdown (exit code 2 in the CLI).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every constant an output depends on, with its tolerance.
struct ConstantsBundle {
  Estimate B;
  double B_tolerance = 0.0;
  double A_hat = 0.0;
  double A = 0.0;
  double A_factor = 0.0;
  BlowupConstants constants;
  double W_tolerance = 0.0;
};

/// B for the problem dimension, A_hat from the (n, n+1) lemma samples, and
/// C, D, W with A = A_factor * A_hat unless the config fixes A.
ConstantsBundle resolve_constants(const RunConfig& config);
/// Same with a measured A_hat supplied by the caller.
ConstantsBundle resolve_constants(const RunConfig& config, double A_hat);

LemmaOptions lemma_options(const RunConfig& config);

nlohmann::json to_json(const ConstantsBundle& bundle);
nlohmann::json to_json(const RunConfig& config);
/// {"schema", "command", "config", "constants"}.
nlohmann::json manifest(const std::string& command, const RunConfig& config, const ConstantsBundle& bundle);

/// Writes `text` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

struct LemmaSuiteResult {
  std::vector<LemmaVerdict> verdicts;
  std::vector<GaussianVerdict> gaussians;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
};

/// Verdicts for every (n, q) in the [lemma] section plus the Gaussian
/// remark; writes lemma_report.json and one samples CSV per case. An empty
/// q list is a no-op with a warning and writes nothing.
LemmaSuiteResult run_lemma_suite(const RunConfig& config, const std::filesystem::path& out);
/// Parses the config before touching `out`; throws ConfigError on a bad file.
LemmaSuiteResult run_lemma_suite(const std::filesystem::path& config_file, const std::filesystem::path& out);

struct SweepPlan {
  ProblemParams params;
  InitialDataSpec data;
  std::vector<double> mu;
  SweepSection policy;
  EvolutionSection evolution;
  std::filesystem::path out;

  /// >= 1 mu values, all positive and distinct; data valid for params.
  void validate() const;
};

SweepPlan make_sweep_plan(const RunConfig& config, const std::filesystem::path& out);

struct SweepRow {
  double mu = 0.0;
  double R_star = 0.0;
  double I = 0.0;
  double T_formula = 0.0;
  double T_R = 0.0;
  double M0 = 0.0;
  double threshold = 0.0;
  bool gate = false;
  /// R_1 < inner_regime or R_2 > outer_regime.
  bool in_regime = false;
  double half_width = 0.0;
  std::size_t points = 0;
  double dt = 0.0;
  double sup0 = 0.0;
  double T_num = 0.0;
  bool blew_up = false;
  std::string stop_reason;
  /// "blowup", "no-blowup" or "failed".
  std::string status;
  std::string error;
};

struct SweepRunSetup {
  Field u0;
  EvolutionConfig evolution;
  WeightProfile weight;
  CorollaryReport report;
};

/// Grid, step, threshold and horizon for one mu, following the plan policy.
SweepRunSetup prepare_sweep_run(const SweepPlan& plan, const BlowupConstants& constants, double mu);

struct SweepRunOutcome {
  SweepRow row;
  TrajectoryRecord trajectory;
};

/// One row; numerical failures are caught and reported in the row.
SweepRunOutcome run_sweep_row(const SweepPlan& plan, const BlowupConstants& constants, double mu);

struct SweepResult {
  std::vector<SweepRow> rows;
  double predicted = 0.0;
  /// Fit of T_num over in-regime blow-up rows (needs >= 4 rows, one decade).
  std::optional<PowerLawFit> T_num_fit;
  /// Fit of T_formula over in-regime rows.
  std::optional<PowerLawFit> T_formula_fit;
  std::vector<std::string> warnings;
};

/// Runs every row (plan.policy.workers at a time), fits, and writes
/// sweep.csv, sweep.json and rows/mu_<i>.csv under plan.out.
SweepResult run_sweep(const SweepPlan& plan, const ConstantsBundle& bundle, const RunConfig& config);

/// Fits only; rows must already be filled in.
void fit_sweep(SweepResult& result, const SweepPlan& plan);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// constants.json.
nlohmann::json run_constants(const RunConfig& config, const std::filesystem::path& out);

struct FracApplyRow {
  double r = 0.0;
  double pv = 0.0;
  double pv_error = 0.0;
  double spectral = 0.0;
  /// NaN when the profile has no closed form in this dimension.
  double exact = 0.0;
};

/// Closed-form image of a [frac] profile, NaN when none is known.
double frac_closed_form(const std::string& profile, int dim, double r);

/// PV and spectral images of the [frac] profile at lattice points on the
/// first axis in (0, r_max]; frac_apply.csv and frac_apply.json.
std::vector<FracApplyRow> run_frac_apply(const RunConfig& config, const std::filesystem::path& out);

/// One evolution of the [data] field; trajectory.csv and evolve.json.
TrajectoryRecord run_evolve(const RunConfig& config, const std::filesystem::path& out);

}  // namespace fracblow
