#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracblow/frac_operator.hpp"

namespace fracblow {

/// Which of the three decay cases applies: q < n, q = n or q > n.
enum class DecayRegime { below, critical, above };

std::string to_string(DecayRegime regime);
DecayRegime select_regime(int dim, double q);
/// Predicted decay exponent of the bound: -q-1 below, -n-1 otherwise.
double predicted_exponent(int dim, double q);
/// Bound shape <r>^{e} (times 1 + log(1 + r) in the critical case).
double decay_bound(int dim, double q, double r);

enum class FitModel { plain, logarithmic };

struct DecaySample {
  double r = 0.0;
  double g = 0.0;
  double error = 0.0;
};

struct DecayFitResult {
  FitModel model = FitModel::plain;
  /// Slope of log|g| against log<r>; for the logarithmic model the bound's
  /// factor 1 + log(1 + r) is divided out first.
  double exponent = 0.0;
  /// b in |g| <r>^{n+1} ~ a + b log(1 + r); zero for the plain model.
  double log_coefficient = 0.0;
  double log_intercept = 0.0;
  /// sup over all samples of |g| / bound.
  double A_hat = 0.0;
  /// RMS log-space residual of the chosen model (a + b log(1 + r) at
  /// exponent -(n+1) for the logarithmic one).
  double residual = 0.0;
  /// Plain-fit RMS divided by log-model RMS (logarithmic model only).
  double residual_ratio = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t samples = 0;
};

/// Log-spaced radii on [r_min, r_max] inclusive.
std::vector<double> log_spaced(double r_min, double r_max, std::size_t count);

/// (-Delta)^{1/2} <x/R>^{-q} at each radius, with certified errors.
std::vector<DecaySample> sample_frac_weight(int dim, double q, const std::vector<double>& radii,
                                            const PVQuadratureConfig& config = {}, double R = 1.0);
/// Same for an arbitrary radial profile.
std::vector<DecaySample> sample_profile(const RadialProfile& f, int dim, const std::vector<double>& radii,
                                        const PVQuadratureConfig& config = {});

/// Cached normalization constant B for n = 1, 2.
double normalization_value(int dim);

struct FitWindow {
  double r_min = 1e2;
  double r_max = 1e4;
};

/// Fits the decay of `samples` within `window`; A_hat is taken against
/// decay_bound(dim, q, r) over every sample. Throws std::invalid_argument
/// on fewer than 8 window samples, less than 2 decades, or when all window
/// values sit below their certified error.
DecayFitResult fit_decay(const std::vector<DecaySample>& samples, FitModel model, int dim, double q,
                         FitWindow window = {});

struct LemmaOptions {
  FitWindow window;
  std::size_t window_samples = 17;
  /// Extra samples on [small_r, window.r_min) that enter A_hat and R_neg.
  std::size_t inner_samples = 16;
  double small_r = 1e-2;
  double exponent_tolerance = 0.0;  // 0 selects 0.05 (n = 1) or 0.1 (n = 2)
  double residual_ratio_min = 3.0;
  PVQuadratureConfig quadrature;
};

struct LemmaVerdict {
  int dim = 1;
  double q = 0.0;
  DecayRegime regime = DecayRegime::below;
  double predicted = 0.0;
  double tolerance = 0.0;
  DecayFitResult fit;
  /// Plain fit, always computed; equals `fit` away from q = n.
  DecayFitResult plain_fit;
  /// Fitted exponent within tolerance of the prediction.
  bool exponent_matched = false;
  /// Fitted decay at least as fast as the bound (exponent <= predicted + tol).
  bool bound_satisfied = false;
  /// Critical case: b > 0 and plain fit rejected.
  bool log_model_confirmed = false;
  /// Negativity check (q >= n): every sample beyond r_neg is negative.
  bool negativity_checked = false;
  bool negative_tail = false;
  double r_neg = 0.0;
  bool passed = false;
  std::vector<DecaySample> samples;
  std::vector<std::string> diagnostics;
};

LemmaVerdict verify_lemma(int dim, double q, const LemmaOptions& options = {});

struct GaussianVerdict {
  int dim = 1;
  double value_at_origin = 0.0;
  DecayFitResult fit;
  double C_hat = 0.0;
  double r_neg = 0.0;
  bool negative_tail = false;
  bool exponent_matched = false;
  bool passed = false;
  std::vector<DecaySample> samples;
  std::vector<std::string> diagnostics;
};

/// Samples (-Delta)^{1/2} e^{-|x|^2}, checks positivity at the origin, a
/// negative tail and decay exponent -(n+1).
GaussianVerdict verify_gaussian_remark(int dim, const LemmaOptions& options = {});

/// Smallest sampled radius beyond which every sample is negative; +inf if
/// the last sample is not negative.
double negative_from(const std::vector<DecaySample>& samples);

/// CSV with columns r,g,certified_error,bound_case.
void write_samples_csv(std::ostream& os, const std::vector<DecaySample>& samples, const std::string& bound_case);

}  // namespace fracblow
