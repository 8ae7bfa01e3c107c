#include "fracblow/lemma_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "fracblow/fitting.hpp"

namespace fracblow {

namespace {

double bracket(double r) { return std::sqrt(1.0 + r * r); }

double default_tolerance(int dim) { return dim == 1 ? 0.05 : 0.1; }

std::vector<DecaySample> in_window(const std::vector<DecaySample>& samples, FitWindow window) {
  std::vector<DecaySample> out;
  for (const auto& s : samples)
    if (s.r >= window.r_min * (1.0 - 1e-12) && s.r <= window.r_max * (1.0 + 1e-12)) out.push_back(s);
  return out;
}

std::vector<double> sample_radii(const LemmaOptions& o) {
  std::vector<double> radii{0.0};
  if (o.inner_samples > 0) {
    auto inner = log_spaced(o.small_r, o.window.r_min, o.inner_samples + 1);
    radii.insert(radii.end(), inner.begin(), inner.end() - 1);
  }
  const auto outer = log_spaced(o.window.r_min, o.window.r_max, o.window_samples);
  radii.insert(radii.end(), outer.begin(), outer.end());
  return radii;
}

}  // namespace

std::string to_string(DecayRegime regime) {
  switch (regime) {
    case DecayRegime::below: return "q<n";
    case DecayRegime::critical: return "q=n";
    case DecayRegime::above: return "q>n";
  }
  return "?";
}

DecayRegime select_regime(int dim, double q) {
  const double n = dim;
  if (std::abs(q - n) < 1e-12) return DecayRegime::critical;
  return q < n ? DecayRegime::below : DecayRegime::above;
}

double predicted_exponent(int dim, double q) {
  return select_regime(dim, q) == DecayRegime::below ? -q - 1.0 : -static_cast<double>(dim) - 1.0;
}

double decay_bound(int dim, double q, double r) {
  const double b = std::pow(bracket(r), predicted_exponent(dim, q));
  return select_regime(dim, q) == DecayRegime::critical ? b * (1.0 + std::log1p(r)) : b;
}

std::vector<double> log_spaced(double r_min, double r_max, std::size_t count) {
  if (!(r_min > 0.0 && r_max > r_min) || count < 2) throw std::invalid_argument("log_spaced: need 0 < r_min < r_max and count >= 2");
  std::vector<double> out(count);
  const double a = std::log(r_min), b = std::log(r_max);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = r_min;
  out.back() = r_max;
  return out;
}

double normalization_value(int dim) {
  static std::once_flag once[2];
  static double value[2];
  if (dim != 1 && dim != 2) throw std::invalid_argument("normalization constant: dimension must be 1 or 2");
  std::call_once(once[dim - 1], [dim] { value[dim - 1] = normalization_constant(dim).value; });
  return value[dim - 1];
}

std::vector<DecaySample> sample_profile(const RadialProfile& f, int dim, const std::vector<double>& radii,
                                        const PVQuadratureConfig& config) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0)) throw std::invalid_argument("sample radii must be nonnegative");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("sample radii must be increasing");
  }
  // Tolerances track the <r>^{-n-1} tail so that far values keep their digits.
  const double B = normalization_value(dim);
  std::vector<DecaySample> out(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    PVQuadratureConfig c = config;
    c.tolerance = config.tolerance * std::pow(bracket(radii[i]), -dim - 1.0);
    const auto e = frac_laplacian_pv(f, dim, radii[i], B, c);
    out[i] = {radii[i], e.value, e.error};
  }
  return out;
}

std::vector<DecaySample> sample_frac_weight(int dim, double q, const std::vector<double>& radii,
                                            const PVQuadratureConfig& config, double R) {
  if (!(q > 0.0)) throw std::invalid_argument("sample_frac_weight: q must be positive");
  return sample_profile(WeightProfile(q, R).profile(), dim, radii, config);
}

DecayFitResult fit_decay(const std::vector<DecaySample>& samples, FitModel model, int dim, double q,
                         FitWindow window) {
  const auto win = in_window(samples, window);
  if (win.size() < 8) throw std::invalid_argument("fit_decay: need at least 8 samples in the fit window");
  if (win.back().r < 100.0 * win.front().r) throw std::invalid_argument("fit_decay: window must span two decades");
  std::vector<double> lr, lg;
  for (const auto& s : win) {
    if (std::abs(s.g) <= s.error || s.g == 0.0) continue;
    lr.push_back(std::log(bracket(s.r)));
    lg.push_back(std::log(std::abs(s.g)));
  }
  if (lr.size() < 8) throw std::invalid_argument("fit_decay: degenerate fit, samples below their error level");

  DecayFitResult out;
  out.model = model;
  out.r_min = win.front().r;
  out.r_max = win.back().r;
  out.samples = lr.size();

  const LinearFit plain = linear_fit(lr, lg);
  if (model == FitModel::plain) {
    out.exponent = plain.slope;
    out.residual = plain.residual;
  } else {
    std::vector<double> lx, corrected, scaled;
    const double n1 = dim + 1.0;
    for (const auto& s : win) {
      if (std::abs(s.g) <= s.error || s.g == 0.0) continue;
      lx.push_back(std::log1p(s.r));
      corrected.push_back(std::log(std::abs(s.g)) - std::log1p(std::log1p(s.r)));
      scaled.push_back(std::abs(s.g) * std::pow(bracket(s.r), n1));
    }
    out.exponent = linear_fit(lr, corrected).slope;
    const LinearFit lin = linear_fit(lx, scaled);
    out.log_coefficient = lin.slope;
    out.log_intercept = lin.intercept;
    double ss = 0.0;
    for (std::size_t j = 0; j < lg.size(); ++j) {
      const double m = lin.intercept + lin.slope * lx[j];
      if (!(m > 0.0)) {
        ss = std::numeric_limits<double>::infinity();
        break;
      }
      const double d = lg[j] - (std::log(m) - n1 * lr[j]);
      ss += d * d;
    }
    out.residual = std::sqrt(ss / static_cast<double>(lg.size()));
    out.residual_ratio = out.residual > 0.0 ? plain.residual / out.residual : std::numeric_limits<double>::infinity();
  }

  for (const auto& s : samples) out.A_hat = std::max(out.A_hat, std::abs(s.g) / decay_bound(dim, q, s.r));
  return out;
}

double negative_from(const std::vector<DecaySample>& samples) {
  double r = std::numeric_limits<double>::infinity();
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    if (!(it->g < 0.0 && std::abs(it->g) > it->error)) break;
    r = it->r;
  }
  return r;
}

LemmaVerdict verify_lemma(int dim, double q, const LemmaOptions& options) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("verify_lemma: dimension must be 1 or 2");
  if (!(q > 0.0)) throw std::invalid_argument("verify_lemma: q must be positive");
  LemmaVerdict v;
  v.dim = dim;
  v.q = q;
  v.regime = select_regime(dim, q);
  v.predicted = predicted_exponent(dim, q);
  v.tolerance = options.exponent_tolerance > 0.0 ? options.exponent_tolerance : default_tolerance(dim);
  v.samples = sample_frac_weight(dim, q, sample_radii(options), options.quadrature);

  v.plain_fit = fit_decay(v.samples, FitModel::plain, dim, q, options.window);
  v.fit = v.regime == DecayRegime::critical ? fit_decay(v.samples, FitModel::logarithmic, dim, q, options.window)
                                            : v.plain_fit;
  v.exponent_matched = std::abs(v.fit.exponent - v.predicted) <= v.tolerance;
  v.bound_satisfied = v.fit.exponent <= v.predicted + v.tolerance;
  if (!v.exponent_matched) {
    v.diagnostics.push_back("fitted exponent " + std::to_string(v.fit.exponent) + " differs from predicted " +
                            std::to_string(v.predicted) + " by more than " + std::to_string(v.tolerance));
    if (v.bound_satisfied) v.diagnostics.push_back("decay is faster than the bound; the upper bound still holds");
  }

  bool ok = v.exponent_matched;
  if (v.regime == DecayRegime::critical) {
    v.log_model_confirmed = v.fit.log_coefficient > 0.0 && v.fit.residual_ratio > options.residual_ratio_min;
    if (!v.log_model_confirmed)
      v.diagnostics.push_back("log model not confirmed: b = " + std::to_string(v.fit.log_coefficient) +
                              ", residual ratio = " + std::to_string(v.fit.residual_ratio));
    ok = ok && v.log_model_confirmed;
  }
  if (v.regime != DecayRegime::below) {
    v.negativity_checked = true;
    v.r_neg = negative_from(v.samples);
    v.negative_tail = std::isfinite(v.r_neg) && v.r_neg <= options.window.r_min;
    if (!v.negative_tail) v.diagnostics.push_back("values are not negative throughout the fit window");
    ok = ok && v.negative_tail;
  }
  v.passed = ok;
  return v;
}

GaussianVerdict verify_gaussian_remark(int dim, const LemmaOptions& options) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("verify_gaussian_remark: dimension must be 1 or 2");
  GaussianVerdict v;
  v.dim = dim;
  v.samples = sample_profile(gaussian_profile(), dim, sample_radii(options), options.quadrature);
  v.value_at_origin = v.samples.front().g;
  // The Gaussian sits above the q > n bound shape <r>^{-n-1}.
  const double q = dim + 1.0;
  v.fit = fit_decay(v.samples, FitModel::plain, dim, q, options.window);
  const double tol = options.exponent_tolerance > 0.0 ? options.exponent_tolerance : 0.1;
  v.exponent_matched = std::abs(v.fit.exponent + dim + 1.0) <= tol;
  v.r_neg = negative_from(v.samples);
  v.negative_tail = std::isfinite(v.r_neg) && v.r_neg <= options.window.r_min;
  v.C_hat = std::numeric_limits<double>::infinity();
  for (const auto& s : v.samples)
    if (s.r >= v.r_neg) v.C_hat = std::min(v.C_hat, -s.g / std::pow(bracket(s.r), -dim - 1.0));
  if (!v.negative_tail) v.diagnostics.push_back("Gaussian image not negative throughout the fit window");
  if (!v.exponent_matched) v.diagnostics.push_back("fitted exponent " + std::to_string(v.fit.exponent));
  if (!(v.value_at_origin > 0.0)) v.diagnostics.push_back("value at the origin is not positive");
  v.passed = v.negative_tail && v.exponent_matched && v.value_at_origin > 0.0;
  return v;
}

void write_samples_csv(std::ostream& os, const std::vector<DecaySample>& samples, const std::string& bound_case) {
  os << "r,g,certified_error,bound_case\n";
  os.precision(17);
  for (const auto& s : samples) os << s.r << ',' << s.g << ',' << s.error << ',' << bound_case << '\n';
}

}  // namespace fracblow
