#include "fracblow/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fracblow/fft.hpp"

namespace fracblow {

namespace {

// e^{i h |xi|} on every DFT bin.
std::vector<Complex> propagator_symbol(const GridSpec& grid, double h) {
  std::vector<Complex> s(grid.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::polar(1.0, h * grid.frequency_norm(k));
  return s;
}

void apply_symbol(Field& f, const std::vector<Complex>& symbol) {
  auto data = f.values();
  fft_forward(f.grid(), data);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= symbol[k];
  fft_backward(f.grid(), data);
}

double power_abs(Complex z, double p) {
  const double a = std::abs(z);
  return a == 0.0 ? 0.0 : std::exp(p * std::log(a));
}

void nonlinear_in_place(std::span<Complex> u, double dt, const ProblemParams& params) {
  if (params.lambda == Complex{}) return;
  const Complex c = Complex(0.0, -1.0) * params.lambda;
  for (auto& z : u) {
    const Complex mid = z + 0.5 * dt * c * power_abs(z, params.p);
    z += dt * c * power_abs(mid, params.p);
  }
}

double sup_of(std::span<const Complex> u) {
  double s = 0.0;
  for (const auto& z : u) {
    const double a = std::abs(z);
    if (!(a <= s)) s = a;  // propagates NaN
  }
  return s;
}

}  // namespace

void ProblemParams::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("problem: dimension must be 1 or 2");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("problem: exponent p must exceed 1");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || !std::isfinite(alpha.real()) ||
      !std::isfinite(alpha.imag()))
    throw std::invalid_argument("problem: coefficients must be finite");
}

void EvolutionConfig::validate() const {
  grid.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("evolution: dt must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("evolution: t_max must be positive");
  if (!(threshold > 0.0)) throw std::invalid_argument("evolution: threshold must be positive");
  if (max_halvings < 0) throw std::invalid_argument("evolution: halving limit must be nonnegative");
  if (!(step_control > 0.0)) throw std::invalid_argument("evolution: step control must be positive");
  if (record_stride == 0) throw std::invalid_argument("evolution: record stride must be positive");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0 && checkpoints[i] <= t_max))
      throw std::invalid_argument("evolution: checkpoints must lie in (0, t_max]");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))
      throw std::invalid_argument("evolution: checkpoints must be increasing");
  }
}

double weighted_functional(const Field& u, Complex alpha, std::span<const double> weight) {
  return -(alpha * u.weighted_integral(weight)).imag();
}

Field linear_propagator(const Field& f, double t) {
  Field out = f;
  if (t != 0.0) apply_symbol(out, propagator_symbol(f.grid(), t));
  return out;
}

Field nonlinear_step(const Field& f, double dt, const ProblemParams& params) {
  params.validate();
  Field out = f;
  nonlinear_in_place(out.values(), dt, params);
  return out;
}

TrajectoryRecord evolve(const Field& u0, const ProblemParams& params, const EvolutionConfig& config,
                        const WeightProfile& weight) {
  params.validate();
  config.validate();
  if (!(u0.grid() == config.grid)) throw std::invalid_argument("evolve: initial field is not on the configured grid");
  if (!u0.finite()) throw std::invalid_argument("evolve: initial field is not finite");
  const double sup0 = u0.sup_norm();
  if (!(config.threshold > 10.0 * sup0))
    throw std::invalid_argument("evolve: threshold must exceed 10 times the initial sup norm");

  TrajectoryRecord rec;
  rec.initial_tail = spectral_tail_fraction(u0);
  if (rec.initial_tail > config.tail_limit)
    throw UnresolvedGridError("evolve: grid too coarse, spectral tail fraction " + std::to_string(rec.initial_tail) +
                                  " exceeds " + std::to_string(config.tail_limit),
                              rec.initial_tail);

  const std::vector<double> w = weight.sample(config.grid);
  auto record = [&](double t, const Field& u) {
    rec.times.push_back(t);
    rec.M_R.push_back(weighted_functional(u, params.alpha, w));
    rec.sup_norm.push_back(u.sup_norm());
    rec.l2_norm.push_back(u.l2_norm());
  };

  Field u = u0;
  Field trial(config.grid);
  double t = 0.0;
  double h = config.dt;
  double sup = sup0;
  const double lam = std::abs(params.lambda);
  std::vector<Complex> half_symbol = propagator_symbol(config.grid, 0.5 * h);
  std::size_t next_checkpoint = 0;
  record(0.0, u);
  bool last_recorded = true;

  while (true) {
    const double remaining = config.t_max - t;
    if (remaining <= 1e-12 * config.t_max) {
      rec.stop_reason = "horizon";
      break;
    }
    double step = std::min(h, remaining);
    if (next_checkpoint < config.checkpoints.size())
      step = std::min(step, config.checkpoints[next_checkpoint] - t);
    const bool full = step == h;
    std::vector<Complex> partial;
    const std::vector<Complex>& sym = full ? half_symbol : (partial = propagator_symbol(config.grid, 0.5 * step));

    trial = u;
    apply_symbol(trial, sym);
    nonlinear_in_place(trial.values(), step, params);
    apply_symbol(trial, sym);
    const double sup_new = sup_of(trial.values());
    const double stiffness = step * lam * std::pow(std::max(sup, sup_new), params.p - 1.0);
    if (!std::isfinite(sup_new) || stiffness > config.step_control) {
      if (rec.halvings >= config.max_halvings) {
        rec.blew_up = true;
        rec.stop_reason = "halving";
        break;
      }
      ++rec.halvings;
      h *= 0.5;
      half_symbol = propagator_symbol(config.grid, 0.5 * h);
      continue;
    }

    std::swap(u, trial);
    t += step;
    sup = sup_new;
    ++rec.steps;
    if (next_checkpoint < config.checkpoints.size() &&
        std::abs(t - config.checkpoints[next_checkpoint]) <= 1e-12 * config.t_max) {
      t = config.checkpoints[next_checkpoint++];
      rec.snapshots.push_back(u);
    }
    last_recorded = rec.steps % config.record_stride == 0;
    if (last_recorded) record(t, u);
    if (sup >= config.threshold) {
      rec.blew_up = true;
      rec.stop_reason = "threshold";
      break;
    }
  }
  if (!last_recorded) record(t, u);
  rec.final_dt = h;
  if (rec.blew_up) rec.T_num = t;
  return rec;
}

double scaling_check(const InitialProfile& u0, const ProblemParams& params, const EvolutionConfig& config, double rho) {
  params.validate();
  if (!(rho > 0.0)) throw std::invalid_argument("scaling_check: rho must be positive");
  if (config.checkpoints.empty()) throw std::invalid_argument("scaling_check: no checkpoints given");
  const double amp = std::pow(rho, 1.0 / (params.p - 1.0));

  EvolutionConfig first = config;
  for (auto& c : first.checkpoints) c *= rho;
  first.t_max = first.checkpoints.back();
  EvolutionConfig second = config;
  second.grid.half_width = config.grid.half_width / rho;
  second.t_max = config.checkpoints.back();
  first.threshold = second.threshold = std::numeric_limits<double>::infinity();

  const Field a0 = Field::sample(first.grid, u0);
  const Field b0 = Field::sample(second.grid, [&](std::span<const double> x) {
    double y[2];
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = rho * x[i];
    return amp * u0(std::span<const double>(y, x.size()));
  });
  const WeightProfile weight(params.dim + 1.0, 1.0);
  const auto ra = evolve(a0, params, first, weight);
  const auto rb = evolve(b0, params, second, weight);
  if (ra.snapshots.size() != config.checkpoints.size() || rb.snapshots.size() != config.checkpoints.size())
    throw std::runtime_error("scaling_check: a run stopped before the last checkpoint");

  double worst = 0.0;
  for (std::size_t c = 0; c < config.checkpoints.size(); ++c) {
    const Field& ua = ra.snapshots[c];
    const Field& ub = rb.snapshots[c];
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ub.size(); ++i) {
      num += std::norm(amp * ua[i] - ub[i]);
      den += std::norm(ub[i]);
    }
    worst = std::max(worst, den > 0.0 ? std::sqrt(num / den) : std::sqrt(num));
  }
  return worst;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record) {
  os << "t,M_R,sup_norm,l2_norm\n";
  os.precision(17);
  for (std::size_t i = 0; i < record.times.size(); ++i)
    os << record.times[i] << ',' << record.M_R[i] << ',' << record.sup_norm[i] << ',' << record.l2_norm[i] << '\n';
}

}  // namespace fracblow
