#include "fracblow/blowup_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracblow/quadrature.hpp"

namespace fracblow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double sphere_measure(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }

}  // namespace

double BlowupConstants::threshold(double R) const { return C * std::pow(R, dim - 1.0 / (p - 1.0)); }

Estimate weight_mass(int dim, double tolerance) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("weight mass: dimension must be 1 or 2");
  std::vector<double> breaks{0.0};
  for (double b = 1.0; b <= 0x1p40; b *= 2.0) breaks.push_back(b);
  const double Y = breaks.back();
  AdaptiveOptions opt;
  opt.abs_tol = 0.1 * tolerance;
  opt.rel_tol = 1e-15;
  QuadResult q;
  double tail = 0.0, factor = 0.0;
  if (dim == 1) {
    q = integrate_panels([](double x) { return 1.0 / (1.0 + x * x); }, breaks, opt);
    tail = std::atan(1.0 / Y);
    factor = 2.0;
  } else {
    q = integrate_panels([](double r) { return r * std::pow(1.0 + r * r, -1.5); }, breaks, opt);
    tail = 1.0 / std::sqrt(1.0 + Y * Y);
    factor = 2.0 * std::numbers::pi;
  }
  Estimate out{factor * (q.value + tail), factor * q.error};
  if (!q.converged || out.error > tolerance) throw QuadratureError("weight mass did not reach tolerance", out.value, out.error);
  return out;
}

BlowupConstants compute_constants(const ProblemParams& params, double A, double tolerance) {
  params.validate();
  const double re = params.re_alpha_lambda();
  if (!(re > 0.0))
    throw ConditionViolation("Re(alpha * lambda) = " + std::to_string(re) + " violates Re(alpha lambda) > 0");
  if (!(A > 0.0) || !std::isfinite(A)) throw std::invalid_argument("lemma constant A must be positive and finite");

  BlowupConstants c;
  c.dim = params.dim;
  c.p = params.p;
  c.p_conj = params.p / (params.p - 1.0);
  c.omega = sphere_measure(params.dim);
  const Estimate w = weight_mass(params.dim, tolerance);
  c.W = w.value;
  c.W_error = w.error;
  c.A = A;
  c.re_alpha_lambda = re;
  c.abs_alpha = std::abs(params.alpha);

  const double p = c.p, q = c.p_conj;
  const double Cp = std::pow(2.0, 1.0 + q / p) * std::pow(p, -q / p) / q * std::pow(re, -q) *
                    std::pow(c.abs_alpha, p + q) * std::pow(A, q) * std::pow(c.W, p);
  c.C = std::pow(Cp, 1.0 / p);
  c.D = 0.5 * re * std::pow(c.abs_alpha, -p) * std::pow(c.W, 1.0 - p);
  if (!(c.C > 0.0 && std::isfinite(c.C) && c.D > 0.0 && std::isfinite(c.D)))
    throw std::invalid_argument("blow-up constants are not finite; check alpha");
  return c;
}

double M_R(const Field& u, Complex alpha, const WeightProfile& weight) {
  if (std::abs(weight.q - (u.grid().dim + 1.0)) > 1e-12)
    throw std::invalid_argument("M_R: weight exponent must equal n + 1");
  return weighted_functional(u, alpha, weight.sample(u.grid()));
}

LifespanReport lifespan_bound(double M0, const BlowupConstants& c, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("lifespan bound: R must be positive");
  LifespanReport r;
  r.R = R;
  r.M0 = M0;
  r.threshold = c.threshold(R);
  r.gap = M0 - r.threshold;
  r.condition_holds = r.gap > 0.0;
  r.T_bound = r.condition_holds
                  ? std::pow(R, c.dim * (c.p - 1.0)) * std::pow(r.gap, 1.0 - c.p) / ((c.p - 1.0) * c.D)
                  : kInf;
  return r;
}

std::vector<double> ode_lower_envelope(double M0, const BlowupConstants& c, double R, std::span<const double> times) {
  const double gap = M0 - c.threshold(R);
  if (!(gap > 0.0)) throw std::invalid_argument("ode envelope: M_R(0) does not exceed C R^{n-1/(p-1)}");
  const double base = std::pow(gap, 1.0 - c.p);
  const double rate = (c.p - 1.0) * c.D * std::pow(R, -c.dim * (c.p - 1.0));
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    const double b = base - rate * t;
    out.push_back(b > 0.0 ? std::pow(b, -1.0 / (c.p - 1.0)) : kInf);
  }
  return out;
}

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::integrable: return "integrable";
    case DataKind::inner_singular: return "inner-singular";
    case DataKind::outer_decay: return "outer-decay";
  }
  return "?";
}

DataKind data_kind_from_string(const std::string& name) {
  if (name == "integrable") return DataKind::integrable;
  if (name == "inner-singular") return DataKind::inner_singular;
  if (name == "outer-decay") return DataKind::outer_decay;
  throw std::invalid_argument("unknown data kind '" + name + "' (integrable, inner-singular, outer-decay)");
}

void InitialDataSpec::validate(int dim, double p) const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("initial data: mu must be positive");
  if (!(edge_width > 0.0 && edge_width < 1.0)) throw std::invalid_argument("initial data: edge width must lie in (0, 1)");
  const double n = dim, crit = 1.0 / (p - 1.0);
  if (kind == DataKind::inner_singular && !(k < std::min(n / 2.0, crit)))
    throw std::invalid_argument("inner-singular data require k < min(n/2, 1/(p-1)) = " +
                                std::to_string(std::min(n / 2.0, crit)) + ", got k = " + std::to_string(k));
  if (kind == DataKind::outer_decay && !(n / 2.0 < k && k < crit))
    throw std::invalid_argument("outer-decay data require n/2 < k < 1/(p-1): " + std::to_string(n / 2.0) + " < " +
                                std::to_string(k) + " < " + std::to_string(crit) + " fails");
}

double data_profile(const InitialDataSpec& s, double r, double cap) {
  switch (s.kind) {
    case DataKind::integrable: return std::exp(-r * r);
    case DataKind::inner_singular:
      if (r <= 1.0) return std::pow(std::max(r, cap), -s.k);
      return std::pow(r, -s.k) * (1.0 - smooth_step((r - 1.0) / s.edge_width));
    case DataKind::outer_decay:
      if (r >= 1.0) return std::pow(r, -s.k);
      if (r <= 1.0 - s.edge_width) return 0.0;
      return std::pow(r, -s.k) * smooth_step((r - 1.0 + s.edge_width) / s.edge_width);
  }
  return 0.0;
}

Field make_initial_data(const InitialDataSpec& spec, const GridSpec& grid, Complex alpha, double p) {
  spec.validate(grid.dim, p);
  if (alpha == Complex{}) throw std::invalid_argument("initial data: alpha must be nonzero");
  const Complex phase = Complex(0.0, -1.0) * std::conj(alpha) / std::norm(alpha);
  const double cap = 0.5 * grid.spacing();
  return Field::sample(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return spec.mu * phase * data_profile(spec, std::sqrt(r2), cap);
  });
}

double corollary_I(const InitialDataSpec& spec, int dim) {
  const double n = dim, w = sphere_measure(dim);
  switch (spec.kind) {
    case DataKind::inner_singular: return w * std::pow(2.0, -n - 1.0) / (n - spec.k);
    case DataKind::outer_decay: {
      if (spec.k < n) return w * std::pow(2.0, -n - 2.0) / (n - spec.k);
      const double e = n - spec.k;
      const double integral = std::abs(e) < 1e-14 ? std::log(2.0) : (std::pow(2.0, e) - 1.0) / e;
      return w * std::pow(2.0, -n - 1.0) * integral;
    }
    case DataKind::integrable: break;
  }
  throw std::invalid_argument("corollary constants need inner-singular or outer-decay data");
}

double corollary_exponent(const InitialDataSpec& spec, int dim, double p) {
  const double m = spec.kind == DataKind::outer_decay ? std::min<double>(dim, spec.k) : spec.k;
  return -1.0 / (1.0 / (p - 1.0) - m);
}

double corollary_R(const InitialDataSpec& spec, const BlowupConstants& c) {
  const double I = corollary_I(spec, c.dim);
  return std::pow(spec.mu * I / (2.0 * c.C), corollary_exponent(spec, c.dim, c.p));
}

CorollaryReport corollary_radius(const InitialDataSpec& spec, const BlowupConstants& c, const ProblemParams& params,
                                 const Field& u0) {
  if (spec.kind == DataKind::integrable) throw std::invalid_argument("corollary radius: data kind has no radius formula");
  spec.validate(c.dim, c.p);
  if (params.dim != c.dim || u0.grid().dim != c.dim) throw std::invalid_argument("corollary radius: dimension mismatch");
  CorollaryReport r;
  r.kind = spec.kind;
  r.mu = spec.mu;
  r.k = spec.k;
  r.I = corollary_I(spec, c.dim);
  r.exponent = corollary_exponent(spec, c.dim, c.p);
  r.R_star = corollary_R(spec, c);
  // At R_star the gap is at least R^{(n-m)} mu I / 2 with m = k (inner) or
  // min(n, k) (outer); substituting into T gives the closed form.
  const double m = spec.kind == DataKind::outer_decay ? std::min<double>(c.dim, spec.k) : spec.k;
  const double crit = 1.0 / (c.p - 1.0);
  r.T_formula = std::pow(2.0 * c.C, -m * (c.p - 1.0) / (m - crit)) * std::pow(2.0, c.p - 1.0) *
                std::pow(spec.mu * r.I, r.exponent) / ((c.p - 1.0) * c.D);

  r.in_regime = spec.kind == DataKind::inner_singular ? r.R_star < 1.0 : r.R_star > 10.0;
  const double M0 = M_R(u0, params.alpha, WeightProfile(c.dim + 1.0, r.R_star));
  r.at_radius = lifespan_bound(M0, c, r.R_star);
  r.gate = r.at_radius.condition_holds;
  r.conclusive = r.gate;
  if (!r.gate)
    r.note = "lattice M_R(0) does not exceed C R^{n-1/(p-1)} at R*";
  else if (!r.in_regime)
    r.note = spec.kind == DataKind::inner_singular ? "R_1 = " + std::to_string(r.R_star) + " is not below 1"
                                                   : "R_2 = " + std::to_string(r.R_star) + " is not above 10";
  return r;
}

}  // namespace fracblow
