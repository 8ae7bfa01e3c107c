#include "fracblow/frac_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/bessel.hpp>

#include "fracblow/fft.hpp"

namespace fracblow {
namespace {

constexpr double kPi = std::numbers::pi;

double sphere_measure(int dim) { return dim == 1 ? 2.0 : 2.0 * kPi; }

// Breakpoints for the radial variable: geometric shells from the inner radius
// (relative to max(scale, r), the length on which the profile varies at r)
// out to the cutoff, plus a graded cluster around rho = r where f(x - y)
// passes through the profile's center.
std::vector<double> radial_breaks(double r, double scale, double cutoff, const PVQuadratureConfig& cfg) {
  std::vector<double> b{0.0};
  const double inner = cfg.inner_radius * std::max(scale, r);
  for (double s = inner; s < cutoff; s *= cfg.growth) b.push_back(s);
  b.push_back(cutoff);
  if (r > inner) {
    b.push_back(r);
    for (double off = 0.125 * scale; off < r; off *= 2.0) {
      b.push_back(r - off);
      b.push_back(r + off);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::remove_if(b.begin(), b.end(), [&](double v) { return v < 0.0 || v > cutoff; }), b.end());
  b.erase(std::unique(b.begin(), b.end(), [](double a, double c) { return std::abs(a - c) <= 1e-14 * std::max(1.0, c); }),
          b.end());
  return b;
}

// 2 * int_0^{pi/2} [2 f(r) - f(|x+y|) - f(|x-y|)] dtheta for |y| = rho.
double angular_second_difference(const RadialProfile& f, double r, double rho, const PVQuadratureConfig& cfg) {
  const double fr = f.value_sq(r * r);
  const double f0 = std::abs(f.value_sq(0.0));
  const double sum2 = (r + rho) * (r + rho);
  const double diff2 = (r - rho) * (r - rho);
  const double rr = 4.0 * r * rho;
  auto integrand = [&](double theta) {
    const double s = std::sin(0.5 * theta);
    const double s2 = rr * s * s;
    return 2.0 * fr - f.value_sq(sum2 - s2) - f.value_sq(diff2 + s2);
  };
  std::vector<double> breaks{0.0};
  const double half_pi = 0.5 * kPi;
  if (r * rho > 0.0) {
    const double width = std::sqrt((f.scale * f.scale + diff2) / (r * rho));
    for (double w = 0.25 * width; w < half_pi; w *= 2.0) breaks.push_back(w);
  }
  breaks.push_back(half_pi);
  AdaptiveOptions opt;
  opt.order = std::max(8, cfg.nodes / 2 + 2);
  opt.abs_tol = 1e-16 * (std::abs(fr) + f0);
  opt.rel_tol = 1e-13;
  opt.max_depth = 30;
  return 2.0 * integrate_panels(integrand, breaks, opt).value;
}

// The innermost shell gets a fixed rule pair: bisecting towards rho = 0 only
// samples the roundoff of the second difference.
template <typename Fn>
QuadResult integrate_shells(Fn&& fn, const std::vector<double>& breaks, const AdaptiveOptions& opt) {
  QuadResult inner;
  const double lo = gauss_panel(fn, breaks[0], breaks[1], gauss_legendre(opt.order));
  inner.value = gauss_panel(fn, breaks[0], breaks[1], gauss_legendre(2 * opt.order));
  inner.error = std::abs(inner.value - lo);
  inner.evaluations = 3 * static_cast<std::size_t>(opt.order);
  const std::vector<double> rest(breaks.begin() + 1, breaks.end());
  if (rest.size() > 1) inner += integrate_panels(fn, rest, opt);
  return inner;
}

}  // namespace

void PVQuadratureConfig::validate() const {
  if (!(inner_radius > 0.0 && inner_radius < 1.0)) throw std::invalid_argument("PV inner radius must lie in (0,1)");
  if (!(far_cutoff >= 1.0)) throw std::invalid_argument("PV far cutoff must be >= 1");
  if (!(growth > 1.0)) throw std::invalid_argument("PV shell growth factor must exceed 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("PV tolerance must be positive");
  if (nodes < 2) throw std::invalid_argument("PV shell node count must be >= 2");
}

WeightProfile::WeightProfile(double q_, double R_) : q(q_), R(R_) {
  if (!(q > 0.0) || !(R > 0.0)) throw std::invalid_argument("weight profile requires q > 0 and R > 0");
}

double WeightProfile::operator()(double r) const { return std::pow(1.0 + (r / R) * (r / R), -0.5 * q); }

RadialProfile WeightProfile::profile() const {
  const double q_ = q;
  const double inv_r2 = 1.0 / (R * R);
  return RadialProfile{"japanese_bracket", [q_, inv_r2](double r2) { return std::pow(1.0 + r2 * inv_r2, -0.5 * q_); },
                       R};
}

std::vector<double> WeightProfile::sample(const GridSpec& grid) const {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (*this)(grid.radius(i));
  return w;
}

RadialProfile gaussian_profile() {
  return RadialProfile{"gaussian", [](double r2) { return std::exp(-r2); }, 1.0};
}

RadialProfile constant_profile(double c) {
  return RadialProfile{"constant", [c](double) { return c; }, 1.0};
}

Estimate normalization_constant(int dim, double tolerance) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("normalization constant: dimension must be 1 or 2");
  AdaptiveOptions opt;
  opt.order = 20;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-14;
  // Truncate at a whole number of periods; the remainder is handled by
  // integration by parts with an explicit bound.
  const int periods = 400;
  const double cutoff = 2.0 * kPi * periods;
  QuadResult body;
  double tail = 0.0;
  double tail_bound = 0.0;
  if (dim == 1) {
    auto integrand = [](double x) {
      const double s = std::sin(0.5 * x);
      return 2.0 * (2.0 * s * s) / (x * x);
    };
    for (int j = 0; j < periods; ++j) body += integrate_adaptive(integrand, 2.0 * kPi * j, 2.0 * kPi * (j + 1), opt);
    // int_Y^inf cos/x^2 = -sin Y/Y^2 + 2 cos Y/Y^3 - 6 int cos/x^4
    const double y = cutoff;
    const double cos_tail = -std::sin(y) / (y * y) + 2.0 * std::cos(y) / (y * y * y);
    tail = 2.0 * (1.0 / y - cos_tail);
    tail_bound = 2.0 * 2.0 / (y * y * y);
  } else {
    auto integrand = [](double r) { return 2.0 * kPi * (1.0 - boost::math::cyl_bessel_j(0, r)) / (r * r); };
    for (int j = 0; j < 2 * periods; ++j) body += integrate_adaptive(integrand, kPi * j, kPi * (j + 1), opt);
    // int_Y^inf J0/r^2 = -J1(Y)/Y^2 + 3 J0(Y)/Y^3 - 9 int J0/r^4
    const double y = cutoff;
    const double j_tail = -boost::math::cyl_bessel_j(1, y) / (y * y) + 3.0 * boost::math::cyl_bessel_j(0, y) / (y * y * y);
    tail = 2.0 * kPi * (1.0 / y - j_tail);
    tail_bound = 2.0 * kPi * 3.0 / (y * y * y);
  }
  const double integral = body.value + tail;
  const double integral_error = body.error + tail_bound;
  Estimate b{1.0 / integral, integral_error / (integral * integral)};
  if (!body.converged || b.error > tolerance) {
    throw QuadratureError("normalization constant did not reach tolerance", b.value, b.error);
  }
  return b;
}

Estimate frac_laplacian_pv(const RadialProfile& f, int dim, double r, double B, const PVQuadratureConfig& config) {
  config.validate();
  if (dim != 1 && dim != 2) throw std::invalid_argument("PV evaluation: dimension must be 1 or 2");
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("PV evaluation: point must be finite");
  const double scale = f.scale;
  const double cutoff = config.far_cutoff * std::max(scale, r);
  const auto breaks = radial_breaks(r, scale, cutoff, config);

  AdaptiveOptions opt;
  opt.order = config.nodes;
  opt.abs_tol = 0.5 * config.tolerance / B;
  opt.rel_tol = config.rel_tolerance;
  opt.max_depth = config.max_depth;

  QuadResult body;
  const double fr = f.value_sq(r * r);
  if (dim == 1) {
    auto integrand = [&](double rho) {
      const double a = r + rho;
      const double c = r - rho;
      return (2.0 * fr - f.value_sq(a * a) - f.value_sq(c * c)) / (rho * rho);
    };
    body = integrate_shells(integrand, breaks, opt);
  } else {
    auto integrand = [&](double rho) { return angular_second_difference(f, r, rho, config) / (rho * rho); };
    body = integrate_shells(integrand, breaks, opt);
  }

  // Roundoff of the second difference grows like eps*|f(x)|/rho^2 near the
  // origin; charge it to the innermost panel.
  const double eps = std::numeric_limits<double>::epsilon();
  auto noise = [&](double rho) { return 16.0 * eps * std::abs(fr) * (dim == 1 ? 1.0 : kPi) / (rho * rho); };
  const double roundoff = gauss_panel(noise, 0.0, breaks[1], gauss_legendre(config.nodes)) +
                          64.0 * eps * std::abs(body.value);
  body.error += roundoff;

  // Far field: f(x)/|y|^{n+1} integrates exactly; the f(x+y) part is bounded
  // through the profile's decay.
  const double omega = sphere_measure(dim);
  const double analytic_tail = omega * f.value_sq(r * r) / cutoff;
  const double tail_bound = omega * f.tail_sup(std::max(cutoff - r, 0.0)) / cutoff;

  Estimate out{B * (body.value + analytic_tail), B * (body.error + tail_bound)};
  if (!body.converged) {
    throw QuadratureError("PV shell quadrature did not converge", out.value, out.error);
  }
  if (B * tail_bound > std::max(config.tolerance, config.rel_tolerance * std::abs(out.value))) {
    throw QuadratureError("PV shell series not converged at the far cutoff", out.value, B * tail_bound);
  }
  return out;
}

Estimate frac_laplacian_pv(const RadialProfile& f, std::span<const double> x, double B,
                           const PVQuadratureConfig& config) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return frac_laplacian_pv(f, static_cast<int>(x.size()), std::sqrt(r2), B, config);
}

std::vector<Estimate> frac_laplacian_pv_batch(const RadialProfile& f, int dim, std::span<const double> radii,
                                              double B, const PVQuadratureConfig& config, unsigned threads) {
  std::vector<Estimate> out(radii.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(radii.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] = frac_laplacian_pv(f, dim, radii[i], B, config);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < radii.size(); i += threads) out[i] = frac_laplacian_pv(f, dim, radii[i], B, config);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Field frac_laplacian_spectral(const Field& f) {
  return apply_radial_multiplier(f, [](double k) { return Complex(k, 0.0); });
}

bool boundary_negligible(const Field& f, double ratio) {
  const auto& grid = f.grid();
  const double cap = ratio * f.sup_norm();
  const std::size_t n = grid.points;
  if (grid.dim == 1) return std::abs(f[0]) <= cap && std::abs(f[n - 1]) <= cap;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(f[i]) > cap || std::abs(f[(n - 1) * n + i]) > cap) return false;
    if (std::abs(f[i * n]) > cap || std::abs(f[i * n + n - 1]) > cap) return false;
  }
  return true;
}

double cordoba_check(const Field& phi) {
  const double sup = phi.sup_norm();
  if (sup == 0.0) return 0.0;
  for (const auto& z : phi.values()) {
    if (std::abs(z.imag()) > 1e-14 * sup) throw std::invalid_argument("cordoba_check: field must be real");
  }
  if (!boundary_negligible(phi, 1e-8)) {
    throw std::invalid_argument("cordoba_check: field is not negligible on the boundary");
  }
  Field square = phi;
  for (auto& z : square.values()) z = Complex(z.real() * z.real(), 0.0);
  const Field lhs = frac_laplacian_spectral(square);
  const Field dphi = frac_laplacian_spectral(phi);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    worst = std::max(worst, lhs[i].real() - 2.0 * phi[i].real() * dphi[i].real());
  }
  return worst;
}

}  // namespace fracblow
