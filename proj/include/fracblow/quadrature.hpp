#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracblow {

/// Raised when an integral cannot meet its tolerance within the work budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial, double residual)
      : std::runtime_error(what), partial_(partial), residual_(residual) {}
  double partial_value() const { return partial_; }
  double residual() const { return residual_; }

 private:
  double partial_;
  double residual_;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    error += o.error;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (Newton iteration on P_n).
const GaussRule& gauss_legendre(int order);

template <typename Fn>
double gauss_panel(Fn&& fn, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  return s * half;
}

/// Gauss sum of f and of |f| over [a, b].
template <typename Fn>
std::pair<double, double> gauss_panel_abs(Fn&& fn, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0, t = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = rule.weights[i] * fn(mid + half * rule.nodes[i]);
    s += v;
    t += std::abs(v);
  }
  return {s * half, t * std::abs(half)};
}

struct AdaptiveOptions {
  int order = 16;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 40;
  std::size_t max_evaluations = 20'000'000;
};

namespace detail {

template <typename Fn>
QuadResult adaptive_step(Fn& fn, double a, double b, double whole, double tol, int depth,
                         const AdaptiveOptions& opt, const GaussRule& rule, std::size_t& budget) {
  const double m = 0.5 * (a + b);
  const auto [left, left_abs] = gauss_panel_abs(fn, a, m, rule);
  const auto [right, right_abs] = gauss_panel_abs(fn, m, b, rule);
  const double refined = left + right;
  const double err = std::abs(refined - whole);
  const std::size_t evals = 2 * rule.nodes.size();
  budget = budget > evals ? budget - evals : 0;
  // Differences at the roundoff level of the integrand cannot be refined away.
  const double floor = 64.0 * 2.2e-16 * (left_abs + right_abs);
  if (err <= std::max({tol, opt.rel_tol * std::abs(refined), floor}) || !(err == err)) {
    return {refined, std::max(err, floor), evals, err == err};
  }
  if (depth >= opt.max_depth || budget == 0) return {refined, err, evals, false};
  QuadResult r = adaptive_step(fn, a, m, left, 0.5 * tol, depth + 1, opt, rule, budget);
  r += adaptive_step(fn, m, b, right, 0.5 * tol, depth + 1, opt, rule, budget);
  r.evaluations += evals;
  return r;
}

}  // namespace detail

/// Recursive-bisection Gauss-Legendre quadrature. The error estimate of a
/// panel is |Q(a,b) - Q(a,m) - Q(m,b)|; a panel is accepted when that is
/// below max(tol, rel_tol*|Q|). Deterministic for fixed inputs.
template <typename Fn>
QuadResult integrate_adaptive(Fn&& fn, double a, double b, const AdaptiveOptions& opt = {}) {
  if (a == b) return {};
  const GaussRule& rule = gauss_legendre(opt.order);
  const double whole = gauss_panel(fn, a, b, rule);
  std::size_t budget = opt.max_evaluations;
  QuadResult r = detail::adaptive_step(fn, a, b, whole, opt.abs_tol, 0, opt, rule, budget);
  r.evaluations += rule.nodes.size();
  return r;
}

/// Integrates over consecutive panels [b_i, b_{i+1}] of a sorted breakpoint list.
template <typename Fn>
QuadResult integrate_panels(Fn&& fn, const std::vector<double>& breaks, const AdaptiveOptions& opt) {
  QuadResult total;
  const double tol = opt.abs_tol / static_cast<double>(std::max<std::size_t>(1, breaks.size()));
  AdaptiveOptions local = opt;
  local.abs_tol = tol;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += integrate_adaptive(fn, breaks[i], breaks[i + 1], local);
  }
  return total;
}

}  // namespace fracblow
