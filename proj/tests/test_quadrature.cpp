#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracblow/quadrature.hpp"

using namespace fracblow;

TEST_CASE("gauss rule integrates polynomials of degree 2n-1 exactly") {
  const auto& rule = gauss_legendre(6);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 10);
  CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
  double w = 0.0;
  for (double x : rule.weights) w += x;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("adaptive quadrature resolves a narrow peak") {
  // int_{-50}^{50} 1/(1+(x/0.01)^2) dx = 0.02 atan(5000)
  auto f = [](double x) { return 1.0 / (1.0 + x * x * 1e4); };
  AdaptiveOptions opt;
  opt.abs_tol = 1e-14;
  const auto r = integrate_adaptive(f, -50.0, 50.0, opt);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.02 * std::atan(5000.0)).epsilon(1e-12));
  CHECK(r.error < 1e-10);
}

TEST_CASE("depth exhaustion is reported, not hidden") {
  auto f = [](double x) { return x > 0.3 ? 1.0 : 0.0; };
  AdaptiveOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 0.0;
  opt.max_depth = 5;
  const auto r = integrate_adaptive(f, 0.0, 1.0, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.value == doctest::Approx(0.7).epsilon(1e-2));
}
