#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracblow/blowup_theory.hpp"
#include "fracblow/quadrature.hpp"

using namespace fracblow;
using std::numbers::pi;

namespace {

ProblemParams default_params() {
  ProblemParams p;
  p.dim = 1;
  p.p = 2.0;
  p.lambda = Complex(0.0, 1.0);
  p.alpha = Complex(0.0, -1.0);
  return p;
}

BlowupConstants toy_constants() {
  BlowupConstants c;
  c.dim = 1;
  c.p = 2.0;
  c.p_conj = 2.0;
  c.C = 0.5;
  c.D = 1.0;
  return c;
}

// 1 on |x| <= 1 - w/2, 0 beyond 1 + w/2, smooth in between.
double smooth_indicator(double r, double w) {
  const double t = (r - 1.0 + 0.5 * w) / w;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return b / (a + b);
}

}  // namespace

TEST_CASE("weight mass and sphere measure") {
  const auto w1 = weight_mass(1);
  CHECK(w1.value == doctest::Approx(pi).epsilon(1e-13));
  CHECK(w1.error < 1e-12);
  CHECK(weight_mass(2).value == doctest::Approx(2.0 * pi).epsilon(1e-13));
  const auto c = compute_constants(default_params(), 1.0);
  CHECK(c.omega == 2.0);
  ProblemParams p2 = default_params();
  p2.dim = 2;
  CHECK(compute_constants(p2, 1.0).omega == doctest::Approx(2.0 * pi));
}

TEST_CASE("constants for n = 1, p = 2, alpha lambda = 1") {
  // p = p' = 2: C^2 = 4 * 2^{-1} * 2^{-1} * A^2 W^2, so C = A W; D = 1 / (2W).
  const auto c = compute_constants(default_params(), 1.2);
  CHECK(c.p_conj == 2.0);
  CHECK(c.C == doctest::Approx(1.2 * pi).epsilon(1e-13));
  CHECK(c.D == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-13));
  CHECK(c.threshold(0.3) == doctest::Approx(1.2 * pi));
}

TEST_CASE("constants for a fractional exponent follow the displayed formula") {
  ProblemParams p = default_params();
  p.p = 1.5;
  p.alpha = Complex(0.0, -2.0);
  const auto c = compute_constants(p, 0.8);
  const double q = 3.0, W = pi;
  const double Cp = std::pow(2.0, 1.0 + q / 1.5) * std::pow(1.5, -q / 1.5) / q * std::pow(2.0, -q) *
                    std::pow(2.0, 1.5 + q) * std::pow(0.8, q) * std::pow(W, 1.5);
  CHECK(c.C == doctest::Approx(std::pow(Cp, 1.0 / 1.5)).epsilon(1e-13));
  CHECK(c.D == doctest::Approx(0.5 * 2.0 * std::pow(2.0, -1.5) * std::pow(W, -0.5)).epsilon(1e-13));
}

TEST_CASE("sign condition gate") {
  ProblemParams p = default_params();
  p.alpha = 1.0;
  CHECK_THROWS_AS(compute_constants(p, 1.0), ConditionViolation);
  p.alpha = Complex(0.0, 1.0);
  CHECK_THROWS_AS(compute_constants(p, 1.0), ConditionViolation);
  CHECK_THROWS_AS(compute_constants(default_params(), 0.0), std::invalid_argument);
}

TEST_CASE("M_R: zero, linearity, weight exponent") {
  const GridSpec grid{1, 40.0, 2048};
  const Complex alpha(0.0, -1.0);
  const WeightProfile w(2.0, 3.0);
  CHECK(M_R(Field(grid), alpha, w) == 0.0);
  InitialDataSpec s;
  s.kind = DataKind::integrable;
  const Field f = make_initial_data(s, grid, alpha, 2.0);
  CHECK(M_R(Complex(7.5) * f, alpha, w) == doctest::Approx(7.5 * M_R(f, alpha, w)).epsilon(1e-14));
  CHECK_THROWS_AS(M_R(f, alpha, WeightProfile(3.0, 1.0)), std::invalid_argument);
}

TEST_CASE("M_R of a mollified indicator") {
  const double w = 0.05;
  const GridSpec grid{1, 40.0, 1 << 16};
  const Field u = Field::sample(grid, [&](std::span<const double> x) {
    return Complex(0.0, smooth_indicator(std::abs(x[0]), w));
  });
  AdaptiveOptions opt;
  opt.abs_tol = 1e-14;
  const double oracle =
      2.0 * integrate_panels([&](double x) { return smooth_indicator(x, w) / (1.0 + x * x); },
                             {0.0, 1.0 - w, 1.0, 1.0 + w, 2.0}, opt)
                .value;
  const WeightProfile weight(2.0, 1.0);
  CHECK(M_R(u, 1.0, weight) == doctest::Approx(-oracle).epsilon(1e-9));
  CHECK(M_R(u, -1.0, weight) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::abs(oracle - pi / 2.0) < 1e-3);
}

TEST_CASE("lifespan bound by substitution") {
  const auto c = toy_constants();
  const auto r = lifespan_bound(1.5, c, 1.0);
  CHECK(r.condition_holds);
  CHECK(r.gap == doctest::Approx(1.0));
  CHECK(r.T_bound == doctest::Approx(1.0));
  CHECK(lifespan_bound(2.5, c, 1.0).T_bound == doctest::Approx(0.5));
  const auto below = lifespan_bound(0.4, c, 1.0);
  CHECK_FALSE(below.condition_holds);
  CHECK(std::isinf(below.T_bound));
}

TEST_CASE("ODE envelope") {
  const auto c = toy_constants();
  const double T = lifespan_bound(1.5, c, 1.0).T_bound;
  std::vector<double> times;
  for (int i = 0; i < 50; ++i) times.push_back(T * i / 50.0);
  times.push_back(T * (1.0 - 1e-9));
  times.push_back(T);
  const auto e = ode_lower_envelope(1.5, c, 1.0, times);
  CHECK(e.front() == doctest::Approx(1.0));
  for (std::size_t i = 1; i + 1 < e.size(); ++i) CHECK(e[i] > e[i - 1]);
  CHECK(e[e.size() - 2] > 1e8);
  CHECK(std::isinf(e.back()));
  CHECK_THROWS_AS(ode_lower_envelope(0.2, c, 1.0, times), std::invalid_argument);
}

TEST_CASE("initial data phase convention") {
  const GridSpec grid{1, 10.0, 256};
  InitialDataSpec s;
  s.mu = 3.0;
  for (Complex alpha : {Complex(0.0, -1.0), Complex(1.0, 2.0), Complex(-0.3, 0.1)}) {
    const Field u = make_initial_data(s, grid, alpha, 2.0);
    for (std::size_t i = 0; i < grid.points; ++i) {
      const double r = std::abs(grid.coordinate(i));
      const Complex z = alpha * u[i];
      CHECK(std::abs(z.real()) < 1e-12 * std::max(1.0, std::abs(z)));
      CHECK(-z.imag() == doctest::Approx(3.0 * data_profile(s, r, 0.5 * grid.spacing())).epsilon(1e-13));
    }
  }
  // alpha = conj(lambda): Re(conj(lambda) u0) = 0 pointwise
  const Complex lambda(0.6, 0.8);
  const Field u = make_initial_data(s, grid, std::conj(lambda), 2.0);
  for (const auto& z : u.values()) CHECK(std::abs((std::conj(lambda) * z).real()) < 1e-12);
}

TEST_CASE("data profiles") {
  InitialDataSpec in;
  in.k = 0.25;
  CHECK(data_profile(in, 0.0, 0.01) == doctest::Approx(std::pow(0.01, -0.25)));
  CHECK(data_profile(in, 0.5, 0.01) == doctest::Approx(std::pow(0.5, -0.25)));
  CHECK(data_profile(in, 1.1, 0.01) >= 0.0);
  CHECK(data_profile(in, 1.3, 0.01) == 0.0);
  InitialDataSpec out;
  out.kind = DataKind::outer_decay;
  out.k = 0.75;
  CHECK(data_profile(out, 0.0, 0.01) == 0.0);
  CHECK(data_profile(out, 2.0, 0.01) == doctest::Approx(std::pow(2.0, -0.75)));
  CHECK(data_profile(out, 0.9, 0.01) <= std::pow(0.9, -0.75));
}

TEST_CASE("data invariants name the violated inequality") {
  InitialDataSpec s;
  s.k = 0.6;
  try {
    s.validate(1, 2.0);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("k < min(n/2, 1/(p-1))") != std::string::npos);
  }
  s.kind = DataKind::outer_decay;
  s.k = 0.4;
  CHECK_THROWS_WITH_AS(s.validate(1, 2.0), doctest::Contains("n/2 < k < 1/(p-1)"), std::invalid_argument);
  s.k = 0.7;
  CHECK_NOTHROW(s.validate(1, 2.0));
  s.mu = -1.0;
  CHECK_THROWS_AS(s.validate(1, 2.0), std::invalid_argument);
}

TEST_CASE("outer-decay data with k > n are integrable under refinement") {
  InitialDataSpec s;
  s.kind = DataKind::outer_decay;
  s.k = 1.5;  // needs p < 5/3 so that k < 1/(p-1)
  double l1_prev = 0.0, l2_prev = 0.0;
  for (std::size_t N : {1u << 15, 1u << 16, 1u << 17}) {
    const GridSpec grid{1, 200.0, N};
    const Field u = make_initial_data(s, grid, Complex(0.0, -1.0), 1.5);
    double l1 = 0.0;
    for (const auto& z : u.values()) l1 += std::abs(z) * grid.spacing();
    const double l2 = u.l2_norm();
    CHECK(std::isfinite(l1));
    if (l1_prev > 0.0) {
      CHECK(std::abs(l1 - l1_prev) < 1e-3 * l1);
      CHECK(std::abs(l2 - l2_prev) < 1e-3 * l2);
    }
    l1_prev = l1;
    l2_prev = l2;
  }
}

TEST_CASE("inner-singular data with k < n/2 have converging L2 norm") {
  InitialDataSpec s;
  s.k = 0.25;
  std::vector<double> norms;
  for (std::size_t N : {1u << 12, 1u << 14, 1u << 16, 1u << 18}) {
    const GridSpec grid{1, 40.0, N};
    norms.push_back(make_initial_data(s, grid, Complex(0.0, -1.0), 2.0).l2_norm());
  }
  const double d1 = std::abs(norms[1] - norms[0]), d2 = std::abs(norms[2] - norms[1]), d3 = std::abs(norms[3] - norms[2]);
  // the cap at dx/2 leaves a defect of order dx^{1/2 - k}, so each 4x refinement shrinks it by ~2
  CHECK(d2 < 0.6 * d1);
  CHECK(d3 < 0.6 * d2);
  CHECK(d3 < 5e-3 * norms.back());
}

TEST_CASE("corollary constants") {
  InitialDataSpec s;
  s.k = 0.25;
  CHECK(corollary_I(s, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(corollary_exponent(s, 1, 2.0) == doctest::Approx(-4.0 / 3.0));
  InitialDataSpec o;
  o.kind = DataKind::outer_decay;
  o.k = 0.75;
  CHECK(corollary_I(o, 1) == doctest::Approx(2.0 * std::pow(2.0, -3.0) / 0.25));
  CHECK(corollary_exponent(o, 1, 2.0) == doctest::Approx(-4.0));
  o.k = 1.5;
  CHECK(corollary_exponent(o, 1, 1.5) == doctest::Approx(-1.0));  // min(n, k) = n
  CHECK(corollary_I(o, 1) == doctest::Approx(2.0 * 0.25 * (std::pow(2.0, -0.5) - 1.0) / -0.5));
  InitialDataSpec g;
  g.kind = DataKind::integrable;
  CHECK_THROWS_AS(corollary_I(g, 1), std::invalid_argument);
}

TEST_CASE("corollary radius: mu scaling, gate and consistency") {
  const auto params = default_params();
  const auto c = compute_constants(params, 1.2);
  InitialDataSpec s;
  s.k = 0.25;
  s.mu = 60.0;
  const double R = corollary_R(s, c);
  const GridSpec grid{1, 40.0, 2 * static_cast<std::size_t>(std::ceil(40.0 * 16.0 / R))};
  const auto rep = corollary_radius(s, c, params, make_initial_data(s, grid, params.alpha, params.p));
  CHECK(rep.R_star == doctest::Approx(R));
  CHECK(rep.in_regime);
  CHECK(rep.gate);
  CHECK(rep.conclusive);
  CHECK(std::isfinite(rep.at_radius.T_bound));
  CHECK(rep.at_radius.T_bound <= rep.T_formula);

  InitialDataSpec twice = s;
  twice.mu = 2.0 * s.mu;
  const auto rep2 = corollary_radius(twice, c, params, make_initial_data(twice, grid, params.alpha, params.p));
  CHECK(rep2.T_formula / rep.T_formula == doctest::Approx(std::pow(2.0, -4.0 / 3.0)).epsilon(1e-14));

  InitialDataSpec small = s;
  small.mu = 5.0;
  const auto rep3 = corollary_radius(small, c, params, make_initial_data(small, grid, params.alpha, params.p));
  CHECK(rep3.R_star > 1.0);
  CHECK_FALSE(rep3.in_regime);
  CHECK(rep3.conclusive);
  CHECK_FALSE(rep3.note.empty());

  // for R* >> 1 the weight is ~1 on the support and M_R(0) ~ mu * 8/3 < C
  InitialDataSpec tiny = s;
  tiny.mu = 1.0;
  const auto rep4 = corollary_radius(tiny, c, params, make_initial_data(tiny, grid, params.alpha, params.p));
  CHECK_FALSE(rep4.gate);
  CHECK_FALSE(rep4.conclusive);
  CHECK(std::isinf(rep4.at_radius.T_bound));
}
