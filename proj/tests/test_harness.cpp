#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fracblow/harness.hpp"

using namespace fracblow;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.ini");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fracblow_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kSmallSweep = R"(
[problem]
dim = 1
[data]
kind = inner-singular
k = 0.25
[sweep]
mu = 40, 50
cells_per_radius = 4
)";

}  // namespace

TEST_CASE("config defaults and full parse") {
  const auto d = parse("");
  CHECK(d.problem.dim == 1);
  CHECK(d.problem.lambda == Complex(0.0, 1.0));
  CHECK(d.lemma.q_dim1.size() == 4);
  CHECK(d.lemma.q_dim2.size() == 4);

  const auto c = parse(R"(
; comment
[problem]
dim = 2
p = 1.5
lambda = 0.6, 0.8
alpha = 0.6, -0.8
A = 2.5
[grid]
half_width = 20
points = 128
[lemma]
q_dim1 =
q_dim2 = 3
gaussian = false
[data]
kind = outer-decay
k = 1.5
mu = 0.5
[sweep]
mu = 1, 2, 4
workers = 3
)");
  CHECK(c.problem.dim == 2);
  CHECK(c.grid.dim == 2);
  CHECK(c.problem.p == 1.5);
  CHECK(c.problem.alpha == Complex(0.6, -0.8));
  CHECK(c.A == 2.5);
  CHECK(c.grid.points == 128);
  CHECK(c.lemma.q_dim1.empty());
  CHECK(c.lemma.q_dim2 == std::vector<double>{3.0});
  CHECK_FALSE(c.lemma.gaussian);
  CHECK(c.data.kind == DataKind::outer_decay);
  CHECK(sweep_mu_values(c.sweep) == std::vector<double>{1.0, 2.0, 4.0});
  CHECK(c.sweep.workers == 3);
}

TEST_CASE("config diagnostics carry line and field") {
  CHECK(parse_error("[problem]\ndim = 1\np = two\n").find("test.ini:3: problem.p: expected a number") == 0);
  CHECK(parse_error("[grid]\n\npoints = -4\n").find("test.ini:3: grid.points") == 0);
  CHECK(parse_error("[problem]\ndimension = 1\n").find("test.ini:2: problem.dimension: unknown key") == 0);
  CHECK(parse_error("[solver]\nx = 1\n").find("test.ini:1: solver: unknown section") == 0);
  CHECK(parse_error("[problem\ndim = 1\n").find("test.ini:1:") == 0);
  CHECK(parse_error("[problem]\ndim = 1\ndim = 2\n").find("test.ini:3:") == 0);
  CHECK(parse_error("[problem]\ndim = 3\n").find("problem") != std::string::npos);
  CHECK(parse_error("[problem]\nlambda = 1\n").find("problem.lambda: expected 're, im'") != std::string::npos);
  CHECK(parse_error("[data]\nk = 0.7\n").find("k < min(n/2, 1/(p-1))") != std::string::npos);
  CHECK(parse_error("[lemma]\nq_dim1 = 1, , 2\n").find("empty list item") != std::string::npos);
  CHECK(parse_error("[sweep]\nmu_min = 10\nmu_max = 5\n").find("sweep.mu_max") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/fracblow.ini"), ConfigError);
}

TEST_CASE("sweep mu values") {
  SweepSection s;
  s.mu_min = 1.0;
  s.mu_max = 10.0;
  s.count = 8;
  const auto mu = sweep_mu_values(s);
  REQUIRE(mu.size() == 8);
  CHECK(mu.front() == doctest::Approx(1.0));
  CHECK(mu.back() == doctest::Approx(10.0));
  CHECK(mu[1] / mu[0] == doctest::Approx(std::pow(10.0, 1.0 / 7.0)));
  s.count = 1;
  CHECK(sweep_mu_values(s) == std::vector<double>{1.0});
}

TEST_CASE("power-law fits: identities and seeded noise") {
  std::vector<std::pair<double, double>> exact, flat;
  for (int i = 0; i < 8; ++i) {
    const double mu = std::pow(10.0, i / 7.0);
    exact.emplace_back(mu, 3.0 * std::pow(mu, -2.0));
    flat.emplace_back(mu, 5.0);
  }
  const auto e = fit_power_law(exact);
  CHECK(e.exponent == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(std::exp(e.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.residual < 1e-13);
  CHECK(std::abs(fit_power_law(flat).exponent) < 1e-14);

  std::mt19937_64 rng(20261016);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    auto noisy = exact;
    for (auto& [mu, T] : noisy) T *= std::exp(noise(rng));
    CHECK(std::abs(fit_power_law(noisy).exponent + 2.0) < 0.1);
  }
}

TEST_CASE("sweep fit selection and warnings") {
  SweepPlan plan;
  plan.data.kind = DataKind::inner_singular;
  SweepResult single;
  single.rows.resize(1);
  single.rows[0] = {.mu = 1.0, .T_formula = 1.0, .in_regime = true, .T_num = 1.0, .status = "blowup"};
  fit_sweep(single, plan);
  CHECK_FALSE(single.T_num_fit);
  CHECK_FALSE(single.T_formula_fit);
  REQUIRE(single.warnings.size() == 1);
  CHECK(single.warnings[0].find("length 1") != std::string::npos);

  SweepResult r;
  for (int i = 0; i < 8; ++i) {
    SweepRow row;
    row.mu = std::pow(10.0, i / 7.0);
    row.T_formula = 2.0 * std::pow(row.mu, -4.0 / 3.0);
    row.T_num = 0.5 * std::pow(row.mu, -1.5);
    row.in_regime = true;
    row.status = "blowup";
    r.rows.push_back(row);
  }
  r.rows[0].in_regime = false;
  r.rows[0].T_num = 1e6;
  r.rows[1].status = "failed";
  r.rows[1].T_num = 1e-9;
  r.rows[2].status = "no-blowup";
  fit_sweep(r, plan);
  REQUIRE(r.T_num_fit);
  REQUIRE(r.T_formula_fit);
  CHECK(r.T_num_fit->exponent == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(r.T_formula_fit->exponent == doctest::Approx(-4.0 / 3.0).epsilon(1e-13));
  CHECK_FALSE(r.warnings.empty());  // fewer than a decade left

  r.rows[3].status = "failed";
  r.rows[4].status = "failed";
  r.warnings.clear();
  fit_sweep(r, plan);
  CHECK_FALSE(r.T_num_fit);
  CHECK(r.T_formula_fit);
}

TEST_CASE("lemma suite: empty q lists and malformed configs write nothing") {
  const auto dir = fresh_dir("lemma_empty");
  const auto res = run_lemma_suite(parse("[lemma]\nq_dim1 =\nq_dim2 =\n"), dir);
  CHECK(res.verdicts.empty());
  CHECK(res.warnings.size() == 1);
  CHECK_FALSE(fs::exists(dir));

  const auto bad = fresh_dir("lemma_bad_cfg") ;
  fs::create_directories(bad);
  std::ofstream(bad / "bad.ini") << "[lemma]\nq_dim1 = 1, x\n";
  const auto out = bad / "out";
  CHECK_THROWS_AS(run_lemma_suite(bad / "bad.ini", out), ConfigError);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("lemma suite: report layout and constants") {
  const auto dir = fresh_dir("lemma_small");
  const auto res = run_lemma_suite(parse("[lemma]\nq_dim1 = 2\nq_dim2 =\ngaussian = false\n"), dir);
  REQUIRE(res.verdicts.size() == 1);
  CHECK(res.verdicts[0].passed);
  CHECK(res.warnings.size() == 1);
  CHECK(fs::exists(dir / "lemma_n1_q2.csv"));
  const auto report = nlohmann::json::parse(slurp(dir / "lemma_report.json"));
  CHECK(report["schema"] == "fracblow/1");
  CHECK(report["command"] == "verify-lemma");
  const auto& c = report["constants"];
  for (const char* key : {"A_hat", "A", "C", "D"}) CHECK(c.contains(key));
  CHECK(c["B"]["value"].get<double>() == doctest::Approx(1.0 / M_PI));
  CHECK(c["W"]["value"].get<double>() == doctest::Approx(M_PI));
  CHECK(c["B"].contains("tolerance"));
  CHECK(report["A_hat_table"].size() == 1);
  CHECK(report["A_hat_table"][0]["A_hat"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report["B_by_dim"]["2"]["value"].get<double>() == doctest::Approx(0.5 / M_PI));
}

TEST_CASE("lemma suite: default config gives eight regime-selected verdicts") {
  const auto dir = fresh_dir("lemma_default");
  const auto res = run_lemma_suite(parse(""), dir);
  REQUIRE(res.verdicts.size() == 8);
  REQUIRE(res.gaussians.size() == 2);
  for (const auto& v : res.verdicts) {
    CAPTURE(v.dim);
    CAPTURE(v.q);
    CHECK(v.regime == select_regime(v.dim, v.q));
    CHECK(v.bound_satisfied);
    // (-Delta)^{1/2} <x>^{-1} = <x>^{-3} in the plane decays faster than <x>^{-2}
    if (v.dim == 2 && v.q == 1.0)
      CHECK_FALSE(v.exponent_matched);
    else
      CHECK(v.passed);
  }
  for (const auto& g : res.gaussians) CHECK(g.passed);
}

TEST_CASE("sweep: rows, determinism and crash isolation") {
  const auto config = parse(kSmallSweep);
  const auto bundle = resolve_constants(config);
  const auto dir_a = fresh_dir("sweep_a"), dir_b = fresh_dir("sweep_b");
  const auto a = run_sweep(make_sweep_plan(config, dir_a), bundle, config);
  REQUIRE(a.rows.size() == 2);
  for (const auto& r : a.rows) {
    CHECK(r.status == "blowup");
    CHECK(r.in_regime);
    CHECK(r.T_num <= r.T_R);
  }
  CHECK_FALSE(a.T_num_fit);
  CHECK(a.predicted == doctest::Approx(-4.0 / 3.0));
  run_sweep(make_sweep_plan(config, dir_b), bundle, config);
  CHECK(slurp(dir_a / "sweep.csv") == slurp(dir_b / "sweep.csv"));
  CHECK(slurp(dir_a / "rows" / "mu_0.csv") == slurp(dir_b / "rows" / "mu_0.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir_a / "sweep.json"));
  CHECK(manifest["schema"] == "fracblow/1");
  CHECK(manifest["constants"]["C"].get<double>() == doctest::Approx(bundle.constants.C));

  // a directory squatting on row 1's trajectory file makes that row fail
  const auto dir_c = fresh_dir("sweep_c");
  fs::create_directories(dir_c / "rows" / "mu_1.csv");
  const auto c = run_sweep(make_sweep_plan(config, dir_c), bundle, config);
  CHECK(c.rows[0].status == "blowup");
  CHECK(c.rows[1].status == "failed");
  CHECK_FALSE(c.warnings.empty());
  CHECK(slurp(dir_c / "rows" / "mu_0.csv") == slurp(dir_a / "rows" / "mu_0.csv"));
  CHECK(slurp(dir_c / "sweep.csv").find(",failed\n") != std::string::npos);
}

TEST_CASE("sweep: parallel workers give the same rows") {
  auto config = parse(kSmallSweep);
  config.sweep.trajectories = false;
  const auto bundle = resolve_constants(config);
  const auto serial = run_sweep(make_sweep_plan(config, fresh_dir("sweep_serial")), bundle, config);
  config.sweep.workers = 2;
  const auto dir = fresh_dir("sweep_parallel");
  const auto parallel = run_sweep(make_sweep_plan(config, dir), bundle, config);
  CHECK(sweep_csv(serial.rows) == sweep_csv(parallel.rows));
  CHECK_FALSE(fs::exists(dir / "rows"));
}

TEST_CASE("sweep: a numerically failing row is reported, not thrown") {
  auto config = parse(kSmallSweep);
  config.evolution.tail_limit = 1e-300;
  const auto bundle = resolve_constants(config);
  const auto plan = make_sweep_plan(config, fresh_dir("sweep_fail"));
  const auto o = run_sweep_row(plan, bundle.constants, 40.0);
  CHECK(o.row.status == "failed");
  CHECK(o.row.error.find("spectral tail") != std::string::npos);
}

TEST_CASE("frac-apply on a coarse lattice") {
  auto config = parse("[grid]\nhalf_width = 1000\npoints = 65536\n[frac]\ncount = 10\nr_max = 3\n");
  const auto dir = fresh_dir("frac");
  const auto rows = run_frac_apply(config, dir);
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) {
    CHECK(r.r > 0.0);
    CHECK(r.r <= 3.0);
    CHECK(std::abs(r.pv - r.exact) < 1e-8);
    CHECK(std::abs(r.spectral - r.exact) < 1e-4);
  }
  CHECK(std::isnan(frac_closed_form("gaussian", 1, 0.5)));
  CHECK(frac_closed_form("bracket1", 2, 0.0) == 1.0);
}
