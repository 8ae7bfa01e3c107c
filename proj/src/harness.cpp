#include "fracblow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fracblow {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kBTolerance = 1e-10;
constexpr double kWTolerance = 1e-12;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string q_label(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", q);
  return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json fit_json(const DecayFitResult& f) {
  return {{"model", f.model == FitModel::plain ? "plain" : "logarithmic"},
          {"exponent", f.exponent},
          {"log_coefficient", f.log_coefficient},
          {"log_intercept", f.log_intercept},
          {"A_hat", f.A_hat},
          {"residual", f.residual},
          {"residual_ratio", f.residual_ratio},
          {"r_min", f.r_min},
          {"r_max", f.r_max},
          {"samples", f.samples}};
}

json power_fit_json(const std::optional<PowerLawFit>& f) {
  if (!f) return nullptr;
  return {{"exponent", f->exponent}, {"intercept", f->intercept}, {"residual", f->residual}};
}

std::string samples_csv(const std::vector<DecaySample>& samples, const std::string& bound_case) {
  std::ostringstream os;
  write_samples_csv(os, samples, bound_case);
  return os.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

RadialProfile frac_profile(const std::string& name) {
  if (name == "lorentzian") return WeightProfile(2.0, 1.0).profile();
  if (name == "bracket1") return WeightProfile(1.0, 1.0).profile();
  if (name == "bracket3") return WeightProfile(3.0, 1.0).profile();
  if (name == "gaussian") return gaussian_profile();
  throw std::invalid_argument("unknown profile " + name);
}

bool in_fit_regime(const SweepPlan& plan, double R) {
  return plan.data.kind == DataKind::inner_singular ? R < plan.policy.inner_regime : R > plan.policy.outer_regime;
}

}  // namespace

LemmaOptions lemma_options(const RunConfig& config) {
  LemmaOptions o;
  o.window = {config.lemma.window_min, config.lemma.window_max};
  o.window_samples = config.lemma.window_samples;
  o.quadrature = config.quadrature;
  return o;
}

ConstantsBundle resolve_constants(const RunConfig& config, double A_hat) {
  if (!(A_hat > 0.0) || !std::isfinite(A_hat)) throw NumericalFailure("measured A_hat is not a positive number");
  ConstantsBundle b;
  b.B = normalization_constant(config.problem.dim, kBTolerance);
  b.B_tolerance = kBTolerance;
  b.A_hat = A_hat;
  b.A_factor = config.A > 0.0 ? 0.0 : config.A_factor;
  b.A = config.A > 0.0 ? config.A : config.A_factor * A_hat;
  b.constants = compute_constants(config.problem, b.A, kWTolerance);
  b.W_tolerance = kWTolerance;
  return b;
}

ConstantsBundle resolve_constants(const RunConfig& config) {
  const int n = config.problem.dim;
  const auto verdict = verify_lemma(n, n + 1.0, lemma_options(config));
  return resolve_constants(config, verdict.fit.A_hat);
}

json to_json(const ConstantsBundle& b) {
  const auto& c = b.constants;
  return {{"dim", c.dim},
          {"p", c.p},
          {"p_conj", c.p_conj},
          {"B", {{"value", b.B.value}, {"error", b.B.error}, {"tolerance", b.B_tolerance}}},
          {"A_hat", b.A_hat},
          {"A", b.A},
          {"A_factor", b.A_factor},
          {"W", {{"value", c.W}, {"error", c.W_error}, {"tolerance", b.W_tolerance}}},
          {"omega", c.omega},
          {"C", c.C},
          {"D", c.D},
          {"re_alpha_lambda", c.re_alpha_lambda},
          {"abs_alpha", c.abs_alpha}};
}

json to_json(const RunConfig& c) {
  const auto& q = c.quadrature;
  const auto& e = c.evolution;
  const auto& s = c.sweep;
  return {
      {"source", c.source},
      {"problem",
       {{"dim", c.problem.dim},
        {"p", c.problem.p},
        {"lambda", complex_json(c.problem.lambda)},
        {"alpha", complex_json(c.problem.alpha)},
        {"A", c.A},
        {"A_factor", c.A_factor}}},
      {"grid", {{"half_width", c.grid.half_width}, {"points", c.grid.points}}},
      {"quadrature",
       {{"inner_radius", q.inner_radius},
        {"growth", q.growth},
        {"far_cutoff", q.far_cutoff},
        {"nodes", q.nodes},
        {"tolerance", q.tolerance},
        {"rel_tolerance", q.rel_tolerance},
        {"max_depth", q.max_depth}}},
      {"lemma",
       {{"q_dim1", c.lemma.q_dim1},
        {"q_dim2", c.lemma.q_dim2},
        {"window_min", c.lemma.window_min},
        {"window_max", c.lemma.window_max},
        {"window_samples", c.lemma.window_samples},
        {"gaussian", c.lemma.gaussian}}},
      {"frac", {{"profile", c.frac.profile}, {"r_max", c.frac.r_max}, {"count", c.frac.count}}},
      {"evolution",
       {{"dt", e.dt},
        {"t_max", e.t_max},
        {"threshold", e.threshold},
        {"max_halvings", e.max_halvings},
        {"step_control", e.step_control},
        {"tail_limit", e.tail_limit},
        {"record_stride", e.record_stride}}},
      {"data", {{"kind", to_string(c.data.kind)}, {"mu", c.data.mu}, {"k", c.data.k}, {"edge_width", c.data.edge_width}}},
      {"sweep",
       {{"mu", sweep_mu_values(s)},
        {"workers", s.workers},
        {"cells_per_radius", s.cells_per_radius},
        {"spacing", s.spacing},
        {"min_half_width", s.min_half_width},
        {"radius_margin", s.radius_margin},
        {"dt_factor", s.dt_factor},
        {"threshold_factor", s.threshold_factor},
        {"horizon_factor", s.horizon_factor},
        {"inner_regime", s.inner_regime},
        {"outer_regime", s.outer_regime},
        {"trajectories", s.trajectories}}},
  };
}

json manifest(const std::string& command, const RunConfig& config, const ConstantsBundle& bundle) {
  return {{"schema", kSchema}, {"command", command}, {"config", to_json(config)}, {"constants", to_json(bundle)}};
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

LemmaSuiteResult run_lemma_suite(const RunConfig& config, const fs::path& out) {
  LemmaSuiteResult res;
  const auto options = lemma_options(config);
  const std::vector<std::pair<int, const std::vector<double>*>> lists{{1, &config.lemma.q_dim1},
                                                                        {2, &config.lemma.q_dim2}};
  if (config.lemma.q_dim1.empty() && config.lemma.q_dim2.empty()) {
    res.warnings.push_back("empty q lists: nothing to verify");
    return res;
  }
  for (auto [dim, qs] : lists) {
    if (qs->empty()) {
      res.warnings.push_back("empty q list for n = " + std::to_string(dim));
      continue;
    }
    for (double q : *qs) res.verdicts.push_back(verify_lemma(dim, q, options));
    if (config.lemma.gaussian) res.gaussians.push_back(verify_gaussian_remark(dim, options));
  }

  const int n = config.problem.dim;
  double A_hat = 0.0;
  for (const auto& v : res.verdicts)
    if (v.dim == n && v.q == n + 1.0) A_hat = v.fit.A_hat;
  const ConstantsBundle bundle = A_hat > 0.0 ? resolve_constants(config, A_hat) : resolve_constants(config);

  json report = manifest("verify-lemma", config, bundle);
  json verdicts = json::array(), table = json::array(), gaussians = json::array(), B = json::object();
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& v : res.verdicts) {
    const std::string name = "lemma_n" + std::to_string(v.dim) + "_q" + q_label(v.q) + ".csv";
    files.emplace_back(name, samples_csv(v.samples, to_string(v.regime)));
    verdicts.push_back({{"dim", v.dim},
                        {"q", v.q},
                        {"regime", to_string(v.regime)},
                        {"predicted_exponent", v.predicted},
                        {"tolerance", v.tolerance},
                        {"fit", fit_json(v.fit)},
                        {"plain_fit", fit_json(v.plain_fit)},
                        {"exponent_matched", v.exponent_matched},
                        {"bound_satisfied", v.bound_satisfied},
                        {"log_model_confirmed", v.log_model_confirmed},
                        {"negativity_checked", v.negativity_checked},
                        {"negative_tail", v.negative_tail},
                        {"r_neg", v.r_neg},
                        {"passed", v.passed},
                        {"diagnostics", v.diagnostics},
                        {"samples_file", name}});
    table.push_back({{"dim", v.dim}, {"q", v.q}, {"A_hat", v.fit.A_hat}});
  }
  for (const auto& g : res.gaussians) {
    const std::string name = "gaussian_n" + std::to_string(g.dim) + ".csv";
    files.emplace_back(name, samples_csv(g.samples, "gaussian"));
    gaussians.push_back({{"dim", g.dim},
                         {"value_at_origin", g.value_at_origin},
                         {"fit", fit_json(g.fit)},
                         {"C_hat", g.C_hat},
                         {"r_neg", g.r_neg},
                         {"negative_tail", g.negative_tail},
                         {"exponent_matched", g.exponent_matched},
                         {"passed", g.passed},
                         {"diagnostics", g.diagnostics},
                         {"samples_file", name}});
  }
  for (int dim : {1, 2}) {
    const auto b = normalization_constant(dim, kBTolerance);
    B[std::to_string(dim)] = {{"value", b.value}, {"error", b.error}, {"tolerance", kBTolerance}};
  }
  report["verdicts"] = verdicts;
  report["A_hat_table"] = table;
  report["gaussian"] = gaussians;
  report["B_by_dim"] = B;
  report["warnings"] = res.warnings;

  ensure_dir(out);
  for (const auto& [name, text] : files) {
    write_file_atomic(out / name, text);
    res.files.push_back(out / name);
  }
  write_file_atomic(out / "lemma_report.json", report.dump(2) + "\n");
  res.files.push_back(out / "lemma_report.json");
  return res;
}

LemmaSuiteResult run_lemma_suite(const fs::path& config_file, const fs::path& out) {
  return run_lemma_suite(load_config(config_file), out);
}

void SweepPlan::validate() const {
  params.validate();
  if (mu.empty()) throw std::invalid_argument("sweep plan: no mu values");
  for (double m : mu)
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("sweep plan: mu values must be positive");
  auto sorted = mu;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("sweep plan: repeated mu value");
  if (data.kind == DataKind::integrable) throw std::invalid_argument("sweep plan: integrable data have no radius formula");
  data.validate(params.dim, params.p);
}

SweepPlan make_sweep_plan(const RunConfig& config, const fs::path& out) {
  SweepPlan plan;
  plan.params = config.problem;
  plan.data = config.data;
  plan.mu = sweep_mu_values(config.sweep);
  plan.policy = config.sweep;
  plan.evolution = config.evolution;
  plan.out = out;
  plan.validate();
  return plan;
}

SweepRunSetup prepare_sweep_run(const SweepPlan& plan, const BlowupConstants& constants, double mu) {
  InitialDataSpec spec = plan.data;
  spec.mu = mu;
  const double R = corollary_R(spec, constants);
  const auto& pol = plan.policy;
  GridSpec grid;
  grid.dim = plan.params.dim;
  double dx = pol.spacing, L = pol.min_half_width;
  if (spec.kind == DataKind::inner_singular)
    dx = std::min(R / pol.cells_per_radius, pol.spacing);
  else
    L = std::max(L, pol.radius_margin * R);
  grid.half_width = L;
  grid.points = 2 * static_cast<std::size_t>(std::ceil(L / dx));
  grid.validate();

  SweepRunSetup s;
  s.u0 = make_initial_data(spec, grid, plan.params.alpha, plan.params.p);
  s.report = corollary_radius(spec, constants, plan.params, s.u0);
  s.weight = WeightProfile(plan.params.dim + 1.0, R);
  const double sup0 = s.u0.sup_norm();
  auto& e = s.evolution;
  e.grid = grid;
  e.step_control = plan.evolution.step_control;
  e.max_halvings = plan.evolution.max_halvings;
  e.tail_limit = plan.evolution.tail_limit;
  e.record_stride = plan.evolution.record_stride;
  const double lam = std::abs(plan.params.lambda);
  e.dt = lam > 0.0 ? pol.dt_factor * e.step_control / (lam * std::pow(sup0, plan.params.p - 1.0)) : plan.evolution.dt;
  e.threshold = pol.threshold_factor * sup0;
  const double T_R = s.report.at_radius.T_bound;
  e.t_max = std::isfinite(T_R) ? pol.horizon_factor * T_R : plan.evolution.t_max;
  return s;
}

SweepRunOutcome run_sweep_row(const SweepPlan& plan, const BlowupConstants& constants, double mu) {
  SweepRunOutcome o;
  auto& row = o.row;
  row.mu = mu;
  row.T_num = std::numeric_limits<double>::quiet_NaN();
  try {
    const auto s = prepare_sweep_run(plan, constants, mu);
    const auto& rep = s.report;
    row.R_star = rep.R_star;
    row.I = rep.I;
    row.T_formula = rep.T_formula;
    row.T_R = rep.at_radius.T_bound;
    row.M0 = rep.at_radius.M0;
    row.threshold = rep.at_radius.threshold;
    row.gate = rep.gate;
    row.in_regime = in_fit_regime(plan, rep.R_star);
    row.half_width = s.evolution.grid.half_width;
    row.points = s.evolution.grid.points;
    row.dt = s.evolution.dt;
    row.sup0 = s.u0.sup_norm();
    o.trajectory = evolve(s.u0, plan.params, s.evolution, s.weight);
    row.blew_up = o.trajectory.blew_up;
    row.T_num = o.trajectory.T_num;
    row.stop_reason = o.trajectory.stop_reason;
    row.status = row.blew_up ? "blowup" : "no-blowup";
  } catch (const std::exception& e) {
    row.status = "failed";
    row.error = e.what();
  }
  return o;
}

void fit_sweep(SweepResult& result, const SweepPlan& plan) {
  result.T_num_fit.reset();
  result.T_formula_fit.reset();
  if (result.rows.size() == 1) {
    result.warnings.push_back("sweep of length 1: rows only, no fit");
    return;
  }
  std::vector<std::pair<double, double>> num, formula;
  for (const auto& r : result.rows) {
    if (r.status == "failed" || !r.in_regime) continue;
    if (std::isfinite(r.T_formula) && r.T_formula > 0.0) formula.emplace_back(r.mu, r.T_formula);
    if (r.status == "blowup" && r.T_num > 0.0) num.emplace_back(r.mu, r.T_num);
  }
  auto fit = [&](const std::vector<std::pair<double, double>>& pairs, const char* what) -> std::optional<PowerLawFit> {
    if (pairs.size() < 4) {
      result.warnings.push_back(std::string(what) + ": fewer than 4 in-regime rows, no fit");
      return std::nullopt;
    }
    const auto [lo, hi] = std::minmax_element(pairs.begin(), pairs.end());
    if (hi->first < 10.0 * lo->first * (1.0 - 1e-12))
      result.warnings.push_back(std::string(what) + ": in-regime rows span less than one decade of mu");
    return fit_power_law(pairs);
  };
  result.T_num_fit = fit(num, "T_num");
  result.T_formula_fit = fit(formula, "T_formula");
  (void)plan;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "mu,R_star,I,T_formula,T_R,M0,threshold,gate,in_regime,half_width,points,dt,sup0,T_num,blew_up,stop_reason,"
        "status\n";
  for (const auto& r : rows) {
    os << num(r.mu) << ',' << num(r.R_star) << ',' << num(r.I) << ',' << num(r.T_formula) << ',' << num(r.T_R) << ','
       << num(r.M0) << ',' << num(r.threshold) << ',' << (r.gate ? 1 : 0) << ',' << (r.in_regime ? 1 : 0) << ','
       << num(r.half_width) << ',' << r.points << ',' << num(r.dt) << ',' << num(r.sup0) << ',' << num(r.T_num)
       << ',' << (r.blew_up ? 1 : 0) << ',' << r.stop_reason << ',' << r.status << '\n';
  }
  return os.str();
}

SweepResult run_sweep(const SweepPlan& plan, const ConstantsBundle& bundle, const RunConfig& config) {
  plan.validate();
  SweepResult result;
  InitialDataSpec probe = plan.data;
  result.predicted = corollary_exponent(probe, plan.params.dim, plan.params.p);
  result.rows.resize(plan.mu.size());
  ensure_dir(plan.out);
  if (plan.policy.trajectories) ensure_dir(plan.out / "rows");

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.mu.size(); i = next++) {
      auto outcome = run_sweep_row(plan, bundle.constants, plan.mu[i]);
      if (plan.policy.trajectories && outcome.row.status != "failed") {
        try {
          std::ostringstream os;
          write_trajectory_csv(os, outcome.trajectory);
          write_file_atomic(plan.out / "rows" / ("mu_" + std::to_string(i) + ".csv"), os.str());
        } catch (const std::exception& e) {
          outcome.row.status = "failed";
          outcome.row.error = e.what();
        }
      }
      result.rows[i] = std::move(outcome.row);
    }
  };
  const std::size_t workers = std::min(plan.policy.workers, plan.mu.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < result.rows.size(); ++i)
    if (result.rows[i].status == "failed")
      result.warnings.push_back("row " + std::to_string(i) + " (mu = " + num(plan.mu[i]) + ") failed: " + result.rows[i].error);
  fit_sweep(result, plan);

  json m = manifest("sweep", config, bundle);
  json rows = json::array();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    rows.push_back({{"mu", r.mu},
                    {"R_star", r.R_star},
                    {"T_formula", r.T_formula},
                    {"T_R", r.T_R},
                    {"T_num", r.T_num},
                    {"gate", r.gate},
                    {"in_regime", r.in_regime},
                    {"status", r.status},
                    {"error", r.error},
                    {"trajectory", plan.policy.trajectories && r.status != "failed"
                                       ? json("rows/mu_" + std::to_string(i) + ".csv")
                                       : json(nullptr)}});
  }
  m["kind"] = to_string(plan.data.kind);
  m["k"] = plan.data.k;
  m["predicted_exponent"] = result.predicted;
  m["T_num_fit"] = power_fit_json(result.T_num_fit);
  m["T_formula_fit"] = power_fit_json(result.T_formula_fit);
  m["rows"] = rows;
  m["warnings"] = result.warnings;
  m["files"] = {"sweep.csv"};
  write_file_atomic(plan.out / "sweep.csv", sweep_csv(result.rows));
  write_file_atomic(plan.out / "sweep.json", m.dump(2) + "\n");
  return result;
}

json run_constants(const RunConfig& config, const fs::path& out) {
  const auto bundle = resolve_constants(config);
  json m = manifest("constants", config, bundle);
  m["threshold_at_R1"] = bundle.constants.threshold(1.0);
  ensure_dir(out);
  write_file_atomic(out / "constants.json", m.dump(2) + "\n");
  return m;
}

double frac_closed_form(const std::string& profile, int dim, double r) {
  const double s = 1.0 + r * r;
  if (profile == "lorentzian" && dim == 1) return (1.0 - r * r) / (s * s);
  if (profile == "bracket1" && dim == 2) return std::pow(s, -1.5);
  if (profile == "bracket3" && dim == 2) return (2.0 - r * r) * std::pow(s, -2.5);
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<FracApplyRow> run_frac_apply(const RunConfig& config, const fs::path& out) {
  const auto bundle = resolve_constants(config);
  const auto profile = frac_profile(config.frac.profile);
  const GridSpec& grid = config.grid;
  const int n = grid.dim;
  const Field f = Field::sample(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return Complex(profile.value_sq(r2), 0.0);
  });
  const Field image = frac_laplacian_spectral(f);

  // lattice indices on the first axis (other coordinates zero) in (0, r_max]
  std::vector<std::size_t> axis;
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.coordinate(i);
    if (x > 0.0 && x <= config.frac.r_max) axis.push_back(i);
  }
  if (axis.empty()) throw std::invalid_argument("frac-apply: no lattice points in (0, r_max]");
  const std::size_t count = std::min(config.frac.count, axis.size());
  const std::size_t zero = grid.points / 2;
  std::vector<FracApplyRow> rows;
  double pv_dev = 0.0, spec_dev = 0.0, cross = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t i = axis[count == 1 ? axis.size() - 1 : j * (axis.size() - 1) / (count - 1)];
    FracApplyRow row;
    row.r = grid.coordinate(i);
    const auto est = frac_laplacian_pv(profile, n, row.r, bundle.B.value, config.quadrature);
    row.pv = est.value;
    row.pv_error = est.error;
    row.spectral = image[n == 1 ? i : zero * grid.points + i].real();
    row.exact = frac_closed_form(config.frac.profile, n, row.r);
    cross = std::max(cross, std::abs(row.pv - row.spectral));
    if (std::isfinite(row.exact)) {
      pv_dev = std::max(pv_dev, std::abs(row.pv - row.exact));
      spec_dev = std::max(spec_dev, std::abs(row.spectral - row.exact));
    }
    rows.push_back(row);
  }

  std::ostringstream os;
  os << "r,pv,pv_error,spectral,exact\n";
  for (const auto& r : rows)
    os << num(r.r) << ',' << num(r.pv) << ',' << num(r.pv_error) << ',' << num(r.spectral) << ','
       << (std::isfinite(r.exact) ? num(r.exact) : std::string()) << '\n';
  json m = manifest("frac-apply", config, bundle);
  const bool closed = std::isfinite(frac_closed_form(config.frac.profile, n, 1.0));
  m["max_abs_pv_minus_spectral"] = cross;
  m["max_abs_pv_minus_exact"] = closed ? json(pv_dev) : json(nullptr);
  m["max_abs_spectral_minus_exact"] = closed ? json(spec_dev) : json(nullptr);
  m["boundary_negligible"] = boundary_negligible(image, 1e-6);
  m["files"] = {"frac_apply.csv"};
  ensure_dir(out);
  write_file_atomic(out / "frac_apply.csv", os.str());
  write_file_atomic(out / "frac_apply.json", m.dump(2) + "\n");
  return rows;
}

TrajectoryRecord run_evolve(const RunConfig& config, const fs::path& out) {
  const auto bundle = resolve_constants(config);
  const auto& c = bundle.constants;
  EvolutionConfig ec;
  ec.grid = config.grid;
  ec.dt = config.evolution.dt;
  ec.t_max = config.evolution.t_max;
  ec.threshold = config.evolution.threshold;
  ec.max_halvings = config.evolution.max_halvings;
  ec.step_control = config.evolution.step_control;
  ec.tail_limit = config.evolution.tail_limit;
  ec.record_stride = config.evolution.record_stride;

  const Field u0 = make_initial_data(config.data, config.grid, config.problem.alpha, config.problem.p);
  json verdict;
  double R = 1.0;
  if (config.data.kind != DataKind::integrable) {
    const auto rep = corollary_radius(config.data, c, config.problem, u0);
    R = rep.R_star;
    verdict["corollary"] = {{"R_star", rep.R_star}, {"I", rep.I},           {"exponent", rep.exponent},
                            {"T_formula", rep.T_formula}, {"in_regime", rep.in_regime}, {"gate", rep.gate},
                            {"conclusive", rep.conclusive}, {"note", rep.note}};
  }
  const WeightProfile weight(c.dim + 1.0, R);
  const auto bound = lifespan_bound(M_R(u0, config.problem.alpha, weight), c, R);
  const auto rec = evolve(u0, config.problem, ec, weight);

  verdict["R"] = R;
  verdict["M0"] = bound.M0;
  verdict["threshold"] = bound.threshold;
  verdict["condition_holds"] = bound.condition_holds;
  verdict["T_bound"] = bound.T_bound;
  verdict["blew_up"] = rec.blew_up;
  verdict["T_num"] = rec.T_num;
  verdict["stop_reason"] = rec.stop_reason;
  verdict["steps"] = rec.steps;
  verdict["halvings"] = rec.halvings;
  verdict["final_dt"] = rec.final_dt;
  verdict["initial_tail"] = rec.initial_tail;
  json m = manifest("evolve", config, bundle);
  m["verdict"] = verdict;
  m["files"] = {"trajectory.csv"};
  std::ostringstream os;
  write_trajectory_csv(os, rec);
  ensure_dir(out);
  write_file_atomic(out / "trajectory.csv", os.str());
  write_file_atomic(out / "evolve.json", m.dump(2) + "\n");
  return rec;
}

}  // namespace fracblow
