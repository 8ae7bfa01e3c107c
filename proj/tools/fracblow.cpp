#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "fracblow/harness.hpp"

namespace fs = std::filesystem;
using namespace fracblow;

namespace {

enum Exit { ok = 0, usage = 1, numerical = 2 };

struct Options {
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "sectioned config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory")->required();
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int constants(const Options& o) {
  const auto m = run_constants(load_config(o.config), o.out);
  const auto& c = m["constants"];
  std::cout << "B = " << c["B"]["value"].get<double>() << "  A_hat = " << c["A_hat"].get<double>()
            << "  A = " << c["A"].get<double>() << "\n"
            << "W = " << c["W"]["value"].get<double>() << "  C = " << c["C"].get<double>()
            << "  D = " << c["D"].get<double>() << "\n";
  return ok;
}

int frac_apply(const Options& o) {
  const auto rows = run_frac_apply(load_config(o.config), o.out);
  std::cout << rows.size() << " points written to " << (fs::path(o.out) / "frac_apply.csv").string() << "\n";
  return ok;
}

int verify_lemma(const Options& o) {
  const auto res = run_lemma_suite(fs::path(o.config), o.out);
  warn(res.warnings);
  for (const auto& v : res.verdicts)
    std::cout << "n=" << v.dim << " q=" << v.q << " [" << to_string(v.regime) << "] exponent " << v.fit.exponent
              << " (predicted " << v.predicted << ") A_hat " << v.fit.A_hat << (v.passed ? "  ok" : "  MISMATCH")
              << "\n";
  for (const auto& g : res.gaussians)
    std::cout << "gaussian n=" << g.dim << " exponent " << g.fit.exponent << " r_neg " << g.r_neg
              << (g.passed ? "  ok" : "  MISMATCH") << "\n";
  return ok;
}

int evolve_cmd(const Options& o) {
  const auto rec = run_evolve(load_config(o.config), o.out);
  std::cout << "stop: " << rec.stop_reason << "  steps " << rec.steps;
  if (rec.blew_up) std::cout << "  T_num " << rec.T_num;
  std::cout << "\n";
  return ok;
}

int sweep(const Options& o) {
  const auto config = load_config(o.config);
  const auto plan = make_sweep_plan(config, o.out);
  const auto bundle = resolve_constants(config);
  const auto res = run_sweep(plan, bundle, config);
  warn(res.warnings);
  for (const auto& r : res.rows)
    std::cout << "mu=" << r.mu << " R*=" << r.R_star << " T_R=" << r.T_R << " T_num=" << r.T_num << " " << r.status
              << (r.in_regime ? "" : " (out of regime)") << "\n";
  std::cout << "predicted exponent " << res.predicted;
  if (res.T_num_fit) std::cout << "  T_num fit " << res.T_num_fit->exponent;
  if (res.T_formula_fit) std::cout << "  T_formula fit " << res.T_formula_fit->exponent;
  std::cout << "\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracblow: half-Laplacian NLS blow-up experiments"};
  app.require_subcommand(1);
  Options o;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"constants", "normalization, lemma and lifespan constants", constants},
      {"frac-apply", "PV and spectral images of a radial profile", frac_apply},
      {"verify-lemma", "decay regimes of the half-Laplacian of <x>^{-q}", verify_lemma},
      {"evolve", "one split-step evolution", evolve_cmd},
      {"sweep", "lifespan against mu", sweep},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }
  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      return cmd->run(o);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return usage;
    } catch (const ConditionViolation& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return usage;
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid input: " << e.what() << "\n";
      return usage;
    } catch (const std::exception& e) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return numerical;
    }
  }
  return usage;
}
