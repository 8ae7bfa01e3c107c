#include "fracblow/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fracblow/lemma_verifier.hpp"

namespace fracblow {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// "section.key" -> line, for diagnostics; the ptree does not keep positions.
std::map<std::string, int> key_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string line, section;
  for (int n = 1; std::getline(in, line); ++n) {
    line = trim(line);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line.front() == '[') {
      section = trim(line.substr(1, line.find(']') - 1));
      lines.emplace(section, n);
    } else if (const auto eq = line.find('='); eq != std::string::npos) {
      lines.emplace(section + "." + trim(line.substr(0, eq)), n);
    }
  }
  return lines;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::string source, std::map<std::string, int> lines)
      : tree_(tree), source_(std::move(source)), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    std::ostringstream os;
    os << source_;
    if (auto it = lines_.find(field); it != lines_.end()) os << ":" << it->second;
    os << ": " << field << ": " << message;
    throw ConfigError(os.str());
  }

  void check_known(const std::map<std::string, std::set<std::string>>& schema) const {
    for (const auto& [section, body] : tree_) {
      auto it = schema.find(section);
      if (it == schema.end()) fail(section, "unknown section");
      if (!body.data().empty() && body.empty()) fail(section, "key outside of a section");
      for (const auto& [key, value] : body)
        if (!it->second.contains(key)) fail(section + "." + key, "unknown key");
    }
  }

  std::optional<std::string> raw(const std::string& field) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(field, '.'))) return trim(*v);
    return std::nullopt;
  }

  double parse_number(const std::string& field, const std::string& text) const {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(field, "expected a number, got '" + text + "'");
    if (!std::isfinite(v)) fail(field, "value must be finite");
    return v;
  }

  void number(const std::string& field, double& out) const {
    if (auto v = raw(field)) out = parse_number(field, *v);
  }

  template <class Int>
  void integer(const std::string& field, Int& out) const {
    if (auto v = raw(field)) {
      long long x = 0;
      const char* end = v->data() + v->size();
      auto [ptr, ec] = std::from_chars(v->data(), end, x);
      if (ec != std::errc() || ptr != end) fail(field, "expected an integer, got '" + *v + "'");
      if (std::is_unsigned_v<Int> && x < 0) fail(field, "must not be negative");
      out = static_cast<Int>(x);
    }
  }

  void flag(const std::string& field, bool& out) const {
    if (auto v = raw(field)) {
      if (*v == "true" || *v == "1" || *v == "yes") out = true;
      else if (*v == "false" || *v == "0" || *v == "no") out = false;
      else fail(field, "expected true or false, got '" + *v + "'");
    }
  }

  void text(const std::string& field, std::string& out) const {
    if (auto v = raw(field)) out = *v;
  }

  std::vector<double> list_items(const std::string& field, const std::string& text) const {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(field, "empty list item");
      out.push_back(parse_number(field, item));
    }
    return out;
  }

  void list(const std::string& field, std::vector<double>& out) const {
    if (auto v = raw(field)) out = v->empty() ? std::vector<double>{} : list_items(field, *v);
  }

  void complex(const std::string& field, Complex& out) const {
    if (auto v = raw(field)) {
      const auto parts = list_items(field, *v);
      if (parts.size() != 2) fail(field, "expected 're, im'");
      out = Complex(parts[0], parts[1]);
    }
  }

  template <class Fn>
  void guard(const std::string& field, Fn&& fn) const {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      fail(field, e.what());
    } catch (const std::domain_error& e) {
      fail(field, e.what());
    }
  }

 private:
  const pt::ptree& tree_;
  std::string source_;
  std::map<std::string, int> lines_;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"problem", {"dim", "p", "lambda", "alpha", "A", "A_factor"}},
      {"grid", {"half_width", "points"}},
      {"quadrature", {"inner_radius", "growth", "far_cutoff", "nodes", "tolerance", "rel_tolerance", "max_depth"}},
      {"lemma", {"q_dim1", "q_dim2", "window_min", "window_max", "window_samples", "gaussian"}},
      {"frac", {"profile", "r_max", "count"}},
      {"evolution",
       {"dt", "t_max", "threshold", "max_halvings", "step_control", "tail_limit", "record_stride"}},
      {"data", {"kind", "mu", "k", "edge_width"}},
      {"sweep",
       {"mu", "mu_min", "mu_max", "count", "workers", "cells_per_radius", "spacing", "min_half_width",
        "radius_margin", "dt_factor", "threshold_factor", "horizon_factor", "inner_regime", "outer_regime",
        "trajectories"}},
  };
  return s;
}

void positive(const Reader& r, const std::string& field, double v) {
  if (!(v > 0.0)) r.fail(field, "must be positive");
}

}  // namespace

std::vector<double> sweep_mu_values(const SweepSection& sweep) {
  if (!sweep.mu.empty()) return sweep.mu;
  if (sweep.count == 1) return {sweep.mu_min};
  return log_spaced(sweep.mu_min, sweep.mu_max, sweep.count);
}

RunConfig parse_config(std::istream& in, const std::string& source_name) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  pt::ptree tree;
  try {
    std::istringstream body(text);
    pt::read_ini(body, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source_name + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  const Reader r(tree, source_name, key_lines(text));
  r.check_known(schema());

  RunConfig c;
  c.source = source_name;
  r.integer("problem.dim", c.problem.dim);
  r.number("problem.p", c.problem.p);
  r.complex("problem.lambda", c.problem.lambda);
  r.complex("problem.alpha", c.problem.alpha);
  r.number("problem.A", c.A);
  r.number("problem.A_factor", c.A_factor);
  r.guard("problem", [&] { c.problem.validate(); });
  if (c.A < 0.0) r.fail("problem.A", "must not be negative");
  positive(r, "problem.A_factor", c.A_factor);

  c.grid.dim = c.problem.dim;
  r.number("grid.half_width", c.grid.half_width);
  r.integer("grid.points", c.grid.points);
  r.guard("grid", [&] { c.grid.validate(); });

  auto& q = c.quadrature;
  r.number("quadrature.inner_radius", q.inner_radius);
  r.number("quadrature.growth", q.growth);
  r.number("quadrature.far_cutoff", q.far_cutoff);
  r.integer("quadrature.nodes", q.nodes);
  r.number("quadrature.tolerance", q.tolerance);
  r.number("quadrature.rel_tolerance", q.rel_tolerance);
  r.integer("quadrature.max_depth", q.max_depth);
  r.guard("quadrature", [&] { q.validate(); });

  auto& l = c.lemma;
  r.list("lemma.q_dim1", l.q_dim1);
  r.list("lemma.q_dim2", l.q_dim2);
  r.number("lemma.window_min", l.window_min);
  r.number("lemma.window_max", l.window_max);
  r.integer("lemma.window_samples", l.window_samples);
  r.flag("lemma.gaussian", l.gaussian);
  for (double v : l.q_dim1)
    if (!(v > 0.0)) r.fail("lemma.q_dim1", "q values must be positive");
  for (double v : l.q_dim2)
    if (!(v > 0.0)) r.fail("lemma.q_dim2", "q values must be positive");
  positive(r, "lemma.window_min", l.window_min);
  if (!(l.window_max >= 100.0 * l.window_min)) r.fail("lemma.window_max", "window must span at least two decades");
  if (l.window_samples < 8) r.fail("lemma.window_samples", "at least 8 samples are needed");

  r.text("frac.profile", c.frac.profile);
  r.number("frac.r_max", c.frac.r_max);
  r.integer("frac.count", c.frac.count);
  static const std::set<std::string> profiles{"lorentzian", "bracket1", "bracket3", "gaussian"};
  if (!profiles.contains(c.frac.profile)) r.fail("frac.profile", "unknown profile '" + c.frac.profile + "'");
  positive(r, "frac.r_max", c.frac.r_max);
  if (c.frac.count == 0) r.fail("frac.count", "must be positive");

  auto& e = c.evolution;
  r.number("evolution.dt", e.dt);
  r.number("evolution.t_max", e.t_max);
  r.number("evolution.threshold", e.threshold);
  r.integer("evolution.max_halvings", e.max_halvings);
  r.number("evolution.step_control", e.step_control);
  r.number("evolution.tail_limit", e.tail_limit);
  r.integer("evolution.record_stride", e.record_stride);
  r.guard("evolution", [&] {
    EvolutionConfig probe;
    probe.grid = c.grid;
    probe.dt = e.dt;
    probe.t_max = e.t_max;
    probe.threshold = e.threshold;
    probe.max_halvings = e.max_halvings;
    probe.step_control = e.step_control;
    probe.tail_limit = e.tail_limit;
    probe.record_stride = e.record_stride;
    probe.validate();
  });

  std::string kind = to_string(c.data.kind);
  r.text("data.kind", kind);
  r.guard("data.kind", [&] { c.data.kind = data_kind_from_string(kind); });
  r.number("data.mu", c.data.mu);
  r.number("data.k", c.data.k);
  r.number("data.edge_width", c.data.edge_width);
  r.guard("data", [&] { c.data.validate(c.problem.dim, c.problem.p); });

  auto& s = c.sweep;
  r.list("sweep.mu", s.mu);
  r.number("sweep.mu_min", s.mu_min);
  r.number("sweep.mu_max", s.mu_max);
  r.integer("sweep.count", s.count);
  r.integer("sweep.workers", s.workers);
  r.number("sweep.cells_per_radius", s.cells_per_radius);
  r.number("sweep.spacing", s.spacing);
  r.number("sweep.min_half_width", s.min_half_width);
  r.number("sweep.radius_margin", s.radius_margin);
  r.number("sweep.dt_factor", s.dt_factor);
  r.number("sweep.threshold_factor", s.threshold_factor);
  r.number("sweep.horizon_factor", s.horizon_factor);
  r.number("sweep.inner_regime", s.inner_regime);
  r.number("sweep.outer_regime", s.outer_regime);
  r.flag("sweep.trajectories", s.trajectories);
  for (double v : s.mu)
    if (!(v > 0.0)) r.fail("sweep.mu", "mu values must be positive");
  positive(r, "sweep.mu_min", s.mu_min);
  if (s.count == 0) r.fail("sweep.count", "must be positive");
  if (s.count > 1 && !(s.mu_max > s.mu_min)) r.fail("sweep.mu_max", "must exceed mu_min");
  if (s.workers == 0) r.fail("sweep.workers", "must be positive");
  for (auto [name, v] : {std::pair{"cells_per_radius", s.cells_per_radius}, {"spacing", s.spacing},
                         {"min_half_width", s.min_half_width}, {"radius_margin", s.radius_margin},
                         {"dt_factor", s.dt_factor}, {"horizon_factor", s.horizon_factor},
                         {"inner_regime", s.inner_regime}, {"outer_regime", s.outer_regime}})
    positive(r, std::string("sweep.") + name, v);
  if (!(s.threshold_factor > 10.0)) r.fail("sweep.threshold_factor", "must exceed 10");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  return parse_config(in, path.string());
}

}  // namespace fracblow
