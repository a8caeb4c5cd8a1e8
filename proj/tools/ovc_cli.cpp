#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ovc/cumulants.hpp"
#include "ovc/errors.hpp"
#include "ovc/ncpart.hpp"
#include "ovc/suites.hpp"
#include "ovc/winsert.hpp"

using json = nlohmann::json;
using namespace ovc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int base_dim = 2;
  int fiber_dim = 2;
  json variables;  // null means two seeded Hermitian variables a, b
  int max_order = 4;
  double tolerance = 1e-9;
  std::vector<std::string> suites;
  std::uint64_t seed = 1;
};

int indent = 2;

void emit(const json& j) { std::cout << j.dump(indent) << "\n"; }

int fail_usage(const std::string& kind, const std::string& message) {
  emit(json{{"error", {{"kind", kind}, {"message", message}}}});
  return 2;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : detail::split_on(s, ",")) {
    auto t = detail::trim_view(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

RunConfig load_config(const std::string& path) {
  RunConfig c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::vector<std::string> known{"base_dim", "fiber_dim", "variables", "max_order",
                                              "tolerance", "suites",   "seed"};
  try {
    for (const auto& [key, value] : j.items())
      if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key '" + key + "'");
    c.base_dim = j.value("base_dim", c.base_dim);
    c.fiber_dim = j.value("fiber_dim", c.fiber_dim);
    c.max_order = j.value("max_order", c.max_order);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.seed = j.value("seed", c.seed);
    if (j.contains("variables")) c.variables = j["variables"];
    if (j.contains("suites")) c.suites = j["suites"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return c;
}

Complex parse_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) return {e[0].get<double>(), e[1].get<double>()};
  throw UsageError("matrix entries must be numbers or [re, im] pairs");
}

Mat parse_matrix(const json& m, int n) {
  if (!m.is_array() || static_cast<int>(m.size()) != n) throw UsageError("matrix must have " + std::to_string(n) + " rows");
  Mat out(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = m[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw UsageError("matrix rows must have " + std::to_string(n) + " entries");
    for (int k = 0; k < n; ++k) out(i, k) = parse_entry(row[static_cast<std::size_t>(k)]);
  }
  return out;
}

struct Model {
  std::shared_ptr<const OVMatrixSpace> space;
  VariableTable names;
};

Model build_model(const RunConfig& c) {
  if (c.base_dim < 1 || c.fiber_dim < 1) throw UsageError("base_dim and fiber_dim must be positive");
  if (c.base_dim * c.fiber_dim > 16) throw UsageError("base_dim * fiber_dim must be at most 16");
  if (c.max_order < 1 || c.max_order > 8) throw UsageError("max_order must lie in 1..8");
  if (!(c.tolerance >= 1e-12)) throw UsageError("tolerance must be at least 1e-12");
  const int n = c.base_dim * c.fiber_dim;

  // variables: [{name, seed, hermitian} | {name, matrix}], or an object keyed by name
  std::vector<std::pair<std::string, json>> specs;
  if (c.variables.is_null()) {
    specs = {{"a", json{{"seed", c.seed * 7919ULL}}}, {"b", json{{"seed", c.seed * 7919ULL + 1}}}};
  } else if (c.variables.is_array()) {
    for (const auto& v : c.variables) {
      if (!v.is_object() || !v.contains("name") || !v["name"].is_string()) throw UsageError("each variable needs a name");
      specs.emplace_back(v["name"].get<std::string>(), v);
    }
  } else if (c.variables.is_object()) {
    for (const auto& [name, v] : c.variables.items()) specs.emplace_back(name, v);
  } else {
    throw UsageError("variables must be an array or an object");
  }
  if (specs.empty()) throw UsageError("at least one variable is required");

  std::vector<std::string> names;
  std::map<int, Mat> vars;
  for (const auto& [name, v] : specs) {
    if (name.empty() || name == "e" || name.find_first_of(".,;|[]# ") != std::string::npos)
      throw UsageError("invalid variable name '" + name + "'");
    if (std::find(names.begin(), names.end(), name) != names.end()) throw UsageError("duplicate variable '" + name + "'");
    const int index = static_cast<int>(names.size());
    names.push_back(name);
    if (v.contains("matrix")) {
      vars[index] = parse_matrix(v["matrix"], n);
    } else if (v.contains("seed")) {
      if (!v["seed"].is_number_unsigned()) throw UsageError("variable seed must be a non-negative integer");
      auto seed = v["seed"].get<std::uint64_t>();
      bool hermitian = v.value("hermitian", true);
      vars[index] = hermitian ? random_hermitian(n, seed) : random_matrix(n, n, seed);
    } else {
      throw UsageError("variable '" + name + "' needs either matrix or seed");
    }
  }
  Model m;
  m.space = std::make_shared<const OVMatrixSpace>(c.base_dim, c.fiber_dim, std::move(vars));
  m.names = VariableTable(names);
  return m;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json check_json(const CheckResult& r) {
  json j{{"name", r.name}, {"property", r.property}, {"exact", r.exact}, {"pass", r.pass}, {"cases", r.cases}};
  if (!r.exact) {
    j["max_abs_deviation"] = r.dev.abs;
    j["max_rel_deviation"] = r.dev.rel;
    j["normwise_rel_deviation"] = r.dev.normwise();
    j["tolerance"] = r.tol;
  }
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

int cmd_enumerate(int p, bool interval) {
  std::vector<NCPartition> parts;
  try {
    if (p < 0) throw ResourceLimit("size must be non-negative");
    parts = interval ? enumerate_interval(p) : enumerate_nc(p);
  } catch (const ResourceLimit& e) {
    return fail_usage("resource-limit", e.what());
  }
  json list = json::array();
  for (const auto& pi : parts) list.push_back(to_text(pi));
  emit(json{{"size", p}, {"interval", interval}, {"count", parts.size()}, {"partitions", list}});
  return 0;
}

int cmd_cumulants(const RunConfig& c, const std::string& kind_text, const std::string& word_text) {
  Model m = build_model(c);
  CumulantKind kind;
  LetterWord word;
  try {
    kind = parse_kind(kind_text);
    word = parse_letter_word(word_text, m.names);
  } catch (const ParseError& e) {
    return fail_usage("parse", e.what());
  }
  if (word.size() > c.max_order)
    return fail_usage("order-overflow", "word of length " + std::to_string(word.size()) + " exceeds max_order " +
                                            std::to_string(c.max_order));

  auto mom = CumulantFamily::moments(m.space, c.max_order);
  CumulantFamily fam = kind == CumulantKind::Moment    ? mom
                       : kind == CumulantKind::Free    ? build_free(mom)
                       : kind == CumulantKind::Boolean ? build_boolean(mom)
                                                       : build_monotone(mom);
  MultiMap f = fam.generator(word.vars);
  const int d = m.space->d();
  const int arity = f.arity();

  json out{{"kind", to_string(kind)}, {"word", to_text(word, m.names)}, {"arity", arity}, {"base_dim", d}};
  const double entries = std::pow(static_cast<double>(d) * d, arity + 1);
  if (entries <= static_cast<double>(1 << 20)) {
    // value on every tuple of matrix units, inputs enumerated with the last one fastest
    Tensor t = tabulate_tensor(f);
    const std::size_t D = t.dim();
    std::size_t tuples = 1;
    for (int i = 0; i < arity; ++i) tuples *= D;
    json values = json::array();
    for (std::size_t in = 0; in < tuples; ++in) {
      Mat v(d, d);
      for (std::size_t o = 0; o < D; ++o) v(static_cast<Eigen::Index>(o) / d, static_cast<Eigen::Index>(o) % d) = t.data[o * tuples + in];
      values.push_back(matrix_json(v));
    }
    out["basis"] = "elementary";
    out["values"] = values;
  } else {
    json probes = json::array();
    for (std::uint64_t s = 0; s < 4; ++s) {
      std::vector<Mat> args;
      for (int i = 0; i < arity; ++i) args.push_back(random_matrix(d, d, c.seed * 1000003ULL + s * 31 + static_cast<std::uint64_t>(i)));
      json in = json::array();
      for (const auto& a : args) in.push_back(matrix_json(a));
      probes.push_back(json{{"inputs", in}, {"value", matrix_json(f(args))}});
    }
    out["basis"] = "probes";
    out["probes"] = probes;
  }
  emit(out);
  return 0;
}

int cmd_verify(const RunConfig& c, const std::optional<FaultSpec>& fault) {
  Model m = build_model(c);
  std::vector<std::string> names = c.suites.empty() ? suite_names() : c.suites;
  for (const auto& n : names)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw UsageError("unknown suite '" + n + "'");
  // report order follows the canonical suite list
  std::vector<std::string> ordered;
  for (const auto& n : suite_names())
    if (std::find(names.begin(), names.end(), n) != names.end()) ordered.push_back(n);

  SuiteConfig cfg;
  cfg.space = m.space;
  cfg.max_order = c.max_order;
  cfg.tol = c.tolerance;
  cfg.seed = c.seed;
  cfg.fault = fault;

  std::vector<std::future<SuiteReport>> jobs;
  for (const auto& n : ordered)
    jobs.push_back(std::async(std::launch::async, [n, &cfg] {
      try {
        return run_suite(n, cfg);
      } catch (const Error& e) {
        SuiteReport r;
        r.name = n;
        r.pass = false;
        CheckResult x;
        x.name = "suite error";
        x.exact = true;
        x.pass = false;
        x.detail = e.what();
        r.checks.push_back(x);
        return r;
      }
    }));

  bool pass = true;
  json suites = json::array();
  for (auto& job : jobs) {
    auto r = job.get();
    pass = pass && r.pass;
    json checks = json::array();
    for (const auto& x : r.checks) checks.push_back(check_json(x));
    suites.push_back(json{{"name", r.name}, {"pass", r.pass}, {"checks", checks}});
  }
  json cfg_json{{"base_dim", c.base_dim}, {"fiber_dim", c.fiber_dim}, {"max_order", c.max_order},
                {"tolerance", c.tolerance}, {"seed", c.seed}, {"variables", m.names.names()}};
  if (fault) cfg_json["inject_fault"] = {{"kind", to_string(fault->kind)}, {"length", fault->length}, {"factor", fault->factor}};
  emit(json{{"config", cfg_json}, {"pass", pass}, {"suites", suites}});
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-valued moment-cumulant toolkit"};
  app.require_subcommand(1);

  std::string config_path, suite_list, fault_text;
  std::optional<int> order;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--order", order, "maximal order (overrides the config)");
  app.add_option("--tol", tol, "tolerance (overrides the config)");
  app.add_option("--suite", suite_list, "comma separated suite names");
  app.add_option("--seed", seed, "seed (overrides the config)");
  app.add_option("--json-indent", indent, "JSON indentation, -1 for a single line");
  app.add_option("--inject-fault", fault_text, "KIND:LENGTH[:FACTOR], corrupts a cumulant table");

  auto* enumerate = app.add_subcommand("enumerate", "list non-crossing or interval partitions");
  int p = 0;
  bool interval = false;
  enumerate->add_option("p", p, "number of points")->required();
  enumerate->add_flag("--interval", interval, "interval partitions only");

  auto* cumulants = app.add_subcommand("cumulants", "tabulate a moment or cumulant map");
  std::string kind = "free", word;
  cumulants->add_option("--kind", kind, "moment, free, boolean or monotone");
  cumulants->add_option("--word", word, "letter word such as a.b.a")->required();

  auto* verify = app.add_subcommand("verify", "run verification suites");

  // global options are accepted after the subcommand as well
  for (auto* sub : {enumerate, cumulants, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_usage("usage", e.what());
  }

  try {
    if (*enumerate) return cmd_enumerate(p, interval);

    RunConfig c = load_config(config_path);
    if (order) c.max_order = *order;
    if (tol) c.tolerance = *tol;
    if (seed) c.seed = *seed;
    if (!suite_list.empty()) c.suites = split_list(suite_list);
    std::optional<FaultSpec> fault;
    if (!fault_text.empty()) fault = parse_fault(fault_text);

    if (*cumulants) return cmd_cumulants(c, kind, word);
    return cmd_verify(c, fault);
  } catch (const UsageError& e) {
    return fail_usage("config", e.what());
  } catch (const ParseError& e) {
    return fail_usage("parse", e.what());
  } catch (const Error& e) {
    return fail_usage("error", e.what());
  }
}
