#include "exrot/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <utility>

#include "exrot/metrics.hpp"
#include "exrot/parallel.hpp"
#include "exrot/rng.hpp"

namespace exrot {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

// Splits on commas outside parentheses.
std::vector<std::string> split_items(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    long out = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + v);
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + v);
  }
}

Strategy parse_strategy(const std::string& item) {
  std::string name = item;
  double param = 0.0;
  bool has_param = false;
  auto open = item.find('(');
  if (open != std::string::npos) {
    if (item.back() != ')') throw ConfigError("config: unbalanced strategy '" + item + "'");
    name = trim(item.substr(0, open));
    std::string inner = trim(item.substr(open + 1, item.size() - open - 2));
    if (!inner.empty()) {
      param = parse_double(inner, "strategies");
      has_param = true;
    }
  }
  name = lower(name);
  Strategy st;
  if (name == "net_sweep") {
    st.kind = StrategyKind::NetSweep;
    st.param = has_param ? param : 0.5;
  } else if (name == "packing_sweep") {
    st.kind = StrategyKind::PackingSweep;
    st.param = has_param ? param : 0.4;
  } else if (name == "local_refine") {
    st.kind = StrategyKind::LocalRefine;
    st.param = has_param ? param : 100;
  } else if (name == "solver_seeded") {
    st.kind = StrategyKind::SolverSeeded;
    st.param = param;
  } else {
    throw ConfigError("config: unknown strategy '" + name + "'");
  }
  return st;
}

std::string strategy_to_string(const Strategy& st) {
  auto fmt = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  switch (st.kind) {
    case StrategyKind::NetSweep:
      return "net_sweep(" + fmt(st.param) + ")";
    case StrategyKind::PackingSweep:
      return "packing_sweep(" + fmt(st.param) + ")";
    case StrategyKind::LocalRefine:
      return "local_refine(" + fmt(st.param) + ")";
    case StrategyKind::SolverSeeded:
      return "solver_seeded";
  }
  return "?";
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 2) throw ConfigError("config: n >= 2 required");
  if (cfg.dimensions.empty()) throw ConfigError("config: at least one dimension required");
  for (int d : cfg.dimensions)
    if (d < 1) throw ConfigError("config: dimensions must be >= 1");
  if (cfg.repeats < 1) throw ConfigError("config: repeats >= 1 required");
  double p = cfg.density.edge_probability(cfg.n);
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("config: edge probability must land in (0,1)");
  if (cfg.property != PropertyKind::Connectivity) {
    if (cfg.target < 1) throw ConfigError("config: clique/chromatic experiments need target >= 1");
    if (cfg.regime == Regime::Supercritical && cfg.target < 2)
      throw ConfigError("config: supercritical clique/chromatic targets need target >= 2");
    if (cfg.target > cfg.n) throw ConfigError("config: target cannot exceed n");
  }
}

double property_value(PropertyKind prop, const GraphRealization& g) {
  switch (prop) {
    case PropertyKind::Clique:
      return clique_number(g);
    case PropertyKind::Chromatic:
      return chromatic_number(g).value();
    case PropertyKind::Connectivity:
      return is_connected(g) ? 1.0 : 0.0;
  }
  return 0.0;
}

bool row_success(const ExperimentConfig& cfg, double value) {
  switch (cfg.property) {
    case PropertyKind::Clique:
    case PropertyKind::Chromatic:
      return cfg.regime == Regime::Supercritical ? value >= cfg.target : value <= cfg.target;
    case PropertyKind::Connectivity:
      return cfg.regime == Regime::Supercritical ? value == 0.0 : value == 1.0;
  }
  return false;
}

SearchResult forced_search(const ExperimentConfig& cfg, const EdgeVectorEnsemble& ens, double t) {
  if (cfg.regime == Regime::Supercritical) return force_clique_direction(ens, cfg.target, t);
  return force_coloring_direction(ens, cfg.target, t);
}

// Explicitly configured strategies run in order; the extremum survives.
SearchResult strategy_pipeline(const ExperimentConfig& cfg, const EdgeVectorEnsemble& ens,
                               double t, const SearchBudget& budget) {
  GraphFunctional f;
  f.kind = cfg.property == PropertyKind::Clique ? FunctionalKind::CliqueNumber
                                                : FunctionalKind::ChromaticNumber;
  f.sense =
      cfg.regime == Regime::Supercritical ? OptimizeSense::Maximize : OptimizeSense::Minimize;
  auto better = [&](double a, double b) {
    return f.sense == OptimizeSense::Maximize ? a > b : a < b;
  };

  SearchResult best;
  bool have = false;
  long evals = 0;
  for (std::size_t idx = 0; idx < budget.strategies.size(); ++idx) {
    long remaining = budget.max_evaluations - evals;
    if (remaining <= 0) break;
    const Strategy& st = budget.strategies[idx];
    SearchBudget sub = budget;
    sub.strategies.clear();
    sub.max_evaluations = remaining;
    sub.seed = counter_hash(budget.seed, kDomainSearch, idx);
    SearchResult res;
    switch (st.kind) {
      case StrategyKind::NetSweep:
        res = sweep_net(ens, t, f, st.param, sub);
        break;
      case StrategyKind::PackingSweep:
        res = sweep_packing(ens, t, f, st.param, sub);
        break;
      case StrategyKind::LocalRefine: {
        Direction start = have ? best.best_s : axis_direction(ens.d());
        res = local_refine(ens, t, f, start, static_cast<int>(st.param), remaining);
        break;
      }
      case StrategyKind::SolverSeeded:
        res = forced_search(cfg, ens, t);
        break;
    }
    evals += res.evaluations;
    if (!have || better(res.best_value, best.best_value)) {
      long keep = evals;
      best = std::move(res);
      best.evaluations = keep;
      have = true;
    } else {
      best.evaluations = evals;
    }
  }
  if (!have) {
    best.best_s = axis_direction(ens.d());
    best.strategy_used = "none";
  }
  return best;
}

}  // namespace

SearchResult run_matched_search(const ExperimentConfig& cfg, const EdgeVectorEnsemble& ens,
                                double t, std::uint64_t row_seed) {
  SearchBudget budget = cfg.budget;
  budget.seed = counter_hash(row_seed, kDomainSearch);
  if (cfg.property == PropertyKind::Connectivity) {
    if (cfg.regime == Regime::Supercritical) return find_isolated_direction(ens, t, budget);
    SolveOutcome out = realize_spanning_tree(ens, t);
    SearchResult r;
    r.evaluations = 1;
    r.strategy_used = "spanning_tree";
    if (out.status == SolveStatus::Success && out.certificate) {
      r.best_s = out.certificate->s;
      r.best_value = 1.0;
      r.success = true;
      r.certificate = out.certificate;
    } else {
      r.best_s = axis_direction(ens.d());
    }
    return r;
  }
  if (!budget.strategies.empty()) return strategy_pipeline(cfg, ens, t, budget);
  return forced_search(cfg, ens, t);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  bool density_set = false;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section != "budget")
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = lower(trim(line.substr(0, eq)));
    std::string value = trim(line.substr(eq + 1));
    if (value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty value for '" + key +
                        "'");

    if (section == "budget") {
      if (key == "max_evaluations") {
        cfg.budget.max_evaluations = parse_long(value, key);
      } else if (key == "strategies") {
        cfg.budget.strategies.clear();
        for (const auto& item : split_items(value))
          cfg.budget.strategies.push_back(parse_strategy(item));
      } else {
        throw ConfigError("config: unknown budget key '" + key + "'");
      }
      continue;
    }

    if (key == "name") {
      cfg.name = value;
    } else if (key == "n") {
      cfg.n = static_cast<int>(parse_long(value, key));
    } else if (key == "d" || key == "dimensions") {
      cfg.dimensions.clear();
      for (const auto& item : split_items(value))
        cfg.dimensions.push_back(static_cast<int>(parse_long(item, key)));
    } else if (key == "p") {
      if (density_set) throw ConfigError("config: density given twice (p and c)");
      try {
        cfg.density = DensitySpec::fixed(parse_double(value, key));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      density_set = true;
    } else if (key == "c") {
      if (density_set) throw ConfigError("config: density given twice (p and c)");
      try {
        cfg.density = DensitySpec::connectivity(parse_double(value, key));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      density_set = true;
    } else if (key == "property") {
      std::string v = lower(value);
      if (v == "clique")
        cfg.property = PropertyKind::Clique;
      else if (v == "chromatic")
        cfg.property = PropertyKind::Chromatic;
      else if (v == "connectivity")
        cfg.property = PropertyKind::Connectivity;
      else
        throw ConfigError("config: unknown property '" + value + "'");
    } else if (key == "regime") {
      std::string v = lower(value);
      if (v == "subcritical")
        cfg.regime = Regime::Subcritical;
      else if (v == "supercritical")
        cfg.regime = Regime::Supercritical;
      else
        throw ConfigError("config: unknown regime '" + value + "'");
    } else if (key == "target") {
      cfg.target = static_cast<int>(parse_long(value, key));
    } else if (key == "repeats") {
      cfg.repeats = static_cast<int>(parse_long(value, key));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_long(value, key));
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SweepOutcome run_threshold_sweep(const ExperimentConfig& cfg, int jobs, bool timings) {
  validate(cfg);
  const double p = cfg.density.edge_probability(cfg.n);
  const double t = threshold_from_density(p);
  const std::size_t total =
      cfg.dimensions.size() * static_cast<std::size_t>(cfg.repeats);

  using Item = std::pair<ExperimentRow, SearchResult>;
  auto run_one = [&](std::size_t index) {
    std::size_t di = index / static_cast<std::size_t>(cfg.repeats);
    std::size_t rep = index % static_cast<std::size_t>(cfg.repeats);
    int d = cfg.dimensions[di];
    std::uint64_t row_seed = counter_hash(cfg.seed, kDomainTrial, di, rep);
    EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(cfg.n, d, row_seed);

    auto began = std::chrono::steady_clock::now();
    SearchResult res = run_matched_search(cfg, ens, t, row_seed);
    auto ended = std::chrono::steady_clock::now();

    Direction where = res.best_s.empty() ? axis_direction(d) : res.best_s;
    GraphRealization g_best = realize_graph(ens, where, t);
    GraphRealization g_base = realize_graph(ens, axis_direction(d), t);

    ExperimentRow row;
    row.config_name = cfg.name;
    row.seed = row_seed;
    row.d = d;
    row.best_value = property_value(cfg.property, g_best);
    row.baseline_value = property_value(cfg.property, g_base);
    row.success = row_success(cfg, row.best_value);
    row.evaluations = res.evaluations;
    if (timings)
      row.wall_time_ms =
          std::chrono::duration<double, std::milli>(ended - began).count();
    res.success = row.success;
    return Item{std::move(row), std::move(res)};
  };

  auto map_chunk = [&](std::size_t b, std::size_t e) {
    std::vector<Item> out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) out.push_back(run_one(i));
    return out;
  };
  auto fold = [](SweepOutcome& acc, std::vector<Item>&& items) {
    for (auto& [row, res] : items) {
      acc.rows.push_back(std::move(row));
      acc.results.push_back(std::move(res));
    }
  };
  return chunked_reduce<SweepOutcome>(total, jobs, 1, SweepOutcome{}, map_chunk, fold);
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  auto fmt = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  std::string out = "config,seed,d,best_value,baseline_value,success,evaluations,wall_time_ms\n";
  for (const auto& r : rows) {
    out += r.config_name;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.d);
    out += ',';
    out += fmt(r.best_value);
    out += ',';
    out += fmt(r.baseline_value);
    out += ',';
    out += r.success ? "true" : "false";
    out += ',';
    out += std::to_string(r.evaluations);
    out += ',';
    out += fmt(r.wall_time_ms);
    out += '\n';
  }
  return out;
}

std::string to_json(const SweepOutcome& out, const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["kind"] = "threshold_sweep";
  nlohmann::ordered_json jc;
  jc["name"] = cfg.name;
  jc["n"] = cfg.n;
  jc["dimensions"] = cfg.dimensions;
  jc["density_kind"] =
      cfg.density.kind == DensitySpec::Kind::FixedP ? "p" : "connectivity_scale";
  jc["density_value"] = cfg.density.value;
  jc["edge_probability"] = cfg.density.edge_probability(cfg.n);
  switch (cfg.property) {
    case PropertyKind::Clique:
      jc["property"] = "clique";
      break;
    case PropertyKind::Chromatic:
      jc["property"] = "chromatic";
      break;
    case PropertyKind::Connectivity:
      jc["property"] = "connectivity";
      break;
  }
  jc["regime"] = cfg.regime == Regime::Supercritical ? "supercritical" : "subcritical";
  jc["target"] = cfg.target;
  jc["repeats"] = cfg.repeats;
  jc["seed"] = cfg.seed;
  nlohmann::ordered_json jb;
  jb["max_evaluations"] = cfg.budget.max_evaluations;
  nlohmann::ordered_json strat = nlohmann::ordered_json::array();
  for (const auto& st : cfg.budget.strategies) strat.push_back(strategy_to_string(st));
  jb["strategies"] = std::move(strat);
  jc["budget"] = std::move(jb);
  j["config"] = std::move(jc);

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const auto& r = out.rows[i];
    nlohmann::ordered_json rj;
    rj["config"] = r.config_name;
    rj["seed"] = r.seed;
    rj["d"] = r.d;
    rj["best_value"] = r.best_value;
    rj["baseline_value"] = r.baseline_value;
    rj["success"] = r.success;
    rj["evaluations"] = r.evaluations;
    rj["wall_time_ms"] = r.wall_time_ms;
    if (i < out.results.size())
      rj["result"] = nlohmann::ordered_json::parse(to_json(out.results[i]));
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

std::vector<BoundCheckReport> run_verification_suite(const VerificationOptions& opt) {
  static const std::vector<std::string> known = {
      "tail_sandwich", "cap_band",       "domination", "correlations",
      "isolated_exact", "oconnell",      "clique_lowertail", "cap_area"};
  for (const auto& tag : opt.tags)
    if (std::find(known.begin(), known.end(), tag) == known.end())
      throw ConfigError("verify: unknown tag '" + tag + "'");
  auto want = [&](const char* tag) {
    return opt.tags.empty() ||
           std::find(opt.tags.begin(), opt.tags.end(), tag) != opt.tags.end();
  };
  long trials = std::max<long>(1000, opt.trials);
  long heavy = std::max<long>(200, trials / 100);  // trials that build whole graphs

  std::vector<BoundCheckReport> out;
  if (want("tail_sandwich")) out.push_back(gaussian_tail_sandwich_check());
  if (want("cap_band")) out.push_back(caps_half_prob_check(100, 0.1, trials, opt.seed));
  if (want("domination")) out.push_back(domination_check(16, 2.0, 0.2, trials, opt.seed));
  if (want("correlations")) out.push_back(correlation_bound_check({}, 2.0, trials, opt.seed));
  if (want("isolated_exact")) out.push_back(isolated_exact_check(heavy, opt.seed));
  if (want("oconnell")) out.push_back(oconnell_bound_report(50, 0.2, heavy, opt.seed));
  if (want("clique_lowertail"))
    out.push_back(clique_lowertail_sim(40, 0.5, 3.0, heavy, opt.seed));
  if (want("cap_area")) {
    out.push_back(cap_area_mc_check(3, kPi / 3.0, trials, opt.seed));
    out.push_back(cap_area_mc_check(5, kPi / 3.0, trials, opt.seed));
  }
  return out;
}

}  // namespace exrot
