// Command line front end: ensemble generation, realization, sign-pattern
// solving, directed searches, sweeps, statistical verification, baselines.
// Exit codes: 0 success, 1 failed check or unmet search, 2 usage or config
// error, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "exrot/experiments.hpp"
#include "exrot/metrics.hpp"
#include "exrot/model.hpp"
#include "exrot/rng.hpp"
#include "exrot/search.hpp"
#include "exrot/shatter.hpp"
#include "exrot/sphere.hpp"
#include "exrot/verify.hpp"

namespace {

using namespace exrot;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& out_path, const std::string& text) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (out_path.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + out_path + " for writing");
  out << body;
  if (!out) throw IoError("write failed: " + out_path);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

struct DensityArgs {
  double t = 0.0, p = 0.0, c = 0.0;
  bool has_t = false, has_p = false, has_c = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--t", t, "threshold value")->each([this](const std::string&) { has_t = true; });
    cmd->add_option("--p", p, "edge probability in (0,1)")->each([this](const std::string&) {
      has_p = true;
    });
    cmd->add_option("--c", c, "connectivity scale: p = c log(n)/n")
        ->each([this](const std::string&) { has_c = true; });
  }

  double threshold(int n) const {
    int given = has_t + has_p + has_c;
    if (given != 1) throw ConfigError("exactly one of --t, --p, --c required");
    if (has_t) return t;
    double prob = has_p ? p : DensitySpec::connectivity(c).edge_probability(n);
    return threshold_from_density(prob);
  }

  double probability(int n) const {
    int given = has_p + has_c;
    if (has_t || given != 1) throw ConfigError("exactly one of --p, --c required");
    return has_p ? p : DensitySpec::connectivity(c).edge_probability(n);
  }
};

EdgeVectorEnsemble load_or_sample(const std::string& in_path, int n, int d, std::uint64_t seed) {
  if (!in_path.empty()) return EdgeVectorEnsemble::read_file(in_path);
  if (n < 2 || d < 1) throw ConfigError("need --in, or --n and --d");
  return EdgeVectorEnsemble::sample(n, d, seed);
}

std::string reports_json(const std::vector<BoundCheckReport>& reports) {
  std::string out = "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out += ',';
    out += to_json(reports[i]);
  }
  out += ']';
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"halfspace-indexed random graph process toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "sample an edge-vector ensemble and write it to a file");
  int gen_n = 0, gen_d = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--d", gen_d, "vector dimension")->required();
  gen->add_option("--seed", gen_seed, "ensemble seed");
  gen->add_option("--out", gen_out, "output file")->required();

  // realize
  auto* rea = app.add_subcommand("realize", "realize the graph at a direction and report metrics");
  std::string rea_in, rea_dir_list, rea_out;
  int rea_n = 0, rea_d = 0, rea_axis = -1;
  std::uint64_t rea_seed = 1, rea_dir_seed = 1;
  bool rea_uniform = false;
  DensityArgs rea_density;
  rea->add_option("--in", rea_in, "ensemble file from gen");
  rea->add_option("--n", rea_n, "vertex count (when sampling)");
  rea->add_option("--d", rea_d, "vector dimension (when sampling)");
  rea->add_option("--seed", rea_seed, "ensemble seed (when sampling)");
  rea_density.attach(rea);
  rea->add_option("--axis", rea_axis, "use the k-th coordinate axis as direction");
  rea->add_option("--direction", rea_dir_list, "comma separated direction entries");
  rea->add_flag("--uniform", rea_uniform, "sample a uniform direction");
  rea->add_option("--direction-seed", rea_dir_seed, "seed for --uniform");
  rea->add_option("--out", rea_out, "output file (default stdout)");

  // shatter
  auto* sha = app.add_subcommand("shatter", "solve a prescribed edge sign pattern");
  std::string sha_in, sha_request, sha_out;
  int sha_n = 0, sha_d = 0;
  std::uint64_t sha_seed = 1;
  bool sha_tree = false;
  double sha_margin = -1.0;
  DensityArgs sha_density;
  sha->add_option("--in", sha_in, "ensemble file from gen");
  sha->add_option("--n", sha_n, "vertex count (when sampling)");
  sha->add_option("--d", sha_d, "vector dimension (when sampling)");
  sha->add_option("--seed", sha_seed, "ensemble seed (when sampling)");
  sha->add_option("--request", sha_request, "request JSON file");
  sha->add_flag("--tree", sha_tree, "realize a spanning path instead of a request file");
  sha->add_option("--margin", sha_margin, "strictness margin (default 1e-6 scaled)");
  sha_density.attach(sha);
  sha->add_option("--out", sha_out, "output file (default stdout)");

  // search
  auto* sea = app.add_subcommand("search", "run the search matched to a config, one row");
  std::string sea_config, sea_out;
  int sea_d = 0;
  std::uint64_t sea_seed = 0;
  bool sea_seed_set = false, sea_d_set = false;
  sea->add_option("--config", sea_config, "experiment config file")->required();
  sea->add_option("--d", sea_d, "override dimension")->each([&](const std::string&) {
    sea_d_set = true;
  });
  sea->add_option("--seed", sea_seed, "override row seed")->each([&](const std::string&) {
    sea_seed_set = true;
  });
  sea->add_option("--out", sea_out, "output file (default stdout)");

  // sweep
  auto* swe = app.add_subcommand("sweep", "run the full (dimension x repeat) experiment table");
  std::string swe_config, swe_out, swe_format = "csv";
  int swe_jobs = 1;
  bool swe_timings = false;
  swe->add_option("--config", swe_config, "experiment config file")->required();
  swe->add_option("--jobs", swe_jobs, "worker threads (output independent of this)");
  swe->add_flag("--timings", swe_timings, "record wall times (breaks byte-determinism)");
  swe->add_option("--format", swe_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  swe->add_option("--out", swe_out, "output file (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "run statistical bound checks");
  std::string ver_tags, ver_out, ver_format = "csv";
  long ver_trials = 200000;
  std::uint64_t ver_seed = 1;
  ver->add_option("--tags", ver_tags,
                  "comma list: tail_sandwich, cap_band, domination, correlations, "
                  "isolated_exact, oconnell, clique_lowertail, cap_area (default all)");
  ver->add_option("--trials", ver_trials, "Monte Carlo trials per check");
  ver->add_option("--seed", ver_seed, "Monte Carlo seed");
  ver->add_option("--format", ver_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  ver->add_option("--out", ver_out, "output file (default stdout)");

  // baseline
  auto* bas = app.add_subcommand("baseline", "metric distributions at a fixed direction");
  int bas_n = 0;
  long bas_trials = 200;
  std::uint64_t bas_seed = 1;
  std::string bas_out, bas_format = "json";
  DensityArgs bas_density;
  bas->add_option("--n", bas_n, "vertex count")->required();
  bas_density.attach(bas);
  bas->add_option("--trials", bas_trials, "number of fresh ensembles");
  bas->add_option("--seed", bas_seed, "seed");
  bas->add_option("--format", bas_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bas->add_option("--out", bas_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) {
    EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(gen_n, gen_d, gen_seed);
    ens.write_file(gen_out);
    return 0;
  }

  if (rea->parsed()) {
    EdgeVectorEnsemble ens = load_or_sample(rea_in, rea_n, rea_d, rea_seed);
    double t = rea_density.threshold(ens.n());
    Direction s;
    int dir_given = (rea_axis >= 0) + !rea_dir_list.empty() + rea_uniform;
    if (dir_given > 1) throw ConfigError("give at most one of --axis, --direction, --uniform");
    if (!rea_dir_list.empty()) {
      for (const auto& item : split_csv(rea_dir_list)) s.push_back(std::stod(item));
      if (static_cast<int>(s.size()) != ens.d())
        throw ConfigError("--direction must have exactly d entries");
      normalize(s);
    } else if (rea_uniform) {
      RngStream rng = derive_stream(rea_dir_seed, kDomainDirection);
      s = sample_uniform_direction(ens.d(), rng);
    } else {
      s = axis_direction(ens.d(), rea_axis < 0 ? 0 : rea_axis);
    }
    GraphRealization g = realize_graph(ens, s, t);
    emit(rea_out, to_json(compute_metrics(g)));
    return 0;
  }

  if (sha->parsed()) {
    EdgeVectorEnsemble ens = load_or_sample(sha_in, sha_n, sha_d, sha_seed);
    SolveOutcome outcome;
    if (sha_tree) {
      double t = sha_density.threshold(ens.n());
      outcome = realize_spanning_tree(ens, t, nullptr, sha_margin);
    } else if (!sha_request.empty()) {
      ShatterRequest req = request_from_json(slurp(sha_request));
      if (sha_margin >= 0.0) req.margin = sha_margin;
      outcome = solve_sign_pattern(ens, req);
    } else {
      throw ConfigError("shatter needs --request or --tree");
    }
    if (outcome.status == SolveStatus::Success && outcome.certificate) {
      emit(sha_out, to_json(*outcome.certificate));
      return 0;
    }
    emit(sha_out, outcome.status == SolveStatus::Infeasible ? R"({"status":"infeasible"})"
                                                            : R"({"status":"solver_failure"})");
    return 1;
  }

  if (sea->parsed()) {
    ExperimentConfig cfg = load_config(sea_config);
    int d = sea_d_set ? sea_d : cfg.dimensions.at(0);
    std::uint64_t row_seed = sea_seed_set ? sea_seed : cfg.seed;
    double t = threshold_from_density(cfg.density.edge_probability(cfg.n));
    EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(cfg.n, d, row_seed);
    SearchResult res = run_matched_search(cfg, ens, t, row_seed);
    emit(sea_out, to_json(res));
    return res.success ? 0 : 1;
  }

  if (swe->parsed()) {
    ExperimentConfig cfg = load_config(swe_config);
    SweepOutcome out = run_threshold_sweep(cfg, swe_jobs, swe_timings);
    emit(swe_out, swe_format == "csv" ? rows_to_csv(out.rows) : to_json(out, cfg));
    return 0;
  }

  if (ver->parsed()) {
    VerificationOptions opt;
    opt.tags = split_csv(ver_tags);
    opt.trials = ver_trials;
    opt.seed = ver_seed;
    std::vector<BoundCheckReport> reports = run_verification_suite(opt);
    emit(ver_out, ver_format == "csv" ? to_csv(reports) : reports_json(reports));
    for (const auto& r : reports)
      if (r.assertable && !r.satisfied) return 1;
    return 0;
  }

  if (bas->parsed()) {
    double p = bas_density.probability(bas_n);
    BaselineSummary sum = er_baseline(bas_n, p, bas_trials, bas_seed);
    emit(bas_out, bas_format == "csv" ? to_csv(sum) : to_json(sum));
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const exrot::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const exrot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
