#include <string>
#include <vector>

#include "doctest.h"
#include "exrot/experiments.hpp"
#include "exrot/metrics.hpp"
#include "exrot/model.hpp"
#include "json.hpp"

using namespace exrot;

namespace {

const char* kFullConfig = R"(# forced coloring example
name = coloring_demo
n = 9
d = 6, 12
p = 0.5
property = chromatic
regime = subcritical
target = 3
repeats = 2
seed = 77

[budget]
max_evaluations = 120
strategies = packing_sweep(0.3), local_refine(40)
)";

}  // namespace

TEST_CASE("config parsing covers every root and budget key") {
  ExperimentConfig cfg = parse_config(kFullConfig);
  CHECK(cfg.name == "coloring_demo");
  CHECK(cfg.n == 9);
  CHECK(cfg.dimensions == std::vector<int>{6, 12});
  CHECK(cfg.density.kind == DensitySpec::Kind::FixedP);
  CHECK(cfg.density.edge_probability(9) == 0.5);
  CHECK(cfg.property == PropertyKind::Chromatic);
  CHECK(cfg.regime == Regime::Subcritical);
  CHECK(cfg.target == 3);
  CHECK(cfg.repeats == 2);
  CHECK(cfg.seed == 77);
  CHECK(cfg.budget.max_evaluations == 120);
  REQUIRE(cfg.budget.strategies.size() == 2);
  CHECK(cfg.budget.strategies[0].kind == StrategyKind::PackingSweep);
  CHECK(cfg.budget.strategies[0].param == 0.3);
  CHECK(cfg.budget.strategies[1].kind == StrategyKind::LocalRefine);
  CHECK(cfg.budget.strategies[1].param == 40.0);
}

TEST_CASE("config parsing enforces the format") {
  CHECK_THROWS_AS(parse_config("n = 9\nunknown_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("p = 0.5\nc = 1.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("p = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("regime = sideways\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("property = girth\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[budget\nmax_evaluations = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[rocket]\nfuel = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n = nine\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[budget]\nstrategies = warp_drive(2)\n"), ConfigError);
  // supercritical clique target below the solver floor
  CHECK_THROWS_AS(parse_config("property = clique\nregime = supercritical\ntarget = 1\n"),
                  ConfigError);
  // target above n
  CHECK_THROWS_AS(parse_config("n = 5\nproperty = clique\ntarget = 9\n"), ConfigError);
  // clique / chromatic need a target
  CHECK_THROWS_AS(parse_config("property = chromatic\nregime = subcritical\n"), ConfigError);
  // connectivity ignores target, so a bare connectivity config parses
  ExperimentConfig ok = parse_config("property = connectivity\nregime = subcritical\n");
  CHECK(ok.property == PropertyKind::Connectivity);
}

TEST_CASE("matched search honors a chromatic subcritical config") {
  ExperimentConfig cfg = parse_config(
      "n = 9\nd = 12\np = 0.5\nproperty = chromatic\nregime = subcritical\ntarget = 3\n");
  auto ens = EdgeVectorEnsemble::sample(cfg.n, 12, 501);
  double t = threshold_from_density(0.5);
  SearchResult res = run_matched_search(cfg, ens, t, 501);
  REQUIRE(res.success);
  GraphRealization g = realize_graph(ens, res.best_s, t);
  ChromaticResult chi = chromatic_number(g);
  CHECK(chi.value() <= 3);
  CHECK(res.certificate.has_value());
}

TEST_CASE("threshold sweep rows are ordered, scored, and reproducible") {
  ExperimentConfig cfg = parse_config(
      "name = tree_demo\nn = 10\nd = 64, 128\np = 0.08\n"
      "property = connectivity\nregime = subcritical\nrepeats = 3\nseed = 5\n");
  SweepOutcome out = run_threshold_sweep(cfg, 1);
  REQUIRE(out.rows.size() == 6);
  REQUIRE(out.results.size() == 6);
  double t = threshold_from_density(0.08);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const ExperimentRow& row = out.rows[i];
    CHECK(row.config_name == "tree_demo");
    CHECK(row.d == (i < 3 ? 64 : 128));
    CHECK(row.wall_time_ms == 0.0);
    auto ens = EdgeVectorEnsemble::sample(cfg.n, row.d, row.seed);
    if (row.success) {
      CHECK(row.best_value == 1.0);
      GraphRealization g = realize_graph(ens, out.results[i].best_s, t);
      CHECK(is_connected(g));
    }
    GraphRealization base = realize_graph(ens, axis_direction(row.d), t);
    CHECK(row.baseline_value == (is_connected(base) ? 1.0 : 0.0));
  }

  // job count must not change any output byte
  SweepOutcome par = run_threshold_sweep(cfg, 3);
  CHECK(rows_to_csv(out.rows) == rows_to_csv(par.rows));
  CHECK(to_json(out, cfg) == to_json(par, cfg));

  std::string csv = rows_to_csv(out.rows);
  CHECK(csv.rfind("config,seed,d,best_value,baseline_value,success,evaluations,wall_time_ms\n",
                  0) == 0);

  auto j = nlohmann::json::parse(to_json(out, cfg));
  CHECK(j["config"]["name"] == "tree_demo");
  CHECK(j["rows"].size() == 6);
}

TEST_CASE("timings flag fills wall_time_ms without touching results") {
  ExperimentConfig cfg = parse_config(
      "n = 8\nd = 10\np = 0.5\nproperty = clique\nregime = supercritical\n"
      "target = 3\nrepeats = 2\nseed = 9\n");
  SweepOutcome plain = run_threshold_sweep(cfg, 1, false);
  SweepOutcome timed = run_threshold_sweep(cfg, 1, true);
  REQUIRE(plain.rows.size() == timed.rows.size());
  for (std::size_t i = 0; i < plain.rows.size(); ++i) {
    CHECK(plain.rows[i].best_value == timed.rows[i].best_value);
    CHECK(plain.rows[i].success == timed.rows[i].success);
    CHECK(plain.rows[i].wall_time_ms == 0.0);
    CHECK(timed.rows[i].wall_time_ms >= 0.0);
  }
}

TEST_CASE("verification suite respects tag selection") {
  VerificationOptions opt;
  opt.tags = {"tail_sandwich"};
  opt.trials = 2000;
  auto reports = run_verification_suite(opt);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].name == "tail_sandwich");
  CHECK(reports[0].satisfied);

  opt.tags = {"cap_area"};
  auto caps = run_verification_suite(opt);
  CHECK(caps.size() == 2);

  opt.tags = {"spectral_gap"};
  CHECK_THROWS_AS(run_verification_suite(opt), ConfigError);
}
