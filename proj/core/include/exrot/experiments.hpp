#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "exrot/search.hpp"
#include "exrot/verify.hpp"

namespace exrot {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PropertyKind { Clique, Chromatic, Connectivity };
enum class Regime { Subcritical, Supercritical };

// Parsed from a key = value config file; see parse_config for the format.
struct ExperimentConfig {
  std::string name = "experiment";
  int n = 20;
  std::vector<int> dimensions = {8};
  DensitySpec density = DensitySpec::fixed(0.5);
  PropertyKind property = PropertyKind::Clique;
  Regime regime = Regime::Supercritical;
  int target = 0;  // clique / chromatic target; connectivity ignores it
  int repeats = 1;
  std::uint64_t seed = 1;
  SearchBudget budget;
};

// Format: key = value lines, '#' or ';' comments, one optional [budget]
// section. Root keys: name, n, d (comma list), p | c, property
// (clique|chromatic|connectivity), regime (subcritical|supercritical),
// target, repeats, seed. Budget keys: max_evaluations, strategies, e.g.
//   strategies = packing_sweep(0.3), local_refine(200)
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct ExperimentRow {
  std::string config_name;
  std::uint64_t seed = 0;  // ensemble seed for this row
  int d = 0;
  double best_value = 0.0;      // property value at the found direction
  double baseline_value = 0.0;  // property value at the first axis
  bool success = false;
  long evaluations = 0;
  double wall_time_ms = 0.0;  // stays 0 unless timings are requested
};

struct SweepOutcome {
  std::vector<ExperimentRow> rows;
  std::vector<SearchResult> results;  // parallel to rows
};

// The search matched to the (property, regime) pair: forced constructions
// for clique / chromatic targets (or the configured strategy pipeline),
// isolation descent or a spanning-tree witness for connectivity.
SearchResult run_matched_search(const ExperimentConfig& cfg, const EdgeVectorEnsemble& ens,
                                double t, std::uint64_t row_seed);

// One row per (dimension, repeat): runs the search matched to the
// (property, regime) pair, scores the witness and the axis baseline with
// the same metric. Row order is fixed; jobs only affects wall time.
SweepOutcome run_threshold_sweep(const ExperimentConfig& cfg, int jobs = 1, bool timings = false);

// Columns: config,seed,d,best_value,baseline_value,success,evaluations,wall_time_ms
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);
std::string to_json(const SweepOutcome& out, const ExperimentConfig& cfg);

struct VerificationOptions {
  std::vector<std::string> tags;  // empty runs all
  long trials = 200000;
  std::uint64_t seed = 1;
};

// Known tags: tail_sandwich, cap_band, domination, correlations,
// isolated_exact, oconnell, clique_lowertail, cap_area.
std::vector<BoundCheckReport> run_verification_suite(const VerificationOptions& opt);

}  // namespace exrot
