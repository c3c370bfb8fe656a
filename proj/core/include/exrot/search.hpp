#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exrot/model.hpp"
#include "exrot/shatter.hpp"

namespace exrot {

enum class FunctionalKind { CliqueNumber, ChromaticNumber, IsolatedCount, Connected };
enum class OptimizeSense { Maximize, Minimize };

struct GraphFunctional {
  FunctionalKind kind = FunctionalKind::CliqueNumber;
  OptimizeSense sense = OptimizeSense::Maximize;
  int chromatic_exact_limit = 30;
};

// Integer-valued on all kinds; Connected maps to {0, 1}.
double evaluate_functional(const GraphFunctional& f, const GraphRealization& g);

enum class StrategyKind { NetSweep, PackingSweep, LocalRefine, SolverSeeded };

struct Strategy {
  StrategyKind kind = StrategyKind::PackingSweep;
  double param = 0.0;  // eta for NetSweep, theta for PackingSweep, steps for LocalRefine
};

struct SearchBudget {
  long max_evaluations = 1000;
  std::uint64_t seed = 0;
  std::vector<Strategy> strategies;  // empty -> operation default
};

struct SearchResult {
  Direction best_s;
  double best_value = 0.0;
  long evaluations = 0;
  std::string strategy_used;
  bool success = false;
  std::optional<ShatterCertificate> certificate;
};

// Evaluates the functional on every net/packing point (budget-capped),
// keeping the extremum; ties break toward the earliest point.
SearchResult sweep_net(const EdgeVectorEnsemble& ens, double t, const GraphFunctional& f,
                       double eta, const SearchBudget& budget);
SearchResult sweep_packing(const EdgeVectorEnsemble& ens, double t, const GraphFunctional& f,
                           double theta, const SearchBudget& budget);

// Hill climb from `start`: proposals move along bottleneck edge vectors,
// normalized back to the sphere; result never scores worse than the start.
SearchResult local_refine(const EdgeVectorEnsemble& ens, double t, const GraphFunctional& f,
                          const Direction& start, int steps, long max_evaluations = -1);

// Exact extremum over every realizable graph at t = 0; requires
// C(n,2) <= 12 edge vectors and small d. evaluations = number of
// realizable dichotomies (cross-checked against the closed-form count).
SearchResult exact_extremes_small(const EdgeVectorEnsemble& ens, const GraphFunctional& f);

// Constructs a direction realizing a k-clique among vertices [0, k) (or the
// given set) via the sign-pattern solver; best_value is the realized clique
// number at the witness.
SearchResult force_clique_direction(const EdgeVectorEnsemble& ens, int k, double t,
                                    const std::vector<int>* vertices = nullptr,
                                    double margin = -1.0);

// Suppresses all within-class edges of a balanced k-partition, certifying
// chromatic number <= k at the witness.
SearchResult force_coloring_direction(const EdgeVectorEnsemble& ens, int k, double t,
                                      double margin = -1.0);

// Maximizes IsolatedCount: packing sweep, per-vertex targeted descent, then
// local refinement. success iff some direction isolates a vertex.
SearchResult find_isolated_direction(const EdgeVectorEnsemble& ens, double t,
                                     const SearchBudget& budget);

std::string to_json(const SearchResult& r);

}  // namespace exrot
