#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exrot/model.hpp"

namespace exrot {

// Prescribes the realized status of a set of edges: present[k] says whether
// edges[k] must lie on/above the threshold (margin-strict on both sides).
struct ShatterRequest {
  std::vector<EdgeKey> edges;
  std::vector<std::uint8_t> present;
  double t = 0.0;
  double margin = -1.0;  // < 0 picks the default 1e-6 * (1 + |t|)

  double effective_margin() const { return margin < 0.0 ? 1e-6 * (1.0 + std::abs(t)) : margin; }
};

struct ShatterCertificate {
  Direction s;  // unit witness
  double t = 0.0;
  std::vector<EdgeKey> edges;
  std::vector<std::uint8_t> present;
  std::vector<double> margins;  // <X_e, s> - t recomputed from the ensemble
  double min_norm = 0.0;        // norm of the pre-padding solution
};

enum class SolveStatus { Success, Infeasible, SolverFailure };

struct SolveOutcome {
  SolveStatus status = SolveStatus::SolverFailure;
  double min_norm = 0.0;  // +inf when the constraint set is empty
  int iterations = 0;
  std::optional<ShatterCertificate> certificate;
};

// Minimum-norm point of {s : pattern constraints hold with the request's
// margin}, pushed out to unit length along a slack-growing ray (or toward
// the norm-maximal vertex when the polytope is bounded). min_norm > 1, an
// empty constraint polytope, or a bounded polytope strictly inside the
// ball all report Infeasible; numerical breakdown reports SolverFailure.
SolveOutcome solve_sign_pattern(const EdgeVectorEnsemble& ens, const ShatterRequest& request);

// Distance from the origin to the affine hull of the given vectors.
double affine_span_distance(const std::vector<Direction>& vectors);

// All-present request over a spanning tree (default: the path 0-1-...-n-1).
SolveOutcome realize_spanning_tree(const EdgeVectorEnsemble& ens, double t,
                                   const std::vector<EdgeKey>* tree_edges = nullptr,
                                   double margin = -1.0);

struct LeastSingularStats {
  int d = 0;
  int k = 0;
  int trials = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double q01 = 0.0, q05 = 0.0, q10 = 0.0, q25 = 0.0, q50 = 0.0;
  std::vector<double> thresholds;
  std::vector<double> freq_below;  // empirical P(D <= x) per threshold
};

// Samples affine-span distances of k fresh Gaussian d-vectors.
LeastSingularStats least_singular_experiment(int d, int k, int trials, std::uint64_t seed,
                                             const std::vector<double>& thresholds = {});

// True iff the stored margins match a recomputation from the ensemble and
// the signs agree with the prescribed pattern.
bool verify_certificate(const EdgeVectorEnsemble& ens, const ShatterCertificate& cert,
                        double tol = 1e-9);

std::string to_json(const ShatterCertificate& cert);
ShatterCertificate certificate_from_json(const std::string& text);
std::string to_json(const LeastSingularStats& stats);

std::string to_json(const ShatterRequest& request);
ShatterRequest request_from_json(const std::string& text);

}  // namespace exrot
