#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "exrot/model.hpp"
#include "exrot/rng.hpp"

namespace exrot {

using BigInt = boost::multiprecision::cpp_int;

struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Number of sign dichotomies of N points in general position in R^d cut by
// homogeneous halfspaces: 2 * sum_{k=0}^{d-1} C(N-1, k); equals 2^N for N <= d.
BigInt schlafli_count(int N, int d);

// One realizable sign pattern: bit k set iff <x_k, s> >= 0 at the witness.
struct SignPatternSet {
  int n_points = 0;
  int d = 0;
  std::vector<std::uint64_t> patterns;       // sorted, deduplicated masks
  std::vector<Direction> witnesses;          // unit witness per pattern
};

// Exhaustive enumeration via extreme rays of the hyperplane arrangement,
// exact for general-position inputs (throws DegenerateInput otherwise).
// Supported exactly for small instances (N <= 20, d <= 6).
SignPatternSet enumerate_sign_patterns(const std::vector<Direction>& points,
                                       double degeneracy_tol = 1e-9);

struct CoveringNet {
  int d = 0;
  double eta = 0.0;
  std::vector<Direction> points;
  bool verified = false;  // a full fresh-sample pass found no uncovered point
};

// Greedy stream construction; net points are pairwise > eta separated, so
// |net| <= (4/eta)^d. `budget` controls both construction and verification
// sample counts.
CoveringNet build_covering_net(int d, double eta, int budget, std::uint64_t seed);

struct Packing {
  int d = 0;
  double theta = 0.0;
  std::vector<Direction> points;  // pairwise <s, s'> <= cos(theta)
  long attempts = 0;
  bool size_bound_met = false;    // |points| >= (d/16) * theta^{-(d-1)}
};

Packing build_packing(int d, double theta, int budget, std::uint64_t seed);

// Fraction of the unit sphere S^{d-1} covered by a spherical cap of angular
// radius alpha in [0, pi]; d >= 2.
double cap_area_fraction(int d, double alpha);

// Uniform random unit vector.
Direction sample_uniform_direction(int d, RngStream& rng);

std::string to_json(const CoveringNet& net);
std::string to_json(const Packing& pack);
CoveringNet covering_net_from_json(const std::string& text);
Packing packing_from_json(const std::string& text);

}  // namespace exrot
