#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace exrot {

struct CheckRow {
  std::string label;
  double observed = 0.0;
  double lower = 0.0;  // -inf when one-sided
  double upper = 0.0;  // +inf when one-sided
  bool ok = true;
};

struct BoundCheckReport {
  std::string name;
  std::string scope;  // grid / trial-count description
  std::vector<CheckRow> rows;
  bool assertable = true;   // observational reports never fail
  bool satisfied = true;
  double slack = 0.0;       // smallest margin across rows
  std::map<std::string, double> extras;
};

std::string to_json(const BoundCheckReport& r);
// One CSV per report: header name,label,observed,lower,upper,ok
std::string to_csv(const std::vector<BoundCheckReport>& reports);

// Exact tail-ratio sandwich exp(-hr - h/r - h^2/2) <= (1-Phi(r+h))/(1-Phi(r))
// <= exp(-hr - h^2/2), checked to 1e-12 relative accuracy on the grid.
BoundCheckReport gaussian_tail_sandwich_check(const std::vector<double>& r_grid = {},
                                              const std::vector<double>& h_grid = {});

// MC probability that a uniform direction's first coordinate falls in the
// band (-eta sqrt(1 - eta^2/2), 0), against the bound eta sqrt(d / (2 pi)).
BoundCheckReport caps_half_prob_check(int d, double eta, long trials, std::uint64_t seed);

// Trial-wise cap envelope: the always-in / thresholded / somewhere-in chain
// must never break, and the cap marginals stay inside (1 -+ eps') p at 4 SE,
// with eps' = eps + c (eps^2 + eps / max(t^2, 1)).
BoundCheckReport domination_check(int d, double t, double eps, long trials, std::uint64_t seed,
                                  double c_eps = 10.0);

// Pairwise joint above/below probabilities for directions at angle theta
// against the closed-form bound with universal constant C.
BoundCheckReport correlation_bound_check(const std::vector<double>& theta_grid, double t,
                                         long trials, std::uint64_t seed, double C = 10.0);

// Inclusion-exclusion probability that G(n, p) has no isolated vertex;
// exact for n <= 120.
double isolated_prob_exact(int n, double p);

// Closed forms at n = 2, 3 to 1e-12 absolute, plus an MC cross-check at
// n = 30, p = 0.1 within 4 SE.
BoundCheckReport isolated_exact_check(long mc_trials, std::uint64_t seed);

// Observational: exact value, simulation and the exp(-n^{1-c}/3) bound at
// p = c log(n) / n, c in (0, 1).
BoundCheckReport oconnell_bound_report(int n, double c, long trials, std::uint64_t seed);

// Observational: frequency of {clique(G(n,p)) < floor(omega_p - delta)}
// with a Wilson interval (z = 4).
BoundCheckReport clique_lowertail_sim(int n, double p, double delta, long trials,
                                      std::uint64_t seed);

// MC check of the cap area closed form at (d, alpha), 4 SE tolerance.
BoundCheckReport cap_area_mc_check(int d, double alpha, long trials, std::uint64_t seed);

// Distribution summaries of graph metrics at a fixed direction over fresh
// ensembles (the process marginal, i.e. G(n, p)).
struct BaselineSummary {
  int n = 0;
  double p = 0.0;
  double t = 0.0;
  long trials = 0;
  std::map<int, long> clique_hist;
  std::map<int, long> chromatic_lower_hist;
  std::map<int, long> chromatic_upper_hist;
  std::map<int, long> component_hist;
  std::map<int, long> isolated_hist;
  double connected_freq = 0.0;
};

BaselineSummary er_baseline(int n, double p, long trials, std::uint64_t seed);

std::string to_json(const BaselineSummary& s);
std::string to_csv(const BaselineSummary& s);

}  // namespace exrot
