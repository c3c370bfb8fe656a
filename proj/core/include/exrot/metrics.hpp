#pragma once

#include <string>
#include <vector>

#include "exrot/model.hpp"

namespace exrot {

// Exact maximum clique size; 1 on edgeless graphs with >= 1 vertex.
int clique_number(const GraphRealization& g);

struct ChromaticResult {
  int lower = 1;   // clique-based lower bound
  int upper = 1;   // exact value when exact, else DSATUR bound
  bool exact = false;
  int value() const { return upper; }
};

// Exact via branch-and-bound when n <= exact_limit, otherwise the
// (clique, DSATUR) bracket.
ChromaticResult chromatic_number(const GraphRealization& g, int exact_limit = 30);

// Greedy DSATUR proper coloring; returns color per vertex, colors 0-based.
std::vector<int> dsatur_coloring(const GraphRealization& g);

int connected_components(const GraphRealization& g);
bool is_connected(const GraphRealization& g);
std::vector<int> isolated_vertices(const GraphRealization& g);

// Typical clique number of G(n, 1/2):
// 2 log2 n - 2 log2 log2 n + 2 log2 e - 1, n >= 2.
double matula_omega(int n);

// Same expansion at general density p (base 1/p logs), p in (0,1):
// 2 log_{1/p} n - 2 log_{1/p} log_{1/p} n + 2 log_{1/p}(e/2) + 1.
double matula_omega_density(int n, double p);

// Chromatic lower scale n / (2 log2 n), n >= 2.
double bollobas_chromatic_scale(int n);

struct MetricReport {
  int n = 0;
  long edges = 0;
  int clique = 0;
  ChromaticResult chromatic;
  int components = 0;
  std::vector<int> isolated;
  bool connected = false;
};

MetricReport compute_metrics(const GraphRealization& g, int chromatic_exact_limit = 30);

std::string to_json(const MetricReport& r);

}  // namespace exrot
