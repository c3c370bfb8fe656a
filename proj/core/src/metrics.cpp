#include "exrot/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace exrot {

namespace {

// Branch-and-bound maximum clique (Tomita-style): candidates are greedily
// colored and processed in reverse color order, pruning when the current
// clique plus the color bound cannot beat the incumbent.
class CliqueSolver {
 public:
  explicit CliqueSolver(const GraphRealization& g)
      : g_(g), n_(g.n()), words_(g.words()), buf_(static_cast<std::size_t>(n_ + 1) * words_) {}

  int solve() {
    std::vector<std::uint64_t> all(words_, 0);
    for (int v = 0; v < n_; ++v) all[v >> 6] |= (1ull << (v & 63));
    best_ = 0;
    expand(all.data(), 0, 0);
    return best_;
  }

 private:
  void expand(const std::uint64_t* cand, int depth, int size) {
    // Greedy coloring of the candidate set; vertices recorded in
    // nondecreasing color order.
    order_.clear();
    color_.clear();
    std::vector<std::uint64_t> uncolored(cand, cand + words_);
    std::vector<std::uint64_t> q(words_);
    int color = 0;
    while (true) {
      int base = -1;
      for (int w = 0; w < words_; ++w)
        if (uncolored[w]) { base = w; break; }
      if (base < 0) break;
      ++color;
      std::copy(uncolored.begin(), uncolored.end(), q.begin());
      while (true) {
        int v = -1;
        for (int w = 0; w < words_; ++w)
          if (q[w]) { v = (w << 6) + std::countr_zero(q[w]); break; }
        if (v < 0) break;
        order_.push_back(v);
        color_.push_back(color);
        uncolored[v >> 6] &= ~(1ull << (v & 63));
        q[v >> 6] &= ~(1ull << (v & 63));
        const std::uint64_t* nv = g_.row(v);
        for (int w = 0; w < words_; ++w) q[w] &= ~nv[w];
      }
    }

    std::vector<std::uint64_t> local(cand, cand + words_);
    std::uint64_t* next = buf_.data() + static_cast<std::size_t>(depth) * words_;
    for (int k = static_cast<int>(order_.size()) - 1; k >= 0; --k) {
      if (size + color_[k] <= best_) return;  // colors ascend; rest is no better
      int v = order_[k];
      const std::uint64_t* nv = g_.row(v);
      bool nonempty = false;
      for (int w = 0; w < words_; ++w) {
        next[w] = local[w] & nv[w];
        nonempty |= (next[w] != 0);
      }
      if (size + 1 > best_) best_ = size + 1;
      if (nonempty) {
        // order_/color_ are reused by the recursion; they are rebuilt on entry.
        std::vector<std::uint64_t> saved(next, next + words_);
        expand(saved.data(), depth + 1, size + 1);
      }
      local[v >> 6] &= ~(1ull << (v & 63));
    }
  }

  const GraphRealization& g_;
  int n_;
  int words_;
  int best_ = 0;
  std::vector<std::uint64_t> buf_;
  std::vector<int> order_;
  std::vector<int> color_;
};

// DSATUR branch and bound; exact for moderate n.
class ChromaticSolver {
 public:
  ChromaticSolver(const GraphRealization& g, int lower) : g_(g), n_(g.n()), lower_(lower) {
    colors_.assign(n_, -1);
  }

  int solve(int initial_upper) {
    best_ = initial_upper;
    recurse(0, 0);
    return best_;
  }

 private:
  void recurse(int colored, int used) {
    if (used >= best_) return;
    if (colored == n_) {
      best_ = used;
      return;
    }
    int v = pick_vertex();
    // feasible colors among those already used, then possibly one fresh color
    for (int c = 0; c < std::min(used + 1, best_ - 1); ++c) {
      if (conflicts(v, c)) continue;
      colors_[v] = c;
      recurse(colored + 1, std::max(used, c + 1));
      colors_[v] = -1;
      if (best_ == lower_) return;  // cannot improve further
    }
  }

  bool conflicts(int v, int c) const {
    for (int u = 0; u < n_; ++u)
      if (colors_[u] == c && g_.has_edge(u, v)) return true;
    return false;
  }

  int pick_vertex() const {
    int bestv = -1, best_sat = -1, best_deg = -1;
    for (int v = 0; v < n_; ++v) {
      if (colors_[v] >= 0) continue;
      std::uint64_t seen[2] = {0, 0};  // color ids < 128 in practice (n <= exact_limit)
      int sat = 0;
      for (int u = 0; u < n_; ++u) {
        int c = colors_[u];
        if (c >= 0 && g_.has_edge(u, v)) {
          std::uint64_t bit = 1ull << (c & 63);
          std::uint64_t& word = seen[(c >> 6) & 1];
          if (!(word & bit)) { word |= bit; ++sat; }
        }
      }
      int deg = g_.degree(v);
      if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
        bestv = v;
        best_sat = sat;
        best_deg = deg;
      }
    }
    return bestv;
  }

  const GraphRealization& g_;
  int n_;
  int lower_;
  int best_ = 0;
  std::vector<int> colors_;
};

}  // namespace

int clique_number(const GraphRealization& g) {
  if (g.n() == 0) return 0;
  return CliqueSolver(g).solve();
}

std::vector<int> dsatur_coloring(const GraphRealization& g) {
  int n = g.n();
  std::vector<int> color(n, -1);
  std::vector<std::vector<bool>> neighbor_colors(n);
  for (int step = 0; step < n; ++step) {
    int bestv = -1, best_sat = -1, best_deg = -1;
    for (int v = 0; v < n; ++v) {
      if (color[v] >= 0) continue;
      int sat = static_cast<int>(std::count(neighbor_colors[v].begin(), neighbor_colors[v].end(), true));
      int deg = g.degree(v);
      if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
        bestv = v;
        best_sat = sat;
        best_deg = deg;
      }
    }
    int c = 0;
    while (c < static_cast<int>(neighbor_colors[bestv].size()) && neighbor_colors[bestv][c]) ++c;
    color[bestv] = c;
    for (int u = 0; u < n; ++u) {
      if (g.has_edge(u, bestv)) {
        if (static_cast<int>(neighbor_colors[u].size()) <= c) neighbor_colors[u].resize(c + 1, false);
        neighbor_colors[u][c] = true;
      }
    }
  }
  return color;
}

ChromaticResult chromatic_number(const GraphRealization& g, int exact_limit) {
  ChromaticResult r;
  if (g.n() == 0) return r;
  r.lower = clique_number(g);
  auto greedy = dsatur_coloring(g);
  r.upper = 1 + *std::max_element(greedy.begin(), greedy.end());
  if (r.lower == r.upper) {
    r.exact = true;
    return r;
  }
  if (g.n() <= exact_limit) {
    r.upper = ChromaticSolver(g, r.lower).solve(r.upper);
    r.lower = r.upper;
    r.exact = true;
  }
  return r;
}

int connected_components(const GraphRealization& g) {
  int n = g.n();
  std::vector<bool> seen(n, false);
  std::vector<int> stack;
  int comps = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++comps;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      const std::uint64_t* row = g.row(v);
      for (int w = 0; w < g.words(); ++w) {
        std::uint64_t bits = row[w];
        while (bits) {
          int u = (w << 6) + std::countr_zero(bits);
          bits &= bits - 1;
          if (!seen[u]) {
            seen[u] = true;
            stack.push_back(u);
          }
        }
      }
    }
  }
  return comps;
}

bool is_connected(const GraphRealization& g) { return connected_components(g) == 1; }

std::vector<int> isolated_vertices(const GraphRealization& g) {
  std::vector<int> iso;
  for (int v = 0; v < g.n(); ++v)
    if (g.degree(v) == 0) iso.push_back(v);
  return iso;
}

double matula_omega(int n) {
  if (n < 2) throw std::invalid_argument("matula_omega: n >= 2 required");
  double l = std::log2(static_cast<double>(n));
  return 2.0 * l - 2.0 * std::log2(l) + 2.0 * std::log2(std::exp(1.0)) - 1.0;
}

double matula_omega_density(int n, double p) {
  if (n < 2) throw std::invalid_argument("matula_omega_density: n >= 2 required");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("matula_omega_density: p in (0,1)");
  double base = std::log(1.0 / p);
  auto logb = [base](double x) { return std::log(x) / base; };
  double l = logb(static_cast<double>(n));
  if (!(l > 0.0)) throw std::domain_error("matula_omega_density: log_{1/p} n must be positive");
  return 2.0 * l - 2.0 * logb(l) + 2.0 * logb(std::exp(1.0) / 2.0) + 1.0;
}

double bollobas_chromatic_scale(int n) {
  if (n < 2) throw std::invalid_argument("bollobas_chromatic_scale: n >= 2 required");
  return n / (2.0 * std::log2(static_cast<double>(n)));
}

MetricReport compute_metrics(const GraphRealization& g, int chromatic_exact_limit) {
  MetricReport r;
  r.n = g.n();
  r.edges = g.edge_count();
  r.clique = clique_number(g);
  r.chromatic = chromatic_number(g, chromatic_exact_limit);
  r.components = connected_components(g);
  r.isolated = isolated_vertices(g);
  r.connected = (r.components == 1);
  return r;
}

std::string to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["edges"] = r.edges;
  j["clique"] = r.clique;
  j["chromatic"] = {{"lower", r.chromatic.lower}, {"upper", r.chromatic.upper}, {"exact", r.chromatic.exact}};
  j["components"] = r.components;
  j["isolated"] = r.isolated;
  j["connected"] = r.connected;
  return j.dump();
}

}  // namespace exrot
