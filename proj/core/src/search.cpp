#include "exrot/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "exrot/metrics.hpp"
#include "exrot/sphere.hpp"

namespace exrot {

double evaluate_functional(const GraphFunctional& f, const GraphRealization& g) {
  switch (f.kind) {
    case FunctionalKind::CliqueNumber:
      return clique_number(g);
    case FunctionalKind::ChromaticNumber:
      return chromatic_number(g, f.chromatic_exact_limit).value();
    case FunctionalKind::IsolatedCount:
      return static_cast<double>(isolated_vertices(g).size());
    case FunctionalKind::Connected:
      return is_connected(g) ? 1.0 : 0.0;
  }
  return 0.0;
}

namespace {

bool better(const GraphFunctional& f, double cand, double best) {
  return f.sense == OptimizeSense::Maximize ? cand > best : cand < best;
}

double worst_value(const GraphFunctional& f) {
  return f.sense == OptimizeSense::Maximize ? -std::numeric_limits<double>::infinity()
                                            : std::numeric_limits<double>::infinity();
}

// Sweeps a fixed point list; first point achieving the extremum wins.
void sweep_points(const EdgeVectorEnsemble& ens, double t, const GraphFunctional& f,
                  const std::vector<Direction>& points, long max_evals, SearchResult& out) {
  for (const auto& s : points) {
    if (out.evaluations >= max_evals) break;
    GraphRealization g = realize_graph(ens, s, t);
    double v = evaluate_functional(f, g);
    ++out.evaluations;
    if (out.best_s.empty() || better(f, v, out.best_value)) {
      out.best_value = v;
      out.best_s = s;
    }
  }
}

// Secondary score used to escape plateaus of the integer functional; larger
// is closer to an improvement.
double tiebreak_score(const EdgeVectorEnsemble& ens, const GraphFunctional& f,
                      const GraphRealization& g, const std::vector<double>& margins) {
  const int n = ens.n();
  switch (f.kind) {
    case FunctionalKind::IsolatedCount: {
      // Distance of the most nearly isolated vertex from isolation.
      double best = std::numeric_limits<double>::infinity();
      for (int v = 0; v < n; ++v) {
        if (g.degree(v) == 0) continue;
        double excess = 0.0;
        for (int u = 0; u < n; ++u) {
          if (u == v) continue;
          double m = margins[edge_index(n, EdgeKey(u, v))];
          if (m >= 0.0) excess += m;
        }
        best = std::min(best, excess);
      }
      return std::isfinite(best) ? -best : 0.0;
    }
    case FunctionalKind::Connected: {
      if (f.sense == OptimizeSense::Maximize) {
        // Largest (least negative) absent margin across the smallest
        // component's cut; -inf never occurs for n >= 2.
        if (is_connected(g)) return 0.0;
        double best = -std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v)
          for (int u = 0; u < n; ++u) {
            if (u == v || g.has_edge(u, v)) continue;
            best = std::max(best, margins[edge_index(n, EdgeKey(u, v))]);
          }
        return best - 1.0;  // stay below the connected score 0
      }
      return 0.0;
    }
    default:
      return 0.0;
  }
}

struct Proposal {
  int edge = 0;
  double sign = 1.0;  // +1 pushes the edge above the threshold
};

// Bottleneck edges whose margin flip is most likely to improve f.
std::vector<Proposal> bottleneck_proposals(const EdgeVectorEnsemble& ens, const GraphFunctional& f,
                                           const GraphRealization& g,
                                           const std::vector<double>& margins) {
  const int n = ens.n();
  std::vector<Proposal> props;
  auto push_sorted = [&](std::vector<std::pair<double, Proposal>>& cand, std::size_t keep) {
    std::sort(cand.begin(), cand.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < std::min(keep, cand.size()); ++i) props.push_back(cand[i].second);
  };

  switch (f.kind) {
    case FunctionalKind::IsolatedCount: {
      // Attack the most nearly isolated vertex: drop its present edges,
      // cheapest margin first.
      int bestv = -1;
      double best_excess = std::numeric_limits<double>::infinity();
      for (int v = 0; v < n; ++v) {
        if (g.degree(v) == 0) continue;
        double excess = 0.0;
        for (int u = 0; u < n; ++u) {
          if (u == v) continue;
          double m = margins[edge_index(n, EdgeKey(u, v))];
          if (m >= 0.0) excess += m;
        }
        if (excess < best_excess) {
          best_excess = excess;
          bestv = v;
        }
      }
      if (bestv < 0) return props;
      std::vector<std::pair<double, Proposal>> cand;
      for (int u = 0; u < n; ++u) {
        if (u == bestv) continue;
        int e = edge_index(n, EdgeKey(u, bestv));
        if (margins[e] >= 0.0) cand.push_back({margins[e], Proposal{e, -1.0}});
      }
      push_sorted(cand, 4);
      return props;
    }
    case FunctionalKind::CliqueNumber: {
      // Greedy maximal clique, then the outside vertex with the fewest
      // missing edges; push those messages above the threshold.
      std::vector<int> order(n);
      for (int i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        int da = g.degree(a), db = g.degree(b);
        return da != db ? da > db : a < b;
      });
      std::vector<int> clique;
      for (int v : order) {
        bool ok = true;
        for (int c : clique)
          if (!g.has_edge(v, c)) {
            ok = false;
            break;
          }
        if (ok) clique.push_back(v);
      }
      int bestu = -1;
      double best_deficit = std::numeric_limits<double>::infinity();
      std::vector<int> best_missing;
      for (int u = 0; u < n; ++u) {
        if (std::find(clique.begin(), clique.end(), u) != clique.end()) continue;
        double deficit = 0.0;
        std::vector<int> missing;
        for (int c : clique)
          if (!g.has_edge(u, c)) {
            int e = edge_index(n, EdgeKey(u, c));
            deficit += -margins[e];
            missing.push_back(e);
          }
        if (!missing.empty() && deficit < best_deficit) {
          best_deficit = deficit;
          bestu = u;
          best_missing = std::move(missing);
        }
      }
      if (bestu < 0) return props;
      std::vector<std::pair<double, Proposal>> cand;
      for (int e : best_missing) cand.push_back({-margins[e], Proposal{e, +1.0}});
      push_sorted(cand, 4);
      return props;
    }
    case FunctionalKind::ChromaticNumber: {
      // Vertices forced into the top DSATUR color; delete their cheapest
      // present edges (for minimization).
      auto colors = dsatur_coloring(g);
      int top = *std::max_element(colors.begin(), colors.end());
      std::vector<std::pair<double, Proposal>> cand;
      for (int v = 0; v < n; ++v) {
        if (colors[v] != top) continue;
        for (int u = 0; u < n; ++u) {
          if (u == v || !g.has_edge(u, v)) continue;
          int e = edge_index(n, EdgeKey(u, v));
          double s = (f.sense == OptimizeSense::Minimize) ? -1.0 : 1.0;
          cand.push_back({std::abs(margins[e]), Proposal{e, s}});
        }
      }
      push_sorted(cand, 4);
      return props;
    }
    case FunctionalKind::Connected: {
      // Join the smallest component through its least negative cut edge.
      std::vector<int> comp(n, -1);
      int ncomp = 0;
      for (int s0 = 0; s0 < n; ++s0) {
        if (comp[s0] >= 0) continue;
        std::vector<int> stack{s0};
        comp[s0] = ncomp;
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          for (int u = 0; u < n; ++u)
            if (comp[u] < 0 && g.has_edge(u, v)) {
              comp[u] = ncomp;
              stack.push_back(u);
            }
        }
        ++ncomp;
      }
      if (ncomp == 1) return props;
      std::vector<int> size(ncomp, 0);
      for (int v = 0; v < n; ++v) ++size[comp[v]];
      int smallest = static_cast<int>(std::min_element(size.begin(), size.end()) - size.begin());
      std::vector<std::pair<double, Proposal>> cand;
      for (int v = 0; v < n; ++v) {
        if (comp[v] != smallest) continue;
        for (int u = 0; u < n; ++u) {
          if (comp[u] == smallest) continue;
          int e = edge_index(n, EdgeKey(u, v));
          double s = (f.sense == OptimizeSense::Maximize) ? +1.0 : -1.0;
          cand.push_back({-margins[e], Proposal{e, s}});
        }
      }
      push_sorted(cand, 4);
      return props;
    }
  }
  return props;
}

}  // namespace

SearchResult sweep_net(const EdgeVectorEnsemble& ens, double t, const GraphFunctional& f,
                       double eta, const SearchBudget& budget) {
  CoveringNet net = build_covering_net(ens.d(), eta, std::max<long>(budget.max_evaluations, 64),
                                       budget.seed);
  SearchResult out;
  out.best_value = worst_value(f);
  out.strategy_used = "net_sweep";
  sweep_points(ens, t, f, net.points, budget.max_evaluations, out);
  out.success = !out.best_s.empty();
  return out;
}

SearchResult sweep_packing(const EdgeVectorEnsemble& ens, double t, const GraphFunctional& f,
                           double theta, const SearchBudget& budget) {
  Packing pack = build_packing(ens.d(), theta, std::max<long>(budget.max_evaluations, 64),
                               budget.seed);
  SearchResult out;
  out.best_value = worst_value(f);
  out.strategy_used = "packing_sweep";
  sweep_points(ens, t, f, pack.points, budget.max_evaluations, out);
  out.success = !out.best_s.empty();
  return out;
}

SearchResult local_refine(const EdgeVectorEnsemble& ens, double t, const GraphFunctional& f,
                          const Direction& start, int steps, long max_evaluations) {
  if (static_cast<int>(start.size()) != ens.d())
    throw std::invalid_argument("local_refine: start dimension mismatch");
  long eval_cap = max_evaluations < 0 ? steps + 1 : max_evaluations;
  SearchResult out;
  out.strategy_used = "local_refine";

  Direction cur = start;
  normalize(cur);
  GraphRealization g = realize_graph(ens, cur, t);
  std::vector<double> margins = edge_margins(ens, cur, t);
  double cur_value = evaluate_functional(f, g);
  double cur_tie = tiebreak_score(ens, f, g, margins);
  ++out.evaluations;

  out.best_s = cur;
  out.best_value = cur_value;

  double gamma = 1.0 / std::sqrt(static_cast<double>(ens.d()));
  for (int step = 0; step < steps && out.evaluations < eval_cap; ++step) {
    auto props = bottleneck_proposals(ens, f, g, margins);
    if (props.empty()) break;
    const Proposal& pr = props[std::min<std::size_t>(step % props.size(), props.size() - 1)];
    auto xe = ens.edge_vector(pr.edge);
    double xnorm = norm(xe);
    if (!(xnorm > 0.0)) break;
    Direction cand = cur;
    for (int c = 0; c < ens.d(); ++c) cand[c] += pr.sign * gamma * xe[c] / xnorm;
    normalize(cand);

    GraphRealization g2 = realize_graph(ens, cand, t);
    std::vector<double> margins2 = edge_margins(ens, cand, t);
    double v2 = evaluate_functional(f, g2);
    double tie2 = tiebreak_score(ens, f, g2, margins2);
    ++out.evaluations;

    bool accept = better(f, v2, cur_value) || (v2 == cur_value && tie2 > cur_tie);
    if (accept) {
      cur = std::move(cand);
      g = std::move(g2);
      margins = std::move(margins2);
      cur_value = v2;
      cur_tie = tie2;
      if (better(f, cur_value, out.best_value)) {
        out.best_value = cur_value;
        out.best_s = cur;
      }
    } else {
      gamma = std::max(gamma * 0.5, 1e-4);
    }
  }
  out.success = true;
  return out;
}

SearchResult exact_extremes_small(const EdgeVectorEnsemble& ens, const GraphFunctional& f) {
  const int n = ens.n();
  const int m = ens.edge_count();
  if (m > 12 || ens.d() > 6)
    throw std::invalid_argument("exact_extremes_small: supported for C(n,2) <= 12, d <= 6");
  std::vector<Direction> points(m);
  for (int e = 0; e < m; ++e) {
    auto x = ens.edge_vector(e);
    points[e].assign(x.begin(), x.end());
  }
  SignPatternSet patterns = enumerate_sign_patterns(points);
  SearchResult out;
  out.strategy_used = "exact_enumeration";
  out.best_value = worst_value(f);
  for (std::size_t idx = 0; idx < patterns.patterns.size(); ++idx) {
    GraphRealization g(n);
    std::uint64_t mask = patterns.patterns[idx];
    int e = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++e)
        if ((mask >> e) & 1u) g.set_edge(i, j);
    double v = evaluate_functional(f, g);
    ++out.evaluations;
    if (out.best_s.empty() || better(f, v, out.best_value)) {
      out.best_value = v;
      out.best_s = patterns.witnesses[idx];
    }
  }
  out.success = true;
  return out;
}

SearchResult force_clique_direction(const EdgeVectorEnsemble& ens, int k, double t,
                                    const std::vector<int>* vertices, double margin) {
  if (k < 2 || k > ens.n()) throw std::invalid_argument("force_clique_direction: 2 <= k <= n");
  std::vector<int> vs;
  if (vertices) {
    vs = *vertices;
    if (static_cast<int>(vs.size()) != k)
      throw std::invalid_argument("force_clique_direction: vertex set size != k");
  } else {
    vs.resize(k);
    for (int i = 0; i < k; ++i) vs[i] = i;
  }
  ShatterRequest req;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) req.edges.emplace_back(vs[a], vs[b]);
  req.present.assign(req.edges.size(), 1);
  req.t = t;
  req.margin = margin;

  SearchResult out;
  out.strategy_used = "solver_seeded";
  SolveOutcome solved = solve_sign_pattern(ens, req);
  if (solved.status != SolveStatus::Success) {
    out.success = false;
    return out;
  }
  out.best_s = solved.certificate->s;
  GraphRealization g = realize_graph(ens, out.best_s, t);
  out.best_value = static_cast<double>(clique_number(g));
  out.evaluations = 1;
  out.success = true;
  out.certificate = std::move(solved.certificate);
  return out;
}

SearchResult force_coloring_direction(const EdgeVectorEnsemble& ens, int k, double t,
                                      double margin) {
  const int n = ens.n();
  if (k < 1 || k > n) throw std::invalid_argument("force_coloring_direction: 1 <= k <= n");
  ShatterRequest req;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (i % k == j % k) req.edges.emplace_back(i, j);
  req.present.assign(req.edges.size(), 0);
  req.t = t;
  req.margin = margin;

  SearchResult out;
  out.strategy_used = "solver_seeded";
  SolveOutcome solved = solve_sign_pattern(ens, req);
  if (solved.status != SolveStatus::Success) {
    out.success = false;
    return out;
  }
  out.best_s = solved.certificate->s;
  GraphRealization g = realize_graph(ens, out.best_s, t);
  out.best_value = chromatic_number(g).value();
  out.evaluations = 1;
  out.success = true;
  out.certificate = std::move(solved.certificate);
  return out;
}

SearchResult find_isolated_direction(const EdgeVectorEnsemble& ens, double t,
                                     const SearchBudget& budget) {
  const int n = ens.n();
  const int d = ens.d();
  GraphFunctional f{FunctionalKind::IsolatedCount, OptimizeSense::Maximize};
  SearchResult out;
  out.best_value = worst_value(f);
  out.strategy_used = "packing_sweep";

  double sweep_theta = 0.4;
  int refine_steps = 200;
  for (const auto& st : budget.strategies) {
    if (st.kind == StrategyKind::PackingSweep && st.param > 0.0) sweep_theta = st.param;
    if (st.kind == StrategyKind::LocalRefine && st.param > 0.0)
      refine_steps = static_cast<int>(st.param);
  }

  // Phase 1: spread-out sweep.
  long sweep_cap = std::max<long>(budget.max_evaluations * 2 / 5, 1);
  Packing pack = build_packing(d, sweep_theta, static_cast<int>(std::min<long>(sweep_cap * 3, 100000)),
                               budget.seed);
  sweep_points(ens, t, f, pack.points, sweep_cap, out);

  // Phase 2: per-vertex subgradient descent on max_{e ~ v} <X_e, s>; cheap
  // margin updates, one functional evaluation per vertex at the end.
  std::string best_phase = "packing_sweep";
  for (int v = 0; v < n && out.evaluations < budget.max_evaluations; ++v) {
    std::vector<int> inc;
    inc.reserve(n - 1);
    for (int u = 0; u < n; ++u)
      if (u != v) inc.push_back(edge_index(n, EdgeKey(u, v)));

    Direction s(d, 0.0);
    for (int e : inc) {
      auto x = ens.edge_vector(e);
      double xn = norm(x);
      for (int c = 0; c < d; ++c) s[c] -= x[c] / xn;
    }
    if (norm(s) < 1e-12) continue;
    normalize(s);

    Direction best_s_v = s;
    double best_max = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 160; ++iter) {
      int argmax = -1;
      double mx = -std::numeric_limits<double>::infinity();
      for (int e : inc) {
        double ip = ens.inner(e, s);
        if (ip > mx) {
          mx = ip;
          argmax = e;
        }
      }
      if (mx < best_max) {
        best_max = mx;
        best_s_v = s;
        if (mx < t - 1e-9) break;  // vertex isolated with slack
      }
      auto x = ens.edge_vector(argmax);
      double xn = norm(x);
      double gamma = 1.2 / std::sqrt(static_cast<double>(iter + 4));
      for (int c = 0; c < d; ++c) s[c] -= gamma * x[c] / xn;
      double sn = norm(s);
      if (sn < 1e-12) break;
      for (double& val : s) val /= sn;
    }
    GraphRealization g = realize_graph(ens, best_s_v, t);
    double val = evaluate_functional(f, g);
    ++out.evaluations;
    if (out.best_s.empty() || better(f, val, out.best_value)) {
      out.best_value = val;
      out.best_s = best_s_v;
      best_phase = "vertex_descent";
    }
  }

  // Phase 3: refine the incumbent.
  if (!out.best_s.empty() && out.evaluations < budget.max_evaluations) {
    SearchResult refined = local_refine(ens, t, f, out.best_s, refine_steps,
                                        budget.max_evaluations - out.evaluations);
    out.evaluations += refined.evaluations;
    if (better(f, refined.best_value, out.best_value)) {
      out.best_value = refined.best_value;
      out.best_s = refined.best_s;
      best_phase = "local_refine";
    }
  }

  out.strategy_used = best_phase;
  out.success = !out.best_s.empty() && out.best_value >= 1.0;
  return out;
}

std::string to_json(const SearchResult& r) {
  nlohmann::ordered_json j;
  j["kind"] = "search_result";
  j["best_s"] = r.best_s;
  j["best_value"] = r.best_value;
  j["evaluations"] = r.evaluations;
  j["strategy_used"] = r.strategy_used;
  j["success"] = r.success;
  if (r.certificate) j["certificate"] = nlohmann::json::parse(to_json(*r.certificate));
  return j.dump();
}

}  // namespace exrot
