// Release gate: one check per shipping criterion, each printing a single
// [PASS]/[FAIL] line with its wall time. Exit code is the failure count.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "exrot/experiments.hpp"
#include "exrot/metrics.hpp"
#include "exrot/model.hpp"
#include "exrot/rng.hpp"
#include "exrot/search.hpp"
#include "exrot/shatter.hpp"
#include "exrot/special.hpp"
#include "exrot/sphere.hpp"
#include "exrot/verify.hpp"

using namespace exrot;

namespace {

using Verdict = std::pair<bool, std::string>;

int failures = 0;

template <typename Fn>
void criterion(const char* name, Fn&& fn) {
  auto began = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    Verdict v = fn();
    ok = v.first;
    detail = std::move(v.second);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - began).count();
  if (ok) {
    std::printf("[PASS] %s: %s (%.2f s)\n", name, detail.c_str(), secs);
  } else {
    std::fprintf(stderr, "[FAIL] %s: %s (%.2f s)\n", name, detail.c_str(), secs);
    ++failures;
  }
  std::fflush(stdout);
  std::fflush(stderr);
}

std::string fraction(int got, int total) {
  return std::to_string(got) + "/" + std::to_string(total);
}

constexpr double kPi = 3.14159265358979323846;

// 20 Gaussian point sets across N in [3,10], d in [1,4]: the enumerated
// dichotomy count must equal the closed form exactly.
Verdict sign_pattern_count_exact() {
  for (int rep = 0; rep < 20; ++rep) {
    int N = 3 + rep % 8;
    int d = 1 + rep / 5;
    RngStream rng = derive_stream(1001 + rep, kDomainTrial);
    std::vector<Direction> pts(N, Direction(d));
    for (auto& x : pts)
      for (auto& c : x) c = normal_from_bits(rng.next_u64());
    SignPatternSet set = enumerate_sign_patterns(pts);
    if (BigInt(set.patterns.size()) != schlafli_count(N, d))
      return {false, "count mismatch at N=" + std::to_string(N) + ", d=" + std::to_string(d)};
  }
  return {true, "20/20 point sets enumerate to the closed-form count"};
}

// n = 10, d = 32, four random edges: every one of the 16 on/off patterns
// must be realizable with a verifying certificate on >= 99 of 100 ensembles.
Verdict shattering_small_sets() {
  const auto edges_all = all_edges(10);
  int good = 0;
  for (int s = 0; s < 100; ++s) {
    auto ens = EdgeVectorEnsemble::sample(10, 32, 2000 + s);
    RngStream rng = derive_stream(2000 + s, kDomainSearch);
    std::vector<int> idx;
    while (static_cast<int>(idx.size()) < 4) {
      int e = static_cast<int>(rng.next_u64() % edges_all.size());
      if (std::find(idx.begin(), idx.end(), e) == idx.end()) idx.push_back(e);
    }
    bool all_ok = true;
    for (int mask = 0; mask < 16 && all_ok; ++mask) {
      ShatterRequest req;
      req.t = 1.0;
      for (int k = 0; k < 4; ++k) {
        req.edges.push_back(edges_all[idx[k]]);
        req.present.push_back(static_cast<std::uint8_t>((mask >> k) & 1));
      }
      SolveOutcome out = solve_sign_pattern(ens, req);
      if (out.status != SolveStatus::Success || !out.certificate ||
          !verify_certificate(ens, *out.certificate)) {
        all_ok = false;
        break;
      }
      GraphRealization g = realize_graph(ens, out.certificate->s, req.t);
      for (int k = 0; k < 4; ++k)
        if (g.has_edge(req.edges[k].i, req.edges[k].j) != (req.present[k] != 0)) {
          all_ok = false;
          break;
        }
    }
    good += all_ok;
  }
  return {good >= 99, fraction(good, 100) + " ensembles shatter all 16 patterns (need >= 99)"};
}

// n = 40, p = 1/2, d = 45 >= C(10,2): a 10-clique direction must exist for
// every seed even though the typical clique number rounds to 8.
Verdict forced_clique_above_typical() {
  const double t = threshold_from_density(0.5);
  int good = 0;
  for (int s = 0; s < 100; ++s) {
    auto ens = EdgeVectorEnsemble::sample(40, 45, 3000 + s);
    SearchResult res = force_clique_direction(ens, 10, t);
    if (!res.success) continue;
    GraphRealization g = realize_graph(ens, res.best_s, t);
    good += clique_number(g) >= 10;
  }
  long typical = std::lround(matula_omega(40));
  bool ok = good == 100 && typical == 8;
  return {ok, fraction(good, 100) + " seeds realize a 10-clique (typical value rounds to " +
                  std::to_string(typical) + ")"};
}

// n = 12, four balanced classes, d = 24, t = 0: the witness partition must
// be a proper 4-coloring on >= 95 of 100 seeds.
Verdict forced_coloring_below_typical() {
  int good = 0;
  for (int s = 0; s < 100; ++s) {
    auto ens = EdgeVectorEnsemble::sample(12, 24, 4000 + s);
    SearchResult res = force_coloring_direction(ens, 4, 0.0);
    if (!res.success) continue;
    GraphRealization g = realize_graph(ens, res.best_s, 0.0);
    bool proper = true;
    for (int i = 0; i < 12 && proper; ++i)
      for (int j = i + 1; j < 12; ++j)
        if (i % 4 == j % 4 && g.has_edge(i, j)) {
          proper = false;
          break;
        }
    good += proper && chromatic_number(g).value() <= 4;
  }
  return {good >= 95, fraction(good, 100) + " witnesses give a proper 4-coloring (need >= 95)"};
}

// n = 16, p = 0.05, d = 400: a spanning-tree direction connects the graph
// while the axis baseline is almost always disconnected.
Verdict spanning_tree_connectivity() {
  const double t = threshold_from_density(0.05);
  int wit_conn = 0, base_disc = 0;
  for (int s = 0; s < 100; ++s) {
    auto ens = EdgeVectorEnsemble::sample(16, 400, 5000 + s);
    base_disc += !is_connected(realize_graph(ens, axis_direction(400), t));
    SolveOutcome out = realize_spanning_tree(ens, t);
    if (out.status == SolveStatus::Success && out.certificate)
      wit_conn += is_connected(realize_graph(ens, out.certificate->s, t));
  }
  bool ok = wit_conn >= 95 && base_disc >= 95;
  return {ok, fraction(wit_conn, 100) + " witnesses connected, " + fraction(base_disc, 100) +
                  " baselines disconnected (both need >= 95)"};
}

// Exact two-sided tail ratio bounds on the full default grid.
Verdict gaussian_tail_sandwich() {
  BoundCheckReport rep = gaussian_tail_sandwich_check();
  bool ok = rep.satisfied && rep.rows.size() == 50u * 31u;
  std::ostringstream os;
  os << rep.rows.size() << " grid cells within 1e-12 relative";
  return {ok, os.str()};
}

// Cap area closed form against Monte Carlo on a (d, alpha) grid, plus the
// elementary d = 3 formula.
Verdict cap_area_formula() {
  int idx = 0;
  for (int d : {2, 3, 5, 10})
    for (double alpha : {kPi / 6.0, kPi / 3.0, kPi / 2.0}) {
      BoundCheckReport rep = cap_area_mc_check(d, alpha, 1000000, 6000 + idx++);
      if (!rep.satisfied)
        return {false, "MC outside 4 SE at d=" + std::to_string(d) +
                           ", alpha=" + std::to_string(alpha)};
    }
  for (int i = 1; i <= 31; ++i) {
    double alpha = 0.1 * i;
    if (std::abs(cap_area_fraction(3, alpha) - 0.5 * (1.0 - std::cos(alpha))) > 1e-10)
      return {false, "d=3 closed form off at alpha=" + std::to_string(alpha)};
  }
  return {true, "12 MC cells within 4 SE; d=3 matches (1-cos)/2 to 1e-10"};
}

// Inclusion-exclusion oracle: exact small-n forms and an n = 30 MC check.
Verdict isolated_vertex_oracle() {
  for (int i = 1; i <= 19; ++i) {
    double p = 0.05 * i;
    double q = 1.0 - p;
    double closed = p * p * p + 3.0 * p * p * q;
    if (std::abs(isolated_prob_exact(3, p) - closed) > 1e-12)
      return {false, "n=3 closed form off at p=" + std::to_string(p)};
  }
  BoundCheckReport rep = isolated_exact_check(100000, 8000);
  return {rep.satisfied, "n=3 grid exact to 1e-12; n=30 MC within 4 SE"};
}

// Perturbed-direction envelope: the inclusion chain never breaks and both
// cap marginals respect their (1 -+ eps') p budgets.
Verdict domination_envelope() {
  BoundCheckReport rep = domination_check(16, 2.0, 0.2, 1000000, 9000, 10.0);
  std::ostringstream os;
  os << "1e6 trials, min slack " << rep.slack;
  return {rep.satisfied, os.str()};
}

// Fixed seeds across d in {2,4,8,12} at p = 1.5 log(50)/50: the rate of
// finding a disconnecting direction must grow with the dimension.
Verdict disconnection_monotone_in_d() {
  const int dims[4] = {2, 4, 8, 12};
  const double p = 1.5 * std::log(50.0) / 50.0;
  const double t = threshold_from_density(p);
  int found[4] = {0, 0, 0, 0};
  for (int s = 0; s < 50; ++s) {
    std::uint64_t seed = 10000 + static_cast<std::uint64_t>(s);
    for (int di = 0; di < 4; ++di) {
      auto ens = EdgeVectorEnsemble::sample(50, dims[di], seed);
      SearchBudget budget;
      budget.max_evaluations = 400;
      budget.seed = seed;
      SearchResult res = find_isolated_direction(ens, t, budget);
      if (!res.success) continue;
      GraphRealization g = realize_graph(ens, res.best_s, t);
      found[di] += !isolated_vertices(g).empty();
    }
  }
  bool mono = found[0] <= found[1] && found[1] <= found[2] && found[2] <= found[3];
  bool strict = found[3] > found[0];
  std::ostringstream os;
  os << "found " << found[0] << "/" << found[1] << "/" << found[2] << "/" << found[3]
     << " of 50 at d=2/4/8/12";
  return {mono && strict, os.str()};
}

std::string slurp_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Same inputs must give the same bytes: sweeps across job counts, repeated
// verification suites, repeated baselines, repeated ensemble files.
Verdict byte_determinism() {
  ExperimentConfig cfg = parse_config(
      "name = determinism\nn = 9\nd = 6, 12\np = 0.5\nproperty = chromatic\n"
      "regime = subcritical\ntarget = 3\nrepeats = 2\nseed = 21\n");
  SweepOutcome a = run_threshold_sweep(cfg, 1);
  SweepOutcome b = run_threshold_sweep(cfg, 2);
  if (rows_to_csv(a.rows) != rows_to_csv(b.rows)) return {false, "sweep CSV depends on jobs"};
  if (to_json(a, cfg) != to_json(b, cfg)) return {false, "sweep JSON depends on jobs"};

  VerificationOptions opt;
  opt.tags = {"tail_sandwich", "cap_band"};
  opt.trials = 20000;
  opt.seed = 3;
  if (to_csv(run_verification_suite(opt)) != to_csv(run_verification_suite(opt)))
    return {false, "verification CSV not reproducible"};

  if (to_json(er_baseline(12, 0.3, 40, 7)) != to_json(er_baseline(12, 0.3, 40, 7)))
    return {false, "baseline JSON not reproducible"};

  auto dir = std::filesystem::temp_directory_path();
  auto pa = dir / "exrot_acceptance_a.bin";
  auto pb = dir / "exrot_acceptance_b.bin";
  auto ens = EdgeVectorEnsemble::sample(8, 5, 99);
  ens.write_file(pa.string());
  ens.write_file(pb.string());
  bool same = slurp_bytes(pa) == slurp_bytes(pb);
  std::filesystem::remove(pa);
  std::filesystem::remove(pb);
  if (!same) return {false, "ensemble file bytes not reproducible"};
  return {true, "sweep, verification, baseline and file outputs are byte-stable"};
}

}  // namespace

int main() {
  criterion("sign_pattern_count_exact", sign_pattern_count_exact);
  criterion("shattering_small_sets", shattering_small_sets);
  criterion("forced_clique_above_typical", forced_clique_above_typical);
  criterion("forced_coloring_below_typical", forced_coloring_below_typical);
  criterion("spanning_tree_connectivity", spanning_tree_connectivity);
  criterion("gaussian_tail_sandwich", gaussian_tail_sandwich);
  criterion("cap_area_formula", cap_area_formula);
  criterion("isolated_vertex_oracle", isolated_vertex_oracle);
  criterion("domination_envelope", domination_envelope);
  criterion("disconnection_monotone_in_d", disconnection_monotone_in_d);
  criterion("byte_determinism", byte_determinism);
  std::printf("acceptance: %d/11 passed\n", 11 - failures);
  return failures;
}
