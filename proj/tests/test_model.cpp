#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "exrot/model.hpp"
#include "exrot/rng.hpp"

using namespace exrot;

namespace {

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("EdgeKey normalizes order and rejects loops") {
  EdgeKey a(3, 1);
  CHECK(a.i == 1);
  CHECK(a.j == 3);
  CHECK(a == EdgeKey(1, 3));
  CHECK(EdgeKey(0, 1) < EdgeKey(0, 2));
  CHECK(EdgeKey(0, 5) < EdgeKey(1, 2));
  CHECK_THROWS_AS(EdgeKey(2, 2), std::invalid_argument);
}

TEST_CASE("edge_index ranks pairs lexicographically") {
  const int n = 7;
  auto edges = all_edges(n);
  CHECK(static_cast<int>(edges.size()) == edge_count_of(n));
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    CHECK(edge_index(n, edges[k]) == k);
  }
  CHECK(edge_index(n, EdgeKey(0, 1)) == 0);
  CHECK(edge_index(n, EdgeKey(5, 6)) == edge_count_of(n) - 1);
}

TEST_CASE("density specs") {
  CHECK(DensitySpec::fixed(0.25).edge_probability(100) == 0.25);
  double p = DensitySpec::connectivity(1.5).edge_probability(50);
  CHECK(p == doctest::Approx(1.5 * std::log(50.0) / 50.0).epsilon(1e-15));
  CHECK_THROWS_AS(DensitySpec::fixed(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DensitySpec::fixed(1.0), std::invalid_argument);
  CHECK_THROWS_AS(DensitySpec::connectivity(-1.0), std::invalid_argument);
}

TEST_CASE("ensemble sampling is seed-deterministic") {
  auto a = EdgeVectorEnsemble::sample(6, 3, 42);
  auto b = EdgeVectorEnsemble::sample(6, 3, 42);
  auto c = EdgeVectorEnsemble::sample(6, 3, 43);
  CHECK(a.edge_count() == 15);
  bool all_equal = true, any_diff = false;
  for (int e = 0; e < a.edge_count(); ++e) {
    auto va = a.edge_vector(e), vb = b.edge_vector(e), vc = c.edge_vector(e);
    for (int k = 0; k < 3; ++k) {
      all_equal = all_equal && va[k] == vb[k];
      any_diff = any_diff || va[k] != vc[k];
      CHECK(std::isfinite(va[k]));
    }
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("ensemble entries depend only on (seed, edge, coordinate)") {
  // growing n keeps earlier edges' vectors only when the edge index is
  // unchanged; the hash is keyed on the index, so same index = same vector
  auto small = EdgeVectorEnsemble::sample(5, 4, 9);
  auto large = EdgeVectorEnsemble::sample(9, 4, 9);
  auto v_small = small.edge_vector(EdgeKey(0, 1));
  auto v_large = large.edge_vector(0);
  for (int k = 0; k < 4; ++k) CHECK(v_small[k] == v_large[k]);
}

TEST_CASE("ensemble file round trip is exact and byte-stable") {
  auto ens = EdgeVectorEnsemble::sample(8, 5, 1234);
  std::string p1 = "test_ens_a.bin", p2 = "test_ens_b.bin";
  ens.write_file(p1);
  ens.write_file(p2);
  CHECK(read_bytes(p1) == read_bytes(p2));

  auto back = EdgeVectorEnsemble::read_file(p1);
  CHECK(back.n() == 8);
  CHECK(back.d() == 5);
  CHECK(back.seed() == 1234);
  for (int e = 0; e < ens.edge_count(); ++e)
    for (int k = 0; k < 5; ++k) CHECK(back.edge_vector(e)[k] == ens.edge_vector(e)[k]);

  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("reading a corrupt ensemble file fails cleanly") {
  std::string path = "test_ens_bad.bin";
  {
    std::ofstream out(path, std::ios::binary);
    out << "not an ensemble";
  }
  CHECK_THROWS_AS(EdgeVectorEnsemble::read_file(path), IoError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(EdgeVectorEnsemble::read_file("does_not_exist.bin"), IoError);
}

TEST_CASE("graph realization matches edge margins") {
  auto ens = EdgeVectorEnsemble::sample(9, 4, 77);
  Direction s{0.5, -0.5, 0.5, 0.5};
  normalize(s);
  double t = 0.3;
  GraphRealization g = realize_graph(ens, s, t);
  auto margins = edge_margins(ens, s, t);
  auto edges = all_edges(9);
  long count = 0;
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    bool present = margins[k] >= 0.0;
    CHECK(g.has_edge(edges[k].i, edges[k].j) == present);
    CHECK(g.has_edge(edges[k].j, edges[k].i) == present);
    CHECK(edge_margin(ens, s, t, edges[k]) == doctest::Approx(margins[k]).epsilon(1e-15));
    count += present;
  }
  CHECK(g.edge_count() == count);
}

TEST_CASE("axis realization thresholds the first coordinate") {
  auto ens = EdgeVectorEnsemble::sample(7, 3, 5);
  GraphRealization g = realize_graph(ens, axis_direction(3), 0.25);
  auto edges = all_edges(7);
  for (const auto& e : edges) {
    bool want = ens.edge_vector(e)[0] >= 0.25;
    CHECK(g.has_edge(e.i, e.j) == want);
  }
}

TEST_CASE("graph adjacency bookkeeping") {
  GraphRealization g(5);
  g.set_edge(0, 1);
  g.set_edge(1, 2);
  g.set_edge(3, 4);
  CHECK(g.has_edge(1, 0));
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(4) == 1);
  CHECK(g.edge_count() == 3);
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("normalize rejects near-zero input") {
  Direction z{0.0, 0.0};
  CHECK_THROWS_AS(normalize(z), std::domain_error);
  Direction v{3.0, 4.0};
  normalize(v);
  CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v[0] == doctest::Approx(0.6).epsilon(1e-15));
}
