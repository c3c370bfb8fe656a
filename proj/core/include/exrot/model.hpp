#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace exrot {

using Direction = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
// Scales to unit length; throws std::domain_error on (near-)zero input.
void normalize(Direction& v);
Direction axis_direction(int d, int axis = 0);

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unordered vertex pair, stored with i < j.
struct EdgeKey {
  int i = 0;
  int j = 0;

  EdgeKey() = default;
  EdgeKey(int a, int b) : i(a < b ? a : b), j(a < b ? b : a) {
    if (a == b) throw std::invalid_argument("EdgeKey: loops not allowed");
  }
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

inline int edge_count_of(int n) { return n * (n - 1) / 2; }

// Lexicographic rank of {i,j} among all pairs on n vertices.
inline int edge_index(int n, EdgeKey e) {
  return e.i * n - e.i * (e.i + 1) / 2 + (e.j - e.i - 1);
}

std::vector<EdgeKey> all_edges(int n);

// Edge density given either as a fixed probability or as the connectivity
// scale p = c * log(n) / n.
struct DensitySpec {
  enum class Kind { FixedP, ConnectivityScale };
  Kind kind = Kind::FixedP;
  double value = 0.5;  // p for FixedP, c for ConnectivityScale

  static DensitySpec fixed(double p);
  static DensitySpec connectivity(double c);
  double edge_probability(int n) const;
};

// Threshold t with 1 - Phi(t) = p, |Phi(t) - (1-p)| <= 1e-12.
double threshold_from_density(double p);

// One standard Gaussian d-vector per vertex pair, materialized from a
// counter-based stream: entry (e, c) depends only on (seed, e, c).
class EdgeVectorEnsemble {
 public:
  static EdgeVectorEnsemble sample(int n, int d, std::uint64_t seed);

  int n() const { return n_; }
  int d() const { return d_; }
  std::uint64_t seed() const { return seed_; }
  int edge_count() const { return m_; }

  std::span<const double> edge_vector(int edge_idx) const {
    return {data_.data() + static_cast<std::size_t>(edge_idx) * d_, static_cast<std::size_t>(d_)};
  }
  std::span<const double> edge_vector(EdgeKey e) const { return edge_vector(edge_index(n_, e)); }

  double inner(int edge_idx, std::span<const double> s) const;

  // Binary format: magic "XGRE", version, n, d, seed, then edge vectors in
  // lexicographic EdgeKey order, doubles little-endian.
  void write_file(const std::string& path) const;
  static EdgeVectorEnsemble read_file(const std::string& path);

 private:
  EdgeVectorEnsemble(int n, int d, std::uint64_t seed);
  int n_ = 0;
  int d_ = 0;
  int m_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> data_;
};

// Where a realization came from; carried for reporting.
struct Provenance {
  std::uint64_t seed = 0;
  Direction s;
  double t = 0.0;
};

// Undirected graph as a bit-adjacency matrix.
class GraphRealization {
 public:
  explicit GraphRealization(int n);

  int n() const { return n_; }
  int words() const { return words_; }
  bool has_edge(int i, int j) const {
    return (rows_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1u;
  }
  void set_edge(int i, int j);
  const std::uint64_t* row(int i) const { return rows_.data() + static_cast<std::size_t>(i) * words_; }
  int degree(int i) const;
  long edge_count() const;

  const std::optional<Provenance>& provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> rows_;
  std::optional<Provenance> provenance_;
};

// Edge {i,j} present iff <X_ij, s> >= t (ties count as present).
GraphRealization realize_graph(const EdgeVectorEnsemble& ens, const Direction& s, double t);

// Signed margins <X_e, s> - t in lexicographic edge order.
std::vector<double> edge_margins(const EdgeVectorEnsemble& ens, const Direction& s, double t);
double edge_margin(const EdgeVectorEnsemble& ens, const Direction& s, double t, EdgeKey e);

}  // namespace exrot
