#include "exrot/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "exrot/rng.hpp"
#include "exrot/special.hpp"

namespace exrot {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void normalize(Direction& v) {
  double m = norm(v);
  if (!(m > 1e-300)) throw std::domain_error("normalize: zero vector");
  for (double& x : v) x /= m;
}

Direction axis_direction(int d, int axis) {
  if (d < 1 || axis < 0 || axis >= d) throw std::invalid_argument("axis_direction: bad axis");
  Direction s(d, 0.0);
  s[axis] = 1.0;
  return s;
}

std::vector<EdgeKey> all_edges(int n) {
  std::vector<EdgeKey> es;
  es.reserve(edge_count_of(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
  return es;
}

DensitySpec DensitySpec::fixed(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("DensitySpec: p must be in (0,1)");
  return DensitySpec{Kind::FixedP, p};
}

DensitySpec DensitySpec::connectivity(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("DensitySpec: c must be positive");
  return DensitySpec{Kind::ConnectivityScale, c};
}

double DensitySpec::edge_probability(int n) const {
  if (kind == Kind::FixedP) return value;
  if (n < 2) throw std::invalid_argument("DensitySpec: n must be >= 2");
  double p = value * std::log(static_cast<double>(n)) / n;
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("DensitySpec: c log(n)/n not in (0,1) for this n");
  return p;
}

double threshold_from_density(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("threshold_from_density: p in (0,1)");
  return normal_upper_quantile(p);
}

EdgeVectorEnsemble::EdgeVectorEnsemble(int n, int d, std::uint64_t seed)
    : n_(n), d_(d), m_(edge_count_of(n)), seed_(seed) {
  if (n < 2) throw std::invalid_argument("EdgeVectorEnsemble: n >= 2 required");
  if (d < 1) throw std::invalid_argument("EdgeVectorEnsemble: d >= 1 required");
  data_.resize(static_cast<std::size_t>(m_) * d_);
}

EdgeVectorEnsemble EdgeVectorEnsemble::sample(int n, int d, std::uint64_t seed) {
  EdgeVectorEnsemble ens(n, d, seed);
  std::size_t idx = 0;
  for (int e = 0; e < ens.m_; ++e)
    for (int c = 0; c < d; ++c)
      ens.data_[idx++] = normal_from_bits(counter_hash(seed, kDomainEnsemble, e, c));
  return ens;
}

double EdgeVectorEnsemble::inner(int edge_idx, std::span<const double> s) const {
  return dot(edge_vector(edge_idx), s);
}

namespace {

constexpr char kMagic[4] = {'X', 'G', 'R', 'E'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) buf.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) buf.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}
std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | p[k];
  return v;
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | p[k];
  return v;
}

}  // namespace

void EdgeVectorEnsemble::write_file(const std::string& path) const {
  std::string buf;
  buf.reserve(20 + data_.size() * 8);
  buf.append(kMagic, 4);
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(n_));
  put_u32(buf, static_cast<std::uint32_t>(d_));
  put_u64(buf, seed_);
  for (double x : data_) put_u64(buf, std::bit_cast<std::uint64_t>(x));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("short write: " + path);
}

EdgeVectorEnsemble EdgeVectorEnsemble::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 24) throw IoError("truncated ensemble file: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (std::memcmp(p, kMagic, 4) != 0) throw IoError("bad magic in ensemble file: " + path);
  std::uint32_t version = get_u32(p + 4);
  if (version != kVersion) throw IoError("unsupported ensemble file version: " + path);
  int n = static_cast<int>(get_u32(p + 8));
  int d = static_cast<int>(get_u32(p + 12));
  std::uint64_t seed = get_u64(p + 16);
  if (n < 2 || n > 100000 || d < 1 || d > 1000000) throw IoError("bad header in: " + path);
  EdgeVectorEnsemble ens(n, d, seed);
  std::size_t need = 24 + ens.data_.size() * 8;
  if (buf.size() != need) throw IoError("wrong payload size in ensemble file: " + path);
  for (std::size_t k = 0; k < ens.data_.size(); ++k)
    ens.data_[k] = std::bit_cast<double>(get_u64(p + 24 + 8 * k));
  return ens;
}

GraphRealization::GraphRealization(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 1) throw std::invalid_argument("GraphRealization: n >= 1 required");
  rows_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

void GraphRealization::set_edge(int i, int j) {
  rows_[static_cast<std::size_t>(i) * words_ + (j >> 6)] |= (1ull << (j & 63));
  rows_[static_cast<std::size_t>(j) * words_ + (i >> 6)] |= (1ull << (i & 63));
}

int GraphRealization::degree(int i) const {
  int deg = 0;
  const std::uint64_t* r = row(i);
  for (int w = 0; w < words_; ++w) deg += std::popcount(r[w]);
  return deg;
}

long GraphRealization::edge_count() const {
  long total = 0;
  for (int i = 0; i < n_; ++i) total += degree(i);
  return total / 2;
}

GraphRealization realize_graph(const EdgeVectorEnsemble& ens, const Direction& s, double t) {
  if (static_cast<int>(s.size()) != ens.d())
    throw std::invalid_argument("realize_graph: direction dimension mismatch");
  GraphRealization g(ens.n());
  int idx = 0;
  for (int i = 0; i < ens.n(); ++i)
    for (int j = i + 1; j < ens.n(); ++j, ++idx)
      if (ens.inner(idx, s) >= t) g.set_edge(i, j);
  g.set_provenance(Provenance{ens.seed(), s, t});
  return g;
}

std::vector<double> edge_margins(const EdgeVectorEnsemble& ens, const Direction& s, double t) {
  if (static_cast<int>(s.size()) != ens.d())
    throw std::invalid_argument("edge_margins: direction dimension mismatch");
  std::vector<double> m(ens.edge_count());
  for (int e = 0; e < ens.edge_count(); ++e) m[e] = ens.inner(e, s) - t;
  return m;
}

double edge_margin(const EdgeVectorEnsemble& ens, const Direction& s, double t, EdgeKey e) {
  if (e.j >= ens.n()) throw std::invalid_argument("edge_margin: vertex out of range");
  return ens.inner(edge_index(ens.n(), e), s) - t;
}

}  // namespace exrot
