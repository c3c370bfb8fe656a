#include "exrot/sphere.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "exrot/special.hpp"

namespace exrot {

BigInt schlafli_count(int N, int d) {
  if (N < 1 || d < 1) throw std::invalid_argument("schlafli_count: N >= 1, d >= 1 required");
  // 2 * sum_{k=0}^{d-1} C(N-1, k), accumulated exactly.
  BigInt total = 0;
  BigInt binom = 1;  // C(N-1, 0)
  for (int k = 0; k <= std::min(d - 1, N - 1); ++k) {
    total += binom;
    binom = binom * (N - 1 - k) / (k + 1);
  }
  return 2 * total;
}

namespace {

std::uint64_t pattern_of(const std::vector<Direction>& pts, const Direction& s) {
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (dot(pts[k], s) >= 0.0) mask |= (1ull << k);
  return mask;
}

void add_pattern(SignPatternSet& out, std::vector<std::uint64_t>& seen, const Direction& s,
                 const std::vector<Direction>& pts) {
  std::uint64_t mask = pattern_of(pts, s);
  if (std::find(seen.begin(), seen.end(), mask) != seen.end()) return;
  seen.push_back(mask);
  Direction w = s;
  normalize(w);
  out.patterns.push_back(mask);
  out.witnesses.push_back(std::move(w));
}

// Next k-combination in lexicographic order; false when exhausted.
bool next_combination(std::vector<int>& c, int n) {
  int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SignPatternSet enumerate_sign_patterns(const std::vector<Direction>& points, double degeneracy_tol) {
  int N = static_cast<int>(points.size());
  if (N < 1) throw std::invalid_argument("enumerate_sign_patterns: no points");
  int d = static_cast<int>(points[0].size());
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != d)
      throw std::invalid_argument("enumerate_sign_patterns: mixed dimensions");
  if (N > 20 || d > 6)
    throw std::invalid_argument("enumerate_sign_patterns: supported for N <= 20, d <= 6");
  for (const auto& p : points) {
    double m = norm(p);
    if (!(m > degeneracy_tol)) throw DegenerateInput("enumerate_sign_patterns: zero point");
  }

  SignPatternSet out;
  out.n_points = N;
  out.d = d;
  std::vector<std::uint64_t> seen;

  if (d == 1) {
    add_pattern(out, seen, Direction{1.0}, points);
    add_pattern(out, seen, Direction{-1.0}, points);
  } else if (N <= d) {
    // Independent points: every sign assignment has an exact witness
    // solving <x_k, s> = sigma_k in least-norm form.
    Eigen::MatrixXd X(N, d);
    for (int k = 0; k < N; ++k)
      for (int c = 0; c < d; ++c) X(k, c) = points[k][c];
    Eigen::MatrixXd G = X * X.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(N - 1);
    if (!(smin > degeneracy_tol * degeneracy_tol * std::max(1.0, smax)))
      throw DegenerateInput("enumerate_sign_patterns: points not linearly independent");
    for (std::uint64_t mask = 0; mask < (1ull << N); ++mask) {
      Eigen::VectorXd sigma(N);
      for (int k = 0; k < N; ++k) sigma(k) = ((mask >> k) & 1u) ? 1.0 : -1.0;
      Eigen::VectorXd y = svd.solve(sigma);
      Eigen::VectorXd s = X.transpose() * y;
      Direction dir(s.data(), s.data() + d);
      add_pattern(out, seen, dir, points);
    }
  } else {
    // Every full-dimensional cone of the arrangement is pointed (the points
    // span R^d), so it owns an extreme ray cut out by some (d-1)-subset.
    double max_norm = 0.0;
    for (const auto& p : points) max_norm = std::max(max_norm, norm(p));

    std::vector<int> comb(d - 1);
    for (int i = 0; i < d - 1; ++i) comb[i] = i;
    do {
      Eigen::MatrixXd M(d - 1, d);
      for (int r = 0; r < d - 1; ++r)
        for (int c = 0; c < d; ++c) M(r, c) = points[comb[r]][c];
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV | Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      double smax = sv(0);
      if (!(sv(d - 2) > degeneracy_tol * std::max(1.0, smax)))
        throw DegenerateInput("enumerate_sign_patterns: dependent (d-1)-subset");
      Eigen::VectorXd ray = svd.matrixV().col(d - 1);  // unit kernel vector

      // Dual combination of the subset's vectors: columns w_k of the
      // pseudo-inverse satisfy <w_k, x_{comb[l]}> = delta_{kl}.
      Eigen::MatrixXd W = svd.matrixV().leftCols(d - 1) *
                          sv.head(d - 1).cwiseInverse().asDiagonal() *
                          svd.matrixU().transpose();
      double max_w = 0.0;
      for (int k = 0; k < d - 1; ++k) max_w = std::max(max_w, W.col(k).norm());

      for (int side = 0; side < 2; ++side) {
        Eigen::VectorXd r = (side == 0) ? ray : Eigen::VectorXd(-ray);
        double min_off = std::numeric_limits<double>::infinity();
        for (int i = 0; i < N; ++i) {
          if (std::find(comb.begin(), comb.end(), i) != comb.end()) continue;
          double ip = 0.0;
          for (int c = 0; c < d; ++c) ip += r(c) * points[i][c];
          min_off = std::min(min_off, std::abs(ip));
        }
        if (!(min_off > degeneracy_tol * std::max(1.0, max_norm)))
          throw DegenerateInput("enumerate_sign_patterns: point orthogonal to a ray");
        // Perturbation small enough that no off-subset sign can flip.
        double eps = std::min(1e-6 * min_off,
                              0.5 * min_off / ((d - 1) * max_w * max_norm + 1e-300));
        for (std::uint64_t delta = 0; delta < (1ull << (d - 1)); ++delta) {
          Eigen::VectorXd s = r;
          for (int k = 0; k < d - 1; ++k)
            s += (((delta >> k) & 1u) ? eps : -eps) * W.col(k);
          Direction dir(s.data(), s.data() + d);
          add_pattern(out, seen, dir, points);
        }
      }
    } while (next_combination(comb, N));
  }

  BigInt expected = schlafli_count(N, d);
  if (BigInt(out.patterns.size()) != expected)
    throw DegenerateInput("enumerate_sign_patterns: count mismatch vs closed form (found " +
                          std::to_string(out.patterns.size()) + ", expected " +
                          expected.str() + ")");

  // Canonical order: sort by mask, witnesses follow.
  std::vector<std::size_t> order(out.patterns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.patterns[a] < out.patterns[b]; });
  SignPatternSet sorted;
  sorted.n_points = N;
  sorted.d = d;
  for (std::size_t i : order) {
    sorted.patterns.push_back(out.patterns[i]);
    sorted.witnesses.push_back(std::move(out.witnesses[i]));
  }
  return sorted;
}

Direction sample_uniform_direction(int d, RngStream& rng) {
  if (d < 1) throw std::invalid_argument("sample_uniform_direction: d >= 1 required");
  Direction s(d);
  while (true) {
    for (int c = 0; c < d; ++c) s[c] = normal_from_bits(rng.next_u64());
    double m = norm(s);
    if (m > 1e-12) {
      for (double& x : s) x /= m;
      return s;
    }
  }
}

namespace {

double min_dist_sq(const std::vector<Direction>& pts, const Direction& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    double acc = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      double diff = p[c] - s[c];
      acc += diff * diff;
    }
    best = std::min(best, acc);
  }
  return best;
}

}  // namespace

CoveringNet build_covering_net(int d, double eta, int budget, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("build_covering_net: d >= 1 required");
  if (!(eta > 0.0 && eta <= 2.0)) throw std::invalid_argument("build_covering_net: eta in (0,2]");
  if (budget < 1) throw std::invalid_argument("build_covering_net: budget >= 1 required");
  CoveringNet net;
  net.d = d;
  net.eta = eta;
  if (d == 1) {
    net.points = {Direction{1.0}, Direction{-1.0}};
    net.verified = true;
    return net;
  }
  double bound = std::pow(4.0 / eta, d);
  double eta_sq = eta * eta;
  auto absorb = [&](const Direction& s) {
    if (min_dist_sq(net.points, s) > eta_sq) {
      net.points.push_back(s);
      if (static_cast<double>(net.points.size()) > bound)
        throw std::logic_error("build_covering_net: size bound exceeded");
    }
  };
  RngStream stream = derive_stream(seed, kDomainNet, 0);
  for (int k = 0; k < budget; ++k) absorb(sample_uniform_direction(d, stream));
  // Patch-and-verify passes over fresh samples; the final pass is clean.
  for (int pass = 1; pass <= 8; ++pass) {
    RngStream fresh = derive_stream(seed, kDomainNet, pass);
    bool clean = true;
    for (int k = 0; k < budget; ++k) {
      Direction s = sample_uniform_direction(d, fresh);
      if (min_dist_sq(net.points, s) > eta_sq) {
        clean = false;
        net.points.push_back(std::move(s));
        if (static_cast<double>(net.points.size()) > bound)
          throw std::logic_error("build_covering_net: size bound exceeded");
      }
    }
    if (clean) {
      net.verified = true;
      break;
    }
  }
  return net;
}

Packing build_packing(int d, double theta, int budget, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("build_packing: d >= 1 required");
  if (!(theta > 0.0 && theta <= 3.14159265358979323846))
    throw std::invalid_argument("build_packing: theta in (0, pi]");
  if (budget < 1) throw std::invalid_argument("build_packing: budget >= 1 required");
  Packing pack;
  pack.d = d;
  pack.theta = theta;
  double cos_theta = std::cos(theta);
  if (d == 1) {
    pack.points = {Direction{1.0}, Direction{-1.0}};
    pack.attempts = 0;
  } else {
    RngStream stream = derive_stream(seed, kDomainPacking);
    for (int k = 0; k < budget; ++k) {
      Direction s = sample_uniform_direction(d, stream);
      bool ok = true;
      for (const auto& p : pack.points)
        if (dot(p, s) > cos_theta) {
          ok = false;
          break;
        }
      if (ok) pack.points.push_back(std::move(s));
      ++pack.attempts;
    }
  }
  double bound = (d / 16.0) * std::pow(theta, -(d - 1));
  pack.size_bound_met = (static_cast<double>(pack.points.size()) >= bound);
  return pack;
}

double cap_area_fraction(int d, double alpha) {
  if (d < 2) throw std::invalid_argument("cap_area_fraction: d >= 2 required");
  constexpr double kPi = 3.14159265358979323846;
  if (!(alpha >= 0.0 && alpha <= kPi))
    throw std::invalid_argument("cap_area_fraction: alpha in [0, pi]");
  if (alpha == 0.0) return 0.0;
  if (alpha == kPi) return 1.0;
  double a = (d - 1) / 2.0;
  if (alpha <= kPi / 2) {
    double x = std::sin(alpha);
    return 0.5 * regularized_ibeta(a, 0.5, x * x);
  }
  double x = std::sin(kPi - alpha);
  return 1.0 - 0.5 * regularized_ibeta(a, 0.5, x * x);
}

namespace {

nlohmann::ordered_json points_json(const std::vector<Direction>& pts) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : pts) arr.push_back(p);
  return arr;
}

std::vector<Direction> points_from_json(const nlohmann::json& arr, int d) {
  std::vector<Direction> pts;
  for (const auto& item : arr) {
    Direction p = item.get<Direction>();
    if (static_cast<int>(p.size()) != d) throw IoError("point dimension mismatch in JSON");
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

std::string to_json(const CoveringNet& net) {
  nlohmann::ordered_json j;
  j["kind"] = "covering_net";
  j["d"] = net.d;
  j["eta"] = net.eta;
  j["verified"] = net.verified;
  j["points"] = points_json(net.points);
  return j.dump();
}

std::string to_json(const Packing& pack) {
  nlohmann::ordered_json j;
  j["kind"] = "packing";
  j["d"] = pack.d;
  j["theta"] = pack.theta;
  j["attempts"] = pack.attempts;
  j["size_bound_met"] = pack.size_bound_met;
  j["points"] = points_json(pack.points);
  return j.dump();
}

CoveringNet covering_net_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("kind") != "covering_net") throw IoError("not a covering_net JSON");
    CoveringNet net;
    net.d = j.at("d").get<int>();
    net.eta = j.at("eta").get<double>();
    net.verified = j.value("verified", false);
    net.points = points_from_json(j.at("points"), net.d);
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("covering_net JSON: ") + e.what());
  }
}

Packing packing_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("kind") != "packing") throw IoError("not a packing JSON");
    Packing pack;
    pack.d = j.at("d").get<int>();
    pack.theta = j.at("theta").get<double>();
    pack.attempts = j.value("attempts", 0l);
    pack.size_bound_met = j.value("size_bound_met", false);
    pack.points = points_from_json(j.at("points"), pack.d);
    return pack;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("packing JSON: ") + e.what());
  }
}

}  // namespace exrot
