#include "exrot/shatter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "exrot/rng.hpp"
#include "exrot/special.hpp"

namespace exrot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class QpStatus { Optimal, Infeasible, Breakdown };

struct QpResult {
  QpStatus status = QpStatus::Breakdown;
  Eigen::VectorXd x;
  int iterations = 0;
};

// Dual active-set method for min 1/2 ||x||^2 s.t. A x >= b (Goldfarb-Idnani
// specialized to an identity Hessian). Starts from the unconstrained optimum
// x = 0 and keeps dual feasibility; detects empty polytopes.
QpResult min_norm_qp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int k = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  QpResult res;
  res.x = Eigen::VectorXd::Zero(d);
  if (k == 0) {
    res.status = QpStatus::Optimal;
    return res;
  }

  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  for (int i = 0; i < k; ++i) scale = std::max(scale, A.row(i).norm());
  const double feas_tol = 1e-10 * scale;
  const int max_iter = 200 * k + 2000;

  std::vector<int> active;
  Eigen::VectorXd lambda(k);
  lambda.setZero();

  auto solve_active = [&](const Eigen::VectorXd& rhs_vec) -> Eigen::VectorXd {
    // Solves (N^T N) y = rhs over the active set, N = active rows of A^T.
    int q = static_cast<int>(active.size());
    Eigen::MatrixXd G(q, q);
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < q; ++c) G(r, c) = A.row(active[r]).dot(A.row(active[c]));
    return G.ldlt().solve(rhs_vec);
  };

  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    // Most violated constraint.
    int p = -1;
    double worst = feas_tol;
    for (int i = 0; i < k; ++i) {
      double v = b(i) - A.row(i).dot(res.x);
      if (v > worst) {
        worst = v;
        p = i;
      }
    }
    if (p < 0) {
      res.status = QpStatus::Optimal;
      return res;
    }

    // Inner loop: drive constraint p to equality, dropping blockers.
    while (true) {
      int q = static_cast<int>(active.size());
      Eigen::VectorXd r_coef;
      Eigen::VectorXd z = A.row(p).transpose();
      if (q > 0) {
        Eigen::VectorXd rhs(q);
        for (int i = 0; i < q; ++i) rhs(i) = A.row(active[i]).dot(A.row(p));
        r_coef = solve_active(rhs);
        for (int i = 0; i < q; ++i) z -= r_coef(i) * A.row(active[i]).transpose();
      }
      double z_sq = z.squaredNorm();
      double v_p = b(p) - A.row(p).dot(res.x);
      if (v_p <= feas_tol) break;  // became satisfied while dropping

      double t_full = (z_sq > 1e-14 * scale * scale) ? v_p / z_sq : kInf;
      double t_part = kInf;
      int blocker = -1;
      for (int i = 0; i < q; ++i) {
        if (r_coef(i) > 1e-12) {
          double cand = lambda(active[i]) / r_coef(i);
          if (cand < t_part) {
            t_part = cand;
            blocker = i;
          }
        }
      }
      double step = std::min(t_full, t_part);
      if (step == kInf) {
        res.status = QpStatus::Infeasible;
        return res;
      }
      if (z_sq > 1e-14 * scale * scale) res.x += step * z;
      for (int i = 0; i < q; ++i) lambda(active[i]) -= step * r_coef(i);
      lambda(p) += step;
      if (step == t_part && blocker >= 0) {
        lambda(active[blocker]) = 0.0;
        active.erase(active.begin() + blocker);
        ++res.iterations;
        if (res.iterations >= max_iter) {
          res.status = QpStatus::Breakdown;
          return res;
        }
        continue;
      }
      active.push_back(p);
      break;
    }
  }
  res.status = QpStatus::Breakdown;
  return res;
}

}  // namespace

SolveOutcome solve_sign_pattern(const EdgeVectorEnsemble& ens, const ShatterRequest& request) {
  if (request.edges.empty()) throw std::invalid_argument("solve_sign_pattern: empty request");
  if (request.present.size() != request.edges.size())
    throw std::invalid_argument("solve_sign_pattern: present/edges size mismatch");
  std::set<EdgeKey> uniq;
  for (const auto& e : request.edges) {
    if (e.j >= ens.n()) throw std::invalid_argument("solve_sign_pattern: vertex out of range");
    if (!uniq.insert(e).second)
      throw std::invalid_argument("solve_sign_pattern: duplicate edge in request");
  }

  const int k = static_cast<int>(request.edges.size());
  const int d = ens.d();
  const double eps = request.effective_margin();
  const double t = request.t;

  Eigen::MatrixXd A(k, d);
  Eigen::VectorXd b(k);
  for (int r = 0; r < k; ++r) {
    auto x = ens.edge_vector(request.edges[r]);
    double sign = request.present[r] ? 1.0 : -1.0;
    for (int c = 0; c < d; ++c) A(r, c) = sign * x[c];
    b(r) = request.present[r] ? (t + eps) : (eps - t);
  }

  SolveOutcome out;
  QpResult qp = min_norm_qp(A, b);
  out.iterations = qp.iterations;
  if (qp.status == QpStatus::Breakdown) {
    out.status = SolveStatus::SolverFailure;
    return out;
  }
  if (qp.status == QpStatus::Infeasible) {
    out.status = SolveStatus::Infeasible;
    out.min_norm = kInf;
    return out;
  }

  double m = qp.x.norm();
  out.min_norm = m;
  if (m > 1.0 + 1e-12) {
    out.status = SolveStatus::Infeasible;
    return out;
  }

  Eigen::VectorXd s = qp.x;
  if (m < 1.0 - 1e-12) {
    // An interior minimum must be pushed out to the sphere without leaving
    // the polytope. A ray with A u >= 1 grows every slack, so following it
    // always crosses the sphere; if no such ray exists the polytope is
    // bounded and the norm maximum sits at a vertex, which settles sphere
    // reachability exactly for small instances.
    bool reached = false;
    QpResult ray = min_norm_qp(A, Eigen::VectorXd::Ones(k));
    if (ray.status == QpStatus::Optimal && ray.x.squaredNorm() > 0.0) {
      double su = s.dot(ray.x);
      double uu = ray.x.squaredNorm();
      double sigma = (-su + std::sqrt(su * su + uu * (1.0 - m * m))) / uu;
      s += sigma * ray.x;
      reached = true;
    } else if (ray.status == QpStatus::Infeasible && k <= 20 && d <= 6 && k >= d) {
      double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
      for (int i = 0; i < k; ++i) scale = std::max(scale, A.row(i).norm());
      Eigen::VectorXd best;
      double best_sq = -1.0;
      std::vector<int> pick(d);
      for (int i = 0; i < d; ++i) pick[i] = i;
      // every d-row basic solution; the feasible ones are the vertices
      while (true) {
        Eigen::MatrixXd basis(d, d);
        Eigen::VectorXd rhs(d);
        for (int r = 0; r < d; ++r) {
          basis.row(r) = A.row(pick[r]);
          rhs(r) = b(pick[r]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
        if (lu.isInvertible()) {
          Eigen::VectorXd v = lu.solve(rhs);
          if (!((A * v - b).array() < -1e-9 * scale).any() && v.squaredNorm() > best_sq) {
            best_sq = v.squaredNorm();
            best = v;
          }
        }
        int pos = d - 1;
        while (pos >= 0 && pick[pos] == k - d + pos) --pos;
        if (pos < 0) break;
        ++pick[pos];
        for (int i = pos + 1; i < d; ++i) pick[i] = pick[i - 1] + 1;
      }
      if (best_sq >= 1.0) {
        // the segment to the best vertex stays feasible and crosses the sphere
        Eigen::VectorXd w = best - s;
        double a2 = w.squaredNorm();
        double b1 = s.dot(w);
        double tau = (-b1 + std::sqrt(b1 * b1 + a2 * (1.0 - m * m))) / a2;
        s += tau * w;
        reached = true;
      } else if (best_sq >= 0.0) {
        out.status = SolveStatus::Infeasible;  // polytope strictly inside the ball
        return out;
      }
    }
    if (!reached) {
      out.status = SolveStatus::SolverFailure;
      return out;
    }
  }

  Direction dir(s.data(), s.data() + d);
  normalize(dir);

  ShatterCertificate cert;
  cert.s = dir;
  cert.t = t;
  cert.edges = request.edges;
  cert.present = request.present;
  cert.min_norm = m;
  cert.margins.resize(k);
  for (int r = 0; r < k; ++r) {
    cert.margins[r] = edge_margin(ens, dir, t, request.edges[r]);
    bool realized = cert.margins[r] >= 0.0;
    if (realized != static_cast<bool>(request.present[r])) {
      out.status = SolveStatus::SolverFailure;  // padding or roundoff broke the pattern
      return out;
    }
  }
  out.certificate = std::move(cert);
  out.status = SolveStatus::Success;
  return out;
}

double affine_span_distance(const std::vector<Direction>& vectors) {
  const int k = static_cast<int>(vectors.size());
  if (k == 0) throw std::invalid_argument("affine_span_distance: empty input");
  const int d = static_cast<int>(vectors[0].size());
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != d)
      throw std::invalid_argument("affine_span_distance: mixed dimensions");
  // min ||M lambda|| over sum(lambda) = 1: substitute lambda = mean + B mu
  // with B spanning the zero-sum subspace, leaving an unconstrained least
  // squares whose residual is the distance. SVD keeps rank deficiency exact.
  Eigen::MatrixXd M(d, k);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < d; ++r) M(r, c) = vectors[c][r];
  Eigen::VectorXd base = M * Eigen::VectorXd::Constant(k, 1.0 / k);
  if (k == 1) return base.norm();
  Eigen::MatrixXd span(d, k - 1);
  for (int c = 0; c + 1 < k; ++c) span.col(c) = M.col(c) - M.col(c + 1);
  Eigen::VectorXd mu =
      span.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-base);
  return (base + span * mu).norm();
}

SolveOutcome realize_spanning_tree(const EdgeVectorEnsemble& ens, double t,
                                   const std::vector<EdgeKey>* tree_edges, double margin) {
  ShatterRequest req;
  if (tree_edges) {
    req.edges = *tree_edges;
  } else {
    for (int i = 0; i + 1 < ens.n(); ++i) req.edges.emplace_back(i, i + 1);
  }
  req.present.assign(req.edges.size(), 1);
  req.t = t;
  req.margin = margin;
  return solve_sign_pattern(ens, req);
}

LeastSingularStats least_singular_experiment(int d, int k, int trials, std::uint64_t seed,
                                             const std::vector<double>& thresholds) {
  if (d < 1 || k < 1 || trials < 1)
    throw std::invalid_argument("least_singular_experiment: positive d, k, trials required");
  LeastSingularStats st;
  st.d = d;
  st.k = k;
  st.trials = trials;
  st.thresholds = thresholds;
  st.freq_below.assign(thresholds.size(), 0.0);
  std::vector<double> samples(trials);
  std::vector<Direction> vecs(k, Direction(d));
  for (int trial = 0; trial < trials; ++trial) {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < d; ++c)
        vecs[r][c] = normal_from_bits(
            counter_hash(seed, kDomainTrial, trial, static_cast<std::uint64_t>(r) * d + c));
    samples[trial] = affine_span_distance(vecs);
  }
  st.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / trials;
  for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
    long cnt = std::count_if(samples.begin(), samples.end(),
                             [&](double v) { return v <= thresholds[ti]; });
    st.freq_below[ti] = static_cast<double>(cnt) / trials;
  }
  std::sort(samples.begin(), samples.end());
  st.min = samples.front();
  st.max = samples.back();
  auto quant = [&](double q) {
    double pos = q * (trials - 1);
    int lo = static_cast<int>(pos);
    int hi = std::min(lo + 1, trials - 1);
    return samples[lo] + (pos - lo) * (samples[hi] - samples[lo]);
  };
  st.q01 = quant(0.01);
  st.q05 = quant(0.05);
  st.q10 = quant(0.10);
  st.q25 = quant(0.25);
  st.q50 = quant(0.50);
  return st;
}

bool verify_certificate(const EdgeVectorEnsemble& ens, const ShatterCertificate& cert,
                        double tol) {
  if (cert.edges.size() != cert.present.size() || cert.edges.size() != cert.margins.size())
    return false;
  if (static_cast<int>(cert.s.size()) != ens.d()) return false;
  if (std::abs(norm(cert.s) - 1.0) > 1e-9) return false;
  for (std::size_t r = 0; r < cert.edges.size(); ++r) {
    double m = edge_margin(ens, cert.s, cert.t, cert.edges[r]);
    if (std::abs(m - cert.margins[r]) > tol) return false;
    if ((m >= 0.0) != static_cast<bool>(cert.present[r])) return false;
  }
  return true;
}

namespace {

nlohmann::ordered_json edges_json(const std::vector<EdgeKey>& edges) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : edges) arr.push_back({e.i, e.j});
  return arr;
}

std::vector<EdgeKey> edges_from_json(const nlohmann::json& arr) {
  std::vector<EdgeKey> edges;
  for (const auto& item : arr) edges.emplace_back(item.at(0).get<int>(), item.at(1).get<int>());
  return edges;
}

}  // namespace

std::string to_json(const ShatterCertificate& cert) {
  nlohmann::ordered_json j;
  j["kind"] = "shatter_certificate";
  j["s"] = cert.s;
  j["t"] = cert.t;
  j["edges"] = edges_json(cert.edges);
  j["present"] = cert.present;
  j["margins"] = cert.margins;
  j["min_norm"] = cert.min_norm;
  return j.dump();
}

ShatterCertificate certificate_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    ShatterCertificate cert;
    cert.s = j.at("s").get<Direction>();
    cert.t = j.at("t").get<double>();
    cert.edges = edges_from_json(j.at("edges"));
    cert.present = j.at("present").get<std::vector<std::uint8_t>>();
    cert.margins = j.at("margins").get<std::vector<double>>();
    cert.min_norm = j.at("min_norm").get<double>();
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("certificate JSON: ") + e.what());
  }
}

std::string to_json(const ShatterRequest& request) {
  nlohmann::ordered_json j;
  j["kind"] = "shatter_request";
  j["edges"] = edges_json(request.edges);
  j["present"] = request.present;
  j["t"] = request.t;
  j["margin"] = request.margin;
  return j.dump();
}

ShatterRequest request_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    ShatterRequest req;
    req.edges = edges_from_json(j.at("edges"));
    req.present = j.at("present").get<std::vector<std::uint8_t>>();
    req.t = j.at("t").get<double>();
    req.margin = j.value("margin", -1.0);
    return req;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("request JSON: ") + e.what());
  }
}

std::string to_json(const LeastSingularStats& st) {
  nlohmann::ordered_json j;
  j["kind"] = "least_singular";
  j["d"] = st.d;
  j["k"] = st.k;
  j["trials"] = st.trials;
  j["min"] = st.min;
  j["max"] = st.max;
  j["mean"] = st.mean;
  j["quantiles"] = {{"q01", st.q01}, {"q05", st.q05}, {"q10", st.q10}, {"q25", st.q25}, {"q50", st.q50}};
  j["thresholds"] = st.thresholds;
  j["freq_below"] = st.freq_below;
  return j.dump();
}

}  // namespace exrot
