#include "exrot/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "exrot/metrics.hpp"
#include "exrot/model.hpp"
#include "exrot/rng.hpp"
#include "exrot/special.hpp"
#include "exrot/sphere.hpp"

namespace exrot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

void finalize(BoundCheckReport& r) {
  r.satisfied = true;
  r.slack = kInf;
  for (const auto& row : r.rows) {
    if (!row.ok && r.assertable) r.satisfied = false;
    double margin = std::min(row.upper - row.observed, row.observed - row.lower);
    r.slack = std::min(r.slack, margin);
  }
}

double standard_error(double freq, long trials) {
  return std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / static_cast<double>(trials));
}

// Realized G(n, p) sampled directly through the uniform marginal; trial-keyed.
GraphRealization sample_gnp(int n, double p, std::uint64_t seed, long trial) {
  GraphRealization g(n);
  std::uint64_t trial_seed = counter_hash(seed, kDomainTrial, static_cast<std::uint64_t>(trial));
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++e)
      if (unit_open(counter_hash(trial_seed, kDomainEnsemble, e)) >= 1.0 - p) g.set_edge(i, j);
  return g;
}

}  // namespace

BoundCheckReport gaussian_tail_sandwich_check(const std::vector<double>& r_grid_in,
                                              const std::vector<double>& h_grid_in) {
  std::vector<double> r_grid = r_grid_in;
  std::vector<double> h_grid = h_grid_in;
  if (r_grid.empty())
    for (int i = 1; i <= 50; ++i) r_grid.push_back(i / 10.0);
  if (h_grid.empty())
    for (int j = 0; j <= 30; ++j) h_grid.push_back(j / 10.0);

  BoundCheckReport rep;
  rep.name = "tail_sandwich";
  rep.scope = std::to_string(r_grid.size()) + "x" + std::to_string(h_grid.size()) +
              " grid, exact evaluation, 1e-12 relative";
  const double rel = 1e-12;
  for (double r : r_grid) {
    if (!(r > 0.0)) throw std::invalid_argument("tail_sandwich: r must be positive");
    for (double h : h_grid) {
      if (h < 0.0) throw std::invalid_argument("tail_sandwich: h must be nonnegative");
      double ratio = normal_sf(r + h) / normal_sf(r);
      double lo = std::exp(-h * r - h / r - h * h / 2.0);
      double hi = std::exp(-h * r - h * h / 2.0);
      CheckRow row;
      row.label = "r=" + std::to_string(r) + ",h=" + std::to_string(h);
      row.observed = ratio;
      row.lower = lo;
      row.upper = hi;
      row.ok = (ratio >= lo * (1.0 - rel)) && (ratio <= hi * (1.0 + rel));
      rep.rows.push_back(std::move(row));
    }
  }
  finalize(rep);
  return rep;
}

BoundCheckReport caps_half_prob_check(int d, double eta, long trials, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("caps_half_prob_check: d >= 2 required");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("caps_half_prob_check: eta in (0,1)");
  if (trials < 1) throw std::invalid_argument("caps_half_prob_check: trials >= 1");

  double band = eta * std::sqrt(1.0 - eta * eta / 2.0);
  long hits = 0;
  for (long trial = 0; trial < trials; ++trial) {
    double first = normal_from_bits(counter_hash(seed, kDomainTrial, trial, 0));
    double sq = first * first;
    for (int c = 1; c < d; ++c) {
      double z = normal_from_bits(counter_hash(seed, kDomainTrial, trial, c));
      sq += z * z;
    }
    double u1 = first / std::sqrt(sq);
    if (u1 > -band && u1 < 0.0) ++hits;
  }
  double freq = static_cast<double>(hits) / trials;
  double bound = eta * std::sqrt(d / (2.0 * kPi));
  double se = standard_error(freq, trials);

  BoundCheckReport rep;
  rep.name = "cap_band";
  rep.scope = "d=" + std::to_string(d) + ", eta=" + std::to_string(eta) + ", " +
              std::to_string(trials) + " trials, 4 SE";
  CheckRow row;
  row.label = "band_probability";
  row.observed = freq;
  row.lower = -kInf;
  row.upper = bound + 4.0 * se;
  row.ok = freq <= row.upper;
  rep.rows.push_back(row);
  rep.extras["bound"] = bound;
  rep.extras["bound_alt"] = eta * std::sqrt((d - 1) / (2.0 * kPi));
  rep.extras["exact"] = 0.5 * regularized_ibeta(0.5, (d - 1) / 2.0, band * band);
  rep.extras["se"] = se;
  finalize(rep);
  return rep;
}

BoundCheckReport domination_check(int d, double t, double eps, long trials, std::uint64_t seed,
                                  double c_eps) {
  if (d < 2) throw std::invalid_argument("domination_check: d >= 2 required");
  if (!(eps > 0.0)) throw std::invalid_argument("domination_check: eps > 0 required");
  if (trials < 1) throw std::invalid_argument("domination_check: trials >= 1");

  double tv1 = std::max(t, 1.0);
  double alpha = std::atan(eps / (tv1 * std::sqrt(static_cast<double>(d - 1))));
  double p = normal_sf(t);
  double eps_prime = eps + c_eps * (eps * eps + eps / std::max(t * t, 1.0));
  double ca = std::cos(alpha), sa = std::sin(alpha);

  long in_plus = 0, in_minus = 0, in_gamma = 0;
  long chain_violations = 0;
  for (long trial = 0; trial < trials; ++trial) {
    double n_coord = normal_from_bits(counter_hash(seed, kDomainTrial, trial, 0));
    double chi_sq = 0.0;
    for (int c = 1; c < d; ++c) {
      double z = normal_from_bits(counter_hash(seed, kDomainTrial, trial, c));
      chi_sq += z * z;
    }
    double chi = std::sqrt(chi_sq);
    double big_r = std::hypot(n_coord, chi);
    double phi = std::atan2(chi, n_coord);  // in [0, pi], chi >= 0

    double cap_max = (phi <= alpha) ? big_r : (n_coord * ca + chi * sa);
    double cap_min = (phi + alpha >= kPi) ? -big_r : (n_coord * ca - chi * sa);

    bool gp = cap_max >= t;
    bool gm = cap_min >= t;
    bool g0 = n_coord >= t;
    if ((gm && !g0) || (g0 && !gp)) ++chain_violations;
    in_plus += gp;
    in_minus += gm;
    in_gamma += g0;
  }

  double fp = static_cast<double>(in_plus) / trials;
  double fm = static_cast<double>(in_minus) / trials;
  double f0 = static_cast<double>(in_gamma) / trials;

  BoundCheckReport rep;
  rep.name = "domination";
  rep.scope = "d=" + std::to_string(d) + ", t=" + std::to_string(t) + ", eps=" +
              std::to_string(eps) + ", " + std::to_string(trials) + " trials, c=" +
              std::to_string(c_eps) + ", 4 SE";

  CheckRow chain{"inclusion_chain_violations", static_cast<double>(chain_violations), -kInf, 0.0,
                 chain_violations == 0};
  rep.rows.push_back(chain);
  CheckRow plus{"gamma_plus_freq", fp, -kInf, (1.0 + eps_prime) * p + 4.0 * standard_error(fp, trials),
                false};
  plus.ok = plus.observed <= plus.upper;
  rep.rows.push_back(plus);
  CheckRow minus{"gamma_minus_freq", fm,
                 (1.0 - eps_prime) * p - 4.0 * standard_error(fm, trials), kInf, false};
  minus.ok = minus.observed >= minus.lower;
  rep.rows.push_back(minus);
  CheckRow marg{"gamma_freq", f0, p - 4.0 * standard_error(f0, trials),
                p + 4.0 * standard_error(f0, trials), false};
  marg.ok = marg.observed >= marg.lower && marg.observed <= marg.upper;
  rep.rows.push_back(marg);

  rep.extras["alpha"] = alpha;
  rep.extras["p"] = p;
  rep.extras["eps_prime"] = eps_prime;
  finalize(rep);
  return rep;
}

BoundCheckReport correlation_bound_check(const std::vector<double>& theta_grid_in, double t,
                                         long trials, std::uint64_t seed, double C) {
  if (!(t >= 1.0)) throw std::invalid_argument("correlation_bound_check: t >= 1 required");
  if (trials < 1) throw std::invalid_argument("correlation_bound_check: trials >= 1");
  std::vector<double> thetas = theta_grid_in;
  if (thetas.empty()) thetas = {0.2, 0.3, 0.5, 0.7, 1.0, 1.2, kPi / 2};

  double p = normal_sf(t);
  BoundCheckReport rep;
  rep.name = "correlations";
  rep.scope = std::to_string(thetas.size()) + " angles, t=" + std::to_string(t) + ", " +
              std::to_string(trials) + " trials, C=" + std::to_string(C) + ", 4 SE";

  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    double theta = thetas[ti];
    if (!(theta > 0.0 && theta < kPi))
      throw std::invalid_argument("correlation_bound_check: theta in (0, pi)");
    double eta = std::cos(theta);
    double root = std::sqrt(1.0 - eta * eta);
    long both_above = 0, both_below = 0;
    for (long trial = 0; trial < trials; ++trial) {
      double n1 = normal_from_bits(counter_hash(seed, kDomainTrial, trial, 2 * ti));
      double n2 = normal_from_bits(counter_hash(seed, kDomainTrial, trial, 2 * ti + 1));
      bool a1 = n1 >= t;
      bool a2 = eta * n1 + root * n2 >= t;
      both_above += (a1 && a2);
      both_below += (!a1 && !a2);
    }
    double fa = static_cast<double>(both_above) / trials;
    double fb = static_cast<double>(both_below) / trials;

    double xi = 1.0 - eta;
    double gamma = xi * xi / std::sin(theta);
    double rhs;
    if (gamma >= 1.0 - 1e-12) {
      rhs = kInf;
    } else {
      double expo = gamma * (1.0 - gamma) * t * t + gamma / (1.0 - gamma) + gamma * gamma * t * t / 2.0;
      rhs = p * (std::pow(C * p * t, 2.0 * xi + xi * xi) + std::exp(expo) * p);
    }

    CheckRow above{"joint_above@theta=" + std::to_string(theta), fa, -kInf,
                   rhs + 4.0 * standard_error(fa, trials), false};
    above.ok = above.observed <= above.upper;
    rep.rows.push_back(above);
    CheckRow below{"joint_below@theta=" + std::to_string(theta), fb, -kInf,
                   (rhs == kInf ? kInf : 1.0 - 2.0 * p + rhs) + 4.0 * standard_error(fb, trials),
                   false};
    below.ok = below.observed <= below.upper;
    rep.rows.push_back(below);
  }
  rep.extras["p"] = p;
  finalize(rep);
  return rep;
}

double isolated_prob_exact(int n, double p) {
  if (n < 1 || n > 120) throw std::invalid_argument("isolated_prob_exact: 1 <= n <= 120");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("isolated_prob_exact: p in (0,1)");
  // sum_j (-1)^j C(n,j) q^{j(n-j) + C(j,2)}, Kahan-compensated, terms in
  // log space to dodge premature underflow.
  long double log_q = std::log1p(static_cast<long double>(-p));
  long double acc = 0.0L, comp = 0.0L;
  for (int j = 0; j <= n; ++j) {
    long double exponent = static_cast<long double>(j) * (n - j) +
                           static_cast<long double>(j) * (j - 1) / 2.0L;
    long double log_term = static_cast<long double>(log_binomial(n, j)) + exponent * log_q;
    long double term = std::exp(log_term);
    if (j % 2 == 1) term = -term;
    long double y = term - comp;
    long double s = acc + y;
    comp = (s - acc) - y;
    acc = s;
  }
  double out = static_cast<double>(acc);
  return std::clamp(out, 0.0, 1.0);
}

BoundCheckReport isolated_exact_check(long mc_trials, std::uint64_t seed) {
  if (mc_trials < 1) throw std::invalid_argument("isolated_exact_check: mc_trials >= 1");
  BoundCheckReport rep;
  rep.name = "isolated_exact";
  rep.scope = "closed forms at n=2,3; MC at n=30, p=0.1, " + std::to_string(mc_trials) +
              " trials, 4 SE";
  const double tol = 1e-12;
  const double p_small = 0.3;

  double e2 = isolated_prob_exact(2, p_small);
  CheckRow r2{"n=2_closed_form", e2, p_small - tol, p_small + tol, false};
  r2.ok = r2.observed >= r2.lower && r2.observed <= r2.upper;
  rep.rows.push_back(r2);

  double e3 = isolated_prob_exact(3, p_small);
  double c3 = p_small * p_small * p_small + 3.0 * p_small * p_small * (1.0 - p_small);
  CheckRow r3{"n=3_closed_form", e3, c3 - tol, c3 + tol, false};
  r3.ok = r3.observed >= r3.lower && r3.observed <= r3.upper;
  rep.rows.push_back(r3);

  const int n = 30;
  const double p = 0.1;
  double exact = isolated_prob_exact(n, p);
  long hits = 0;
  for (long trial = 0; trial < mc_trials; ++trial) {
    GraphRealization g = sample_gnp(n, p, seed, trial);
    hits += isolated_vertices(g).empty();
  }
  double freq = static_cast<double>(hits) / mc_trials;
  double se = standard_error(freq, mc_trials);
  CheckRow mc{"n=30_mc_vs_exact", freq, exact - 4.0 * se, exact + 4.0 * se, false};
  mc.ok = mc.observed >= mc.lower && mc.observed <= mc.upper;
  rep.rows.push_back(mc);
  rep.extras["exact_n30"] = exact;
  rep.extras["se"] = se;
  finalize(rep);
  return rep;
}

BoundCheckReport oconnell_bound_report(int n, double c, long trials, std::uint64_t seed) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("oconnell_bound_report: c in (0,1)");
  if (n < 2) throw std::invalid_argument("oconnell_bound_report: n >= 2");
  double p = c * std::log(static_cast<double>(n)) / n;
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("oconnell_bound_report: p out of range");
  double bound = std::exp(-std::pow(static_cast<double>(n), 1.0 - c) / 3.0);

  long hits = 0;
  for (long trial = 0; trial < trials; ++trial) {
    GraphRealization g = sample_gnp(n, p, seed, trial);
    bool none_isolated = isolated_vertices(g).empty();
    hits += none_isolated;
  }
  double freq = static_cast<double>(hits) / trials;

  BoundCheckReport rep;
  rep.name = "oconnell";
  rep.scope = "n=" + std::to_string(n) + ", c=" + std::to_string(c) + ", " +
              std::to_string(trials) + " trials (observational)";
  rep.assertable = false;
  CheckRow mc{"mc_no_isolated_freq", freq, -kInf, bound, freq <= bound};
  rep.rows.push_back(mc);
  if (n <= 120) {
    double exact = isolated_prob_exact(n, p);
    CheckRow ex{"exact_no_isolated_prob", exact, -kInf, bound, exact <= bound};
    rep.rows.push_back(ex);
    rep.extras["exact"] = exact;
  }
  rep.extras["p"] = p;
  rep.extras["bound"] = bound;
  finalize(rep);
  return rep;
}

BoundCheckReport clique_lowertail_sim(int n, double p, double delta, long trials,
                                      std::uint64_t seed) {
  if (!(delta > 2.0)) throw std::invalid_argument("clique_lowertail_sim: delta > 2 required");
  double omega_p = matula_omega_density(n, p);
  int k = static_cast<int>(std::floor(omega_p - delta));
  if (k < 2) throw std::invalid_argument("clique_lowertail_sim: floor(omega_p - delta) >= 2 required");

  long below = 0;
  for (long trial = 0; trial < trials; ++trial) {
    GraphRealization g = sample_gnp(n, p, seed, trial);
    below += (clique_number(g) < k);
  }
  double freq = static_cast<double>(below) / trials;
  const double z = 4.0;
  double nn = static_cast<double>(trials);
  double center = (freq + z * z / (2 * nn)) / (1 + z * z / nn);
  double half = (z / (1 + z * z / nn)) *
                std::sqrt(freq * (1 - freq) / nn + z * z / (4 * nn * nn));

  BoundCheckReport rep;
  rep.name = "clique_lowertail";
  rep.scope = "n=" + std::to_string(n) + ", p=" + std::to_string(p) + ", k=" + std::to_string(k) +
              ", " + std::to_string(trials) + " trials (observational, Wilson z=4)";
  rep.assertable = false;
  CheckRow row{"freq_clique_below_k", freq, -kInf, kInf, true};
  rep.rows.push_back(row);
  rep.extras["omega_p"] = omega_p;
  rep.extras["k"] = k;
  rep.extras["wilson_lo"] = std::max(0.0, center - half);
  rep.extras["wilson_hi"] = std::min(1.0, center + half);
  finalize(rep);
  return rep;
}

BoundCheckReport cap_area_mc_check(int d, double alpha, long trials, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("cap_area_mc_check: d >= 2 required");
  double formula = cap_area_fraction(d, alpha);
  double ca = std::cos(alpha);
  long hits = 0;
  for (long trial = 0; trial < trials; ++trial) {
    double first = normal_from_bits(counter_hash(seed, kDomainTrial, trial, 0));
    double sq = first * first;
    for (int c = 1; c < d; ++c) {
      double z = normal_from_bits(counter_hash(seed, kDomainTrial, trial, c));
      sq += z * z;
    }
    if (first >= ca * std::sqrt(sq)) ++hits;
  }
  double freq = static_cast<double>(hits) / trials;
  double se = standard_error(freq, trials);

  BoundCheckReport rep;
  rep.name = "cap_area";
  rep.scope = "d=" + std::to_string(d) + ", alpha=" + std::to_string(alpha) + ", " +
              std::to_string(trials) + " trials, 4 SE";
  CheckRow row{"cap_fraction", freq, formula - 4.0 * se, formula + 4.0 * se, false};
  row.ok = row.observed >= row.lower && row.observed <= row.upper;
  rep.rows.push_back(row);
  rep.extras["formula"] = formula;
  rep.extras["se"] = se;
  finalize(rep);
  return rep;
}

BaselineSummary er_baseline(int n, double p, long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("er_baseline: trials >= 1");
  BaselineSummary sum;
  sum.n = n;
  sum.p = p;
  sum.t = threshold_from_density(p);
  sum.trials = trials;
  Direction s{1.0};
  long connected_count = 0;
  for (long trial = 0; trial < trials; ++trial) {
    std::uint64_t trial_seed = counter_hash(seed, kDomainTrial, trial);
    EdgeVectorEnsemble ens = EdgeVectorEnsemble::sample(n, 1, trial_seed);
    GraphRealization g = realize_graph(ens, s, sum.t);
    MetricReport m = compute_metrics(g);
    ++sum.clique_hist[m.clique];
    ++sum.chromatic_lower_hist[m.chromatic.lower];
    ++sum.chromatic_upper_hist[m.chromatic.upper];
    ++sum.component_hist[m.components];
    ++sum.isolated_hist[static_cast<int>(m.isolated.size())];
    connected_count += m.connected;
  }
  sum.connected_freq = static_cast<double>(connected_count) / trials;
  return sum;
}

namespace {

nlohmann::ordered_json hist_json(const std::map<int, long>& h) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : h) j[std::to_string(k)] = v;
  return j;
}

}  // namespace

std::string to_json(const BoundCheckReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = "bound_check";
  j["name"] = r.name;
  j["scope"] = r.scope;
  j["assertable"] = r.assertable;
  j["satisfied"] = r.satisfied;
  j["slack"] = std::isfinite(r.slack) ? r.slack : 0.0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json rj;
    rj["label"] = row.label;
    rj["observed"] = row.observed;
    if (std::isfinite(row.lower))
      rj["lower"] = row.lower;
    else
      rj["lower"] = nullptr;
    if (std::isfinite(row.upper))
      rj["upper"] = row.upper;
    else
      rj["upper"] = nullptr;
    rj["ok"] = row.ok;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  nlohmann::ordered_json ex = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.extras) ex[k] = v;
  j["extras"] = std::move(ex);
  return j.dump();
}

std::string to_csv(const std::vector<BoundCheckReport>& reports) {
  std::string out = "name,label,observed,lower,upper,ok\n";
  auto fmt = [](double v) {
    if (v == kInf) return std::string("inf");
    if (v == -kInf) return std::string("-inf");
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (const auto& r : reports)
    for (const auto& row : r.rows) {
      out += r.name;
      out += ',';
      out += row.label;
      out += ',';
      out += fmt(row.observed);
      out += ',';
      out += fmt(row.lower);
      out += ',';
      out += fmt(row.upper);
      out += ',';
      out += row.ok ? "true" : "false";
      out += '\n';
    }
  return out;
}

std::string to_json(const BaselineSummary& s) {
  nlohmann::ordered_json j;
  j["kind"] = "baseline_summary";
  j["n"] = s.n;
  j["p"] = s.p;
  j["t"] = s.t;
  j["trials"] = s.trials;
  j["clique"] = hist_json(s.clique_hist);
  j["chromatic_lower"] = hist_json(s.chromatic_lower_hist);
  j["chromatic_upper"] = hist_json(s.chromatic_upper_hist);
  j["components"] = hist_json(s.component_hist);
  j["isolated"] = hist_json(s.isolated_hist);
  j["connected_freq"] = s.connected_freq;
  return j.dump();
}

std::string to_csv(const BaselineSummary& s) {
  std::string out = "metric,value,count\n";
  auto emit = [&](const char* metric, const std::map<int, long>& h) {
    for (const auto& [k, v] : h)
      out += std::string(metric) + "," + std::to_string(k) + "," + std::to_string(v) + "\n";
  };
  emit("clique", s.clique_hist);
  emit("chromatic_lower", s.chromatic_lower_hist);
  emit("chromatic_upper", s.chromatic_upper_hist);
  emit("components", s.component_hist);
  emit("isolated", s.isolated_hist);
  return out;
}

}  // namespace exrot
