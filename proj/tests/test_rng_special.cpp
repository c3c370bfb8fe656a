#include <cmath>
#include <set>

#include "doctest.h"
#include "exrot/model.hpp"
#include "exrot/rng.hpp"
#include "exrot/special.hpp"

using namespace exrot;

// Constants below were frozen from an independent high-precision evaluation
// (50-digit arithmetic), so they do not share a code path with the library.

TEST_CASE("counter hash is a pure function with separated domains") {
  CHECK(counter_hash(1, kDomainEnsemble, 2, 3) == counter_hash(1, kDomainEnsemble, 2, 3));
  CHECK(counter_hash(1, kDomainEnsemble, 2, 3) != counter_hash(1, kDomainTrial, 2, 3));
  CHECK(counter_hash(1, kDomainEnsemble, 2, 3) != counter_hash(2, kDomainEnsemble, 2, 3));
  CHECK(counter_hash(1, kDomainEnsemble, 2, 3) != counter_hash(1, kDomainEnsemble, 3, 2));

  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(counter_hash(7, kDomainTrial, i));
  CHECK(seen.size() == 1000);
}

TEST_CASE("unit_open stays strictly inside (0,1)") {
  CHECK(unit_open(0) > 0.0);
  CHECK(unit_open(0) == 0x1.0p-53);
  CHECK(unit_open(~0ull) < 1.0);
  CHECK(unit_open(~0ull) == 1.0 - 0x1.0p-53);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    double u = unit_open(counter_hash(3, kDomainTrial, i));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rng streams are reproducible and independent of evaluation order") {
  RngStream a = derive_stream(11, kDomainNet, 4);
  RngStream b = derive_stream(11, kDomainNet, 4);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

  // jumping to counter k equals stepping k times
  RngStream c = derive_stream(11, kDomainNet, 4);
  c.counter = 10;
  RngStream d = derive_stream(11, kDomainNet, 4);
  for (int i = 0; i < 10; ++i) d.next_u64();
  CHECK(c.next_u64() == d.next_u64());
}

TEST_CASE("normal quantile matches frozen oracle values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514727).epsilon(1e-13));
  CHECK(normal_quantile(0.1) == doctest::Approx(-1.2815515655446005).epsilon(1e-13));
  CHECK(normal_upper_quantile(0.05) == doctest::Approx(1.6448536269514727).epsilon(1e-13));
  // round trips
  for (double p : {0.001, 0.01, 0.25, 0.5, 0.77, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  for (double q : {1e-10, 1e-6, 0.01, 0.4}) {
    CHECK(normal_sf(normal_upper_quantile(q)) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("normal cdf / sf are complementary and tail-accurate") {
  for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
    CHECK(normal_cdf(x) + normal_sf(x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_sf(-x) == doctest::Approx(normal_cdf(x)).epsilon(1e-14));
  }
  // far tail keeps relative precision instead of rounding to 0
  CHECK(normal_sf(8.0) > 0.0);
  CHECK(normal_sf(8.0) < 1e-14);
  CHECK(normal_sf(8.0) / 6.2209605742717841e-16 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tail ratio sandwich at r=1, h=1 matches the frozen oracle") {
  double ratio = normal_sf(2.0) / normal_sf(1.0);
  CHECK(ratio == doctest::Approx(0.14339349869880654).epsilon(1e-13));
  CHECK(std::exp(-2.5) == doctest::Approx(0.082084998623898795).epsilon(1e-14));
  CHECK(std::exp(-1.5) == doctest::Approx(0.22313016014842983).epsilon(1e-14));
  CHECK(ratio >= std::exp(-2.5));
  CHECK(ratio <= std::exp(-1.5));
}

TEST_CASE("threshold_from_density inverts the tail") {
  CHECK(std::abs(threshold_from_density(0.5)) < 1e-14);
  double p_conn = 1.5 * std::log(50.0) / 50.0;
  CHECK(p_conn == doctest::Approx(0.11736069016284438).epsilon(1e-15));
  CHECK(threshold_from_density(p_conn) == doctest::Approx(1.1882844033212542).epsilon(1e-13));
  for (double p : {1e-8, 0.01, 0.3, 0.9, 0.999}) {
    CHECK(normal_sf(threshold_from_density(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(threshold_from_density(0.0), std::invalid_argument);
  CHECK_THROWS_AS(threshold_from_density(1.0), std::invalid_argument);
}

TEST_CASE("regularized incomplete beta basics") {
  CHECK(regularized_ibeta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
  CHECK(regularized_ibeta(0.5, 1.0, 0.25) == doctest::Approx(0.5).epsilon(1e-13));
  // complement symmetry
  CHECK(regularized_ibeta(2.0, 3.0, 0.4) + regularized_ibeta(3.0, 2.0, 0.6) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(regularized_ibeta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_ibeta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("log_binomial agrees with exact small binomials") {
  CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120.0).epsilon(1e-12));
  CHECK(log_binomial(7, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_binomial(7, 7) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::exp(log_binomial(30, 15)) == doctest::Approx(155117520.0).epsilon(1e-11));
}

TEST_CASE("normal_from_bits is deterministic and centered") {
  CHECK(normal_from_bits(12345) == normal_from_bits(12345));
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i)
    sum += normal_from_bits(counter_hash(9, kDomainTrial, i));
  CHECK(std::abs(sum / 10000.0) < 0.05);  // ~5 standard errors
}
