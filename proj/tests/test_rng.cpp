#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "levyx/rng.hpp"

TEST_CASE("identical seeds give identical streams") {
  levyx::Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams differ and are reproducible") {
  levyx::Rng s0 = levyx::Rng::stream(7, 0);
  levyx::Rng s1 = levyx::Rng::stream(7, 1);
  levyx::Rng s0b = levyx::Rng::stream(7, 0);
  int differing = 0;
  for (int i = 0; i < 64; ++i) {
    const auto x = s0.next_u64();
    if (x != s1.next_u64()) ++differing;
    REQUIRE(x == s0b.next_u64());
  }
  CHECK(differing > 60);
}

TEST_CASE("uniform01 stays in (0, 1] and uniform01_open in (0, 1)") {
  levyx::Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
    const double v = rng.uniform01_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("normal and exponential variates have the right moments") {
  levyx::Rng rng(5);
  testutil::MeanVar nstat, estat;
  for (int i = 0; i < 200000; ++i) {
    nstat.add(rng.normal());
    estat.add(rng.exponential());
  }
  CHECK(std::abs(nstat.mean) < 4.0 * nstat.se_mean());
  CHECK(std::abs(nstat.variance() - 1.0) < 4.0 * nstat.se_variance());
  CHECK(std::abs(estat.mean - 1.0) < 4.0 * estat.se_mean());
}
