#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "levyx/rng.hpp"
#include "levyx/special_functions.hpp"

using levyx::digamma;
using levyx::log_gamma;
using levyx::trigamma;
namespace lx = levyx;

namespace {
constexpr double kEuler = std::numbers::egamma;
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("gamma matches closed forms and an independent algorithm") {
  CHECK(lx::gamma(1.0) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(lx::gamma(0.5) == Catch::Approx(std::sqrt(kPi)).epsilon(1e-12));
  // Independent route: the standard library's gamma uses a different
  // algorithm than our Lanczos evaluation.
  CHECK(lx::gamma(1.25) == Catch::Approx(std::tgamma(1.25)).epsilon(1e-12));
  CHECK(lx::gamma(1.25) == Catch::Approx(0.9064024770554771).epsilon(1e-10));

  levyx::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double z = rng.uniform(0.05, 50.0);
    CHECK(lx::gamma(z) == Catch::Approx(std::tgamma(z)).epsilon(1e-10));
    CHECK(log_gamma(z) == Catch::Approx(std::lgamma(z)).margin(1e-10 * std::max(1.0, std::abs(std::lgamma(z)))));
  }
}

TEST_CASE("digamma and trigamma closed-form values") {
  CHECK(digamma(1.0) == Catch::Approx(-kEuler).epsilon(1e-12));
  CHECK(digamma(0.5) == Catch::Approx(-kEuler - 2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(digamma(2.0) == Catch::Approx(1.0 - kEuler).epsilon(1e-12));

  CHECK(trigamma(1.0) == Catch::Approx(kPi * kPi / 6.0).epsilon(1e-12));
  CHECK(trigamma(0.5) == Catch::Approx(kPi * kPi / 2.0).epsilon(1e-12));
  CHECK(trigamma(2.0) == Catch::Approx(kPi * kPi / 6.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("domain errors on non-positive or non-finite arguments") {
  CHECK_THROWS_AS(lx::gamma(0.0), levyx::DomainError);
  CHECK_THROWS_AS(lx::gamma(-1.5), levyx::DomainError);
  CHECK_THROWS_AS(lx::gamma(std::numeric_limits<double>::quiet_NaN()), levyx::DomainError);
  CHECK_THROWS_AS(log_gamma(-0.1), levyx::DomainError);
  CHECK_THROWS_AS(digamma(0.0), levyx::DomainError);
  CHECK_THROWS_AS(trigamma(-2.0), levyx::DomainError);
  CHECK_THROWS_AS(trigamma(std::numeric_limits<double>::infinity()), levyx::DomainError);
}

TEST_CASE("recurrence properties on random arguments") {
  levyx::Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double z = rng.uniform(0.1, 40.0);
    CHECK(lx::gamma(z + 1.0) == Catch::Approx(z * lx::gamma(z)).epsilon(1e-9));
    CHECK(digamma(z + 1.0) == Catch::Approx(digamma(z) + 1.0 / z).margin(1e-9 * std::max(1.0, std::abs(digamma(z)))));
    CHECK(trigamma(z + 1.0) == Catch::Approx(trigamma(z) - 1.0 / (z * z)).margin(1e-9 * std::max(1.0, trigamma(z))));
  }
}

TEST_CASE("reflection identity on (0, 1)") {
  levyx::Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const double z = rng.uniform(0.02, 0.98);
    CHECK(lx::gamma(z) * lx::gamma(1.0 - z) == Catch::Approx(kPi / std::sin(kPi * z)).epsilon(1e-9));
  }
}

TEST_CASE("digamma equals the finite difference of log-gamma") {
  levyx::Rng rng(29);
  for (int i = 0; i < 100; ++i) {
    const double z = rng.uniform(0.2, 30.0);
    const double fd = testutil::central_diff([](double t) { return log_gamma(t); }, z, 1e-5);
    CHECK(digamma(z) == Catch::Approx(fd).margin(1e-6));
  }
}
