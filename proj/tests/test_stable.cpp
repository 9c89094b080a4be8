#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "levyx/rng.hpp"
#include "levyx/special_functions.hpp"
#include "levyx/stable.hpp"

using levyx::Rng;
using levyx::StableParams;

namespace {
constexpr double kPi = std::numbers::pi;

// Closed-form amplitude moment evaluated through the standard library's
// lgamma, independent of levyx::log_gamma.
double moment_oracle(int n, double alpha, double gamma_scale, double p) {
  return std::exp(p * std::log(2.0 * gamma_scale) + std::lgamma(1.0 - p / alpha) -
                  std::lgamma(1.0 - p / 2.0) + std::lgamma((n + p) / 2.0) - std::lgamma(n / 2.0));
}
}  // namespace

TEST_CASE("characteristic function closed-form values") {
  StableParams p1(1.5, 1.0, 1);
  const double u0 = 0.0;
  CHECK(levyx::characteristic_function(p1, std::span(&u0, 1)) == Catch::Approx(1.0));
  const double u1 = 1.0;
  CHECK(levyx::characteristic_function(p1, std::span(&u1, 1)) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));

  StableParams p2(1.5, 2.0, 2);
  const std::vector<double> u{1.0, 0.0};
  CHECK(levyx::characteristic_function(p2, u) == Catch::Approx(std::exp(-std::pow(2.0, 1.5))).epsilon(1e-12));
  CHECK(levyx::characteristic_function(p2, u) == Catch::Approx(0.0591057465619562).margin(2e-7));

  const std::vector<double> wrong{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(levyx::characteristic_function(p2, wrong), levyx::DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(StableParams(0.0, 1.0, 1), levyx::DomainError);
  CHECK_THROWS_AS(StableParams(2.0, 1.0, 1), levyx::DomainError);
  CHECK_THROWS_AS(StableParams(1.5, 0.0, 1), levyx::DomainError);
  CHECK_THROWS_AS(StableParams(1.5, 1.0, 0), levyx::DomainError);
  Rng rng(1);
  CHECK_THROWS_AS(levyx::sample_univariate_standard(1.0, rng), levyx::DomainError);
  CHECK_THROWS_AS(levyx::sample_univariate_standard(2.0, rng), levyx::DomainError);
  CHECK_THROWS_AS(levyx::sample_positive_stable(1.0, 1.0, rng), levyx::DomainError);
  CHECK_THROWS_AS(levyx::sample_positive_stable(0.5, -1.0, rng), levyx::DomainError);
}

TEST_CASE("univariate sampler matches the characteristic function") {
  const double alpha = 1.5;
  Rng rng(101);
  const std::size_t n = 1000000;
  const double us[3] = {0.5, 1.0, 2.0};
  testutil::MeanVar cf[3];
  std::vector<double> draws;
  draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = levyx::sample_univariate_standard(alpha, rng);
    draws.push_back(x);
    for (int k = 0; k < 3; ++k) cf[k].add(std::cos(us[k] * x));
  }
  for (int k = 0; k < 3; ++k) {
    const double target = std::exp(-std::pow(us[k], alpha));
    INFO("u = " << us[k]);
    CHECK(std::abs(cf[k].mean - target) < 3.0 * cf[k].se_mean());
  }
  // symmetry: median near zero
  std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(n / 2), draws.end());
  CHECK(std::abs(draws[n / 2]) < 0.01);
}

TEST_CASE("univariate sampler approaches the Gaussian limit") {
  // gamma = 1 stable with alpha -> 2 corresponds to N(0, 2).
  Rng rng(103);
  testutil::MeanVar stat;
  for (int i = 0; i < 1000000; ++i) stat.add(levyx::sample_univariate_standard(1.999, rng));
  CHECK(std::abs(stat.variance() - 2.0) < 0.1);
  CHECK(std::abs(stat.mean) < 0.01);
}

TEST_CASE("positive stable sampler: positivity, Laplace transform, scaling") {
  Rng rng(107);
  const double alpha_half = 0.75;  // corresponds to alpha = 1.5 in the mixture
  const double scale = levyx::mixture_scale(1.5, 1.0);
  testutil::MeanVar laplace;
  std::vector<double> small, large;
  const std::size_t n = 1000000;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = levyx::sample_positive_stable(alpha_half, scale, rng);
    REQUIRE(a > 0.0);
    laplace.add(std::exp(-a));
    if (i < 200000) small.push_back(a);
  }
  // E exp(-A) = exp(-scale^{a} s^{a} / cos(pi a / 2)) at s = 1; for the
  // mixture scale this reduces to exp(-(2 gamma^2)^{alpha/2}).
  const double target = std::exp(-std::pow(2.0, 0.75));
  CHECK(std::abs(laplace.mean - target) < 3.0 * laplace.se_mean());

  Rng rng2(109);
  for (std::size_t i = 0; i < 200000; ++i) large.push_back(levyx::sample_positive_stable(alpha_half, 2.0 * scale, rng2));
  CHECK(testutil::percentile(large, 0.9) > testutil::percentile(small, 0.9));
}

TEST_CASE("isotropic vector sampler matches Eq. CF and is rotationally symmetric") {
  StableParams params(1.5, 1.0, 2);
  Rng rng(113);
  const std::size_t n = 1000000;
  testutil::MeanVar cf;
  std::vector<double> angles;
  angles.reserve(100000);
  std::vector<double> x(2);
  for (std::size_t i = 0; i < n; ++i) {
    levyx::sample_isotropic_vector(params, rng, x);
    cf.add(std::cos(x[0]));  // u = (1, 0)
    if (i < 100000) angles.push_back(std::atan2(x[1], x[0]));
  }
  CHECK(std::abs(cf.mean - std::exp(-1.0)) < 3.0 * cf.se_mean());

  const double d = testutil::ks_one_sample(angles, [](double a) { return (a + kPi) / (2.0 * kPi); });
  CHECK(d < testutil::ks_one_sample_threshold(angles.size()));
}

TEST_CASE("1-d isotropic marginal coincides with the univariate sampler") {
  StableParams params(1.7, 1.3, 1);
  Rng rng(127);
  const std::size_t n = 100000;
  std::vector<double> mix(n), cms(n), x(1);
  for (std::size_t i = 0; i < n; ++i) {
    levyx::sample_isotropic_vector(params, rng, x);
    mix[i] = x[0];
    cms[i] = params.gamma_scale * levyx::sample_univariate_standard(params.alpha, rng);
  }
  CHECK(testutil::ks_two_sample(mix, cms) < testutil::ks_two_sample_threshold(n, n));
}

TEST_CASE("scaling: gamma-scaled draws match draws at scale gamma") {
  Rng rng(131);
  const std::size_t n = 100000;
  std::vector<double> a(n), b(n), x(1);
  StableParams unit(1.5, 1.0, 1), scaled(1.5, 2.5, 1);
  for (std::size_t i = 0; i < n; ++i) {
    levyx::sample_isotropic_vector(unit, rng, x);
    a[i] = 2.5 * x[0];
    levyx::sample_isotropic_vector(scaled, rng, x);
    b[i] = x[0];
  }
  CHECK(testutil::ks_two_sample(a, b) < testutil::ks_two_sample_threshold(n, n));
}

TEST_CASE("amplitude fractional moments: closed form and Monte Carlo") {
  StableParams p11(1.5, 1.0, 1);
  CHECK(levyx::amplitude_fractional_moment(p11, 0.0) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(levyx::amplitude_fractional_moment(p11, 1.0) == Catch::Approx(moment_oracle(1, 1.5, 1.0, 1.0)).epsilon(1e-10));
  CHECK(levyx::amplitude_fractional_moment(p11, 1.0) == Catch::Approx(2.0 * std::tgamma(1.0 / 3.0) / kPi).epsilon(1e-10));

  CHECK_THROWS_AS(levyx::amplitude_fractional_moment(p11, 1.5), levyx::DomainError);
  CHECK_THROWS_AS(levyx::amplitude_fractional_moment(p11, -1.0), levyx::DomainError);

  // Monte Carlo oracle at moderate sample size (the acceptance suite runs the
  // full 1e7-draw version over a parameter grid).
  StableParams p2(1.5, 1.0, 2);
  Rng rng(137);
  testutil::MeanVar mc;
  std::vector<double> x(2);
  for (int i = 0; i < 1000000; ++i) {
    levyx::sample_isotropic_vector(p2, rng, x);
    mc.add(std::sqrt(x[0] * x[0] + x[1] * x[1]));
  }
  const double closed = levyx::amplitude_fractional_moment(p2, 1.0);
  CHECK(closed == Catch::Approx(moment_oracle(2, 1.5, 1.0, 1.0)).epsilon(1e-10));
  CHECK(std::abs(mc.mean - closed) < 4.0 * mc.se_mean());
}

TEST_CASE("lemma 1 statistics: closed-form arithmetic and Monte Carlo") {
  StableParams p(1.5, 1.0, 1);
  const auto stats = levyx::lemma1_stats(p);
  CHECK(stats.var_ln_r == Catch::Approx(1.5535488409122137).epsilon(1e-12));
  CHECK(stats.var_ln_r == Catch::Approx(kPi * kPi / 6.0 * (4.0 / 9.0 - 0.25) + 0.25 * kPi * kPi / 2.0).epsilon(1e-12));
  CHECK(stats.mean_ln_r == Catch::Approx(-0.1924052216338442).margin(1e-12));

  // continuity toward the Gaussian boundary in 2-d
  StableParams pg(2.0 - 1e-9, 1.0, 2);
  CHECK(levyx::lemma1_stats(pg).var_ln_r == Catch::Approx(0.25 * levyx::trigamma(1.0)).margin(1e-6));

  Rng rng(139);
  testutil::MeanVar mc;
  for (int i = 0; i < 1000000; ++i)
    mc.add(std::log(std::abs(levyx::sample_univariate_standard(1.5, rng))));
  CHECK(std::abs(mc.mean - stats.mean_ln_r) < 3.0 * mc.se_mean());
  CHECK(std::abs(mc.variance() - stats.var_ln_r) < 3.0 * mc.se_variance());
}

TEST_CASE("jump intensity constant") {
  // Two independent gamma routes: levyx::gamma (Lanczos) inside the library
  // call, std::tgamma in the oracle below.
  auto oracle = [](int n, double alpha) {
    return alpha * std::tgamma((n + alpha) / 2.0) /
           (std::pow(2.0, 1.0 - alpha) * std::pow(kPi, n / 2.0) * std::tgamma(1.0 - alpha / 2.0));
  };
  CHECK(levyx::jump_intensity_constant(1, 1.5) == Catch::Approx(oracle(1, 1.5)).epsilon(1e-12));
  CHECK(levyx::jump_intensity_constant(1, 1.5) == Catch::Approx(0.2992).margin(5e-5));
  CHECK(levyx::jump_intensity_constant(2, 1.5) == Catch::Approx(oracle(2, 1.5)).epsilon(1e-12));

  levyx::Rng rng(149);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    const double alpha = rng.uniform(0.05, 1.95);
    CHECK(levyx::jump_intensity_constant(n, alpha) > 0.0);
  }
  CHECK_THROWS_AS(levyx::jump_intensity_constant(0, 1.5), levyx::DomainError);
  CHECK_THROWS_AS(levyx::jump_intensity_constant(1, 2.0), levyx::DomainError);
}
