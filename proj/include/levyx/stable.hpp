#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "levyx/errors.hpp"
#include "levyx/rng.hpp"
#include "levyx/special_functions.hpp"

namespace levyx {

// Isotropic alpha-stable distributions: parameters, characteristic function,
// exact sampling, amplitude moments and the jump-measure intensity constant.
//
// Conventions: a univariate stable law S_alpha(gamma, beta, delta) has
// characteristic function exp{-gamma^alpha [|u|^alpha + i beta eta(u, alpha)]
// + i u delta} with eta(u, alpha) = -sign(u) tan(pi alpha / 2) |u|^alpha for
// alpha != 1. The isotropic n-dimensional law with scale gamma has
// characteristic function exp{-gamma^alpha |u|^alpha}.

// Parameters of an isotropic stable law / Levy driver. beta (skewness) and
// delta (shift) are identically zero in this library and have no field.
struct StableParams {
  double alpha;        // stability parameter, (0, 2)
  double gamma_scale;  // scaling parameter gamma > 0
  int dim;             // dimension n >= 1

  StableParams(double alpha_, double gamma_scale_, int dim_)
      : alpha(alpha_), gamma_scale(gamma_scale_), dim(dim_) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 2.0)
      throw DomainError("StableParams: alpha must lie in (0, 2), got " + std::to_string(alpha));
    if (!std::isfinite(gamma_scale) || gamma_scale <= 0.0)
      throw DomainError("StableParams: gamma_scale must be positive, got " + std::to_string(gamma_scale));
    if (dim < 1) throw DomainError("StableParams: dim must be >= 1, got " + std::to_string(dim));
  }
};

// Mean and variance of ln R, R = |X| the amplitude of an isotropic stable
// vector.
struct AmplitudeStats {
  double mean_ln_r;
  double var_ln_r;
};

// E exp(i<u, X>) = exp(-gamma^alpha |u|^alpha). Real-valued by symmetry.
inline double characteristic_function(const StableParams& params, std::span<const double> u) {
  if (static_cast<int>(u.size()) != params.dim)
    throw DomainError("characteristic_function: frequency vector has length " + std::to_string(u.size()) +
                      ", expected " + std::to_string(params.dim));
  double norm2 = 0.0;
  for (double ui : u) norm2 += ui * ui;
  const double norm = std::sqrt(norm2);
  return std::exp(-std::pow(params.gamma_scale, params.alpha) * std::pow(norm, params.alpha));
}

// One draw from the standard symmetric stable law S_alpha(1, 0, 0) via the
// Chambers-Mallows-Stuck transform. alpha = 1 (the singular CMS branch) is
// outside the supported domain; estimation targets live in (1, 2) anyway.
inline double sample_univariate_standard(double alpha, Rng& rng) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 2.0 || alpha == 1.0)
    throw DomainError("sample_univariate_standard: alpha must lie in (0,2)\\{1}, got " + std::to_string(alpha));
  const double theta = std::numbers::pi * (rng.uniform01_open() - 0.5);
  const double w = -std::log(rng.uniform01_open());
  const double a = alpha * theta;
  return std::sin(a) / std::pow(std::cos(theta), 1.0 / alpha) *
         std::pow(std::cos(theta - a) / w, (1.0 - alpha) / alpha);
}

// One draw from the totally skewed positive stable law
// S_{alpha_half}(scale, 1, 0), alpha_half in (0, 1). Support is (0, inf);
// Laplace transform E exp(-sA) = exp(-scale^{alpha_half} s^{alpha_half} /
// cos(pi alpha_half / 2)).
inline double sample_positive_stable(double alpha_half, double scale, Rng& rng) {
  if (!std::isfinite(alpha_half) || alpha_half <= 0.0 || alpha_half >= 1.0)
    throw DomainError("sample_positive_stable: stability index must lie in (0, 1), got " +
                      std::to_string(alpha_half));
  if (!std::isfinite(scale) || scale <= 0.0)
    throw DomainError("sample_positive_stable: scale must be positive, got " + std::to_string(scale));
  const double theta = std::numbers::pi * (rng.uniform01_open() - 0.5);
  const double w = -std::log(rng.uniform01_open());
  // CMS with beta = 1: the shift angle arctan(tan(pi a / 2)) / a equals pi/2
  // exactly on (0, 1).
  const double a = alpha_half * (theta + std::numbers::pi / 2.0);
  const double d = std::pow(std::cos(std::numbers::pi * alpha_half / 2.0), -1.0 / alpha_half);
  const double x = d * std::sin(a) / std::pow(std::cos(theta), 1.0 / alpha_half) *
                   std::pow(std::cos(theta - a) / w, (1.0 - alpha_half) / alpha_half);
  return scale * x;
}

// Scale of the positive-stable mixing variable A in Nolan's representation
// X = A^{1/2} G of the isotropic law: A ~ S_{alpha/2}(2 gamma^2
// (cos(pi alpha / 4))^{2/alpha}, 1, 0).
inline double mixture_scale(double alpha, double gamma_scale) {
  return 2.0 * gamma_scale * gamma_scale *
         std::pow(std::cos(std::numbers::pi * alpha / 4.0), 2.0 / alpha);
}

// One isotropic stable vector via the scale-mixture construction.
inline void sample_isotropic_vector(const StableParams& params, Rng& rng, std::span<double> out) {
  if (static_cast<int>(out.size()) != params.dim)
    throw DomainError("sample_isotropic_vector: output has length " + std::to_string(out.size()) +
                      ", expected " + std::to_string(params.dim));
  const double a = sample_positive_stable(params.alpha / 2.0, mixture_scale(params.alpha, params.gamma_scale), rng);
  const double root = std::sqrt(a);
  for (auto& v : out) v = root * rng.normal();
}

inline std::vector<double> sample_isotropic_vector(const StableParams& params, Rng& rng) {
  std::vector<double> out(static_cast<std::size_t>(params.dim));
  sample_isotropic_vector(params, rng, out);
  return out;
}

// E[R^p] = (2 gamma)^p Gamma(1 - p/alpha) / Gamma(1 - p/2)
//          * Gamma((n + p)/2) / Gamma(n/2),  valid for -n < p < alpha.
inline double amplitude_fractional_moment(const StableParams& params, double p) {
  if (!std::isfinite(p) || p <= -static_cast<double>(params.dim) || p >= params.alpha)
    throw DomainError("amplitude_fractional_moment: p must lie in (-dim, alpha), got " + std::to_string(p));
  const double n = static_cast<double>(params.dim);
  const double log_m = p * std::log(2.0 * params.gamma_scale) + log_gamma(1.0 - p / params.alpha) -
                       log_gamma(1.0 - p / 2.0) + log_gamma((n + p) / 2.0) - log_gamma(n / 2.0);
  return std::exp(log_m);
}

// E ln R = ln(2 gamma) + gamma_Euler (1/alpha - 1/2) + psi(n/2)/2
// Var ln R = pi^2/6 (1/alpha^2 - 1/4) + psi'(n/2)/4
inline AmplitudeStats lemma1_stats(const StableParams& params) {
  const double n = static_cast<double>(params.dim);
  const double euler = std::numbers::egamma;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  AmplitudeStats stats{};
  stats.mean_ln_r = std::log(2.0 * params.gamma_scale) + euler * (1.0 / params.alpha - 0.5) +
                    0.5 * digamma(n / 2.0);
  stats.var_ln_r = pi2 / 6.0 * (1.0 / (params.alpha * params.alpha) - 0.25) + 0.25 * trigamma(n / 2.0);
  return stats;
}

// Intensity constant of the jump measure nu(dy) = c(n, alpha) |y|^{-n-alpha} dy:
// c(n, alpha) = alpha Gamma((n + alpha)/2) / (2^{1-alpha} pi^{n/2} Gamma(1 - alpha/2)).
inline double jump_intensity_constant(int dim, double alpha) {
  if (dim < 1) throw DomainError("jump_intensity_constant: dim must be >= 1");
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 2.0)
    throw DomainError("jump_intensity_constant: alpha must lie in (0, 2), got " + std::to_string(alpha));
  const double n = static_cast<double>(dim);
  return alpha * gamma((n + alpha) / 2.0) /
         (std::pow(2.0, 1.0 - alpha) * std::pow(std::numbers::pi, n / 2.0) * gamma(1.0 - alpha / 2.0));
}

}  // namespace levyx
