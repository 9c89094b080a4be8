#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyx/dataset.hpp"
#include "levyx/errors.hpp"
#include "levyx/special_functions.hpp"
#include "levyx/stable.hpp"

namespace levyx {

// Estimates of the Levy driver from burst data: alpha from the variance and
// sigma from the mean of ln|x - z|.
struct LevyEstimate {
  double alpha_hat = 0.0;
  double sigma_hat = 0.0;
  double m = 0.0;  // sample mean of ln|x - z|
  double V = 0.0;  // unbiased sample variance of ln|x - z|
  std::size_t n_used = 0;
  std::size_t n_excluded = 0;  // zero-increment records dropped from the log
  int dim = 0;
  double t_star = 0.0;
  double jump_intensity = 0.0;  // c(dim, alpha_hat)
  std::vector<std::string> flags;
};

struct LogAmplitudeStats {
  double m = 0.0;
  double V = 0.0;
  std::size_t n_used = 0;
  std::size_t n_excluded = 0;
};

namespace detail {

class KahanSum {
public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace detail

// Sample mean and unbiased variance of ln|x - z| over all records. Records
// with x = z exactly cannot enter the log and are excluded and counted.
// Two-pass compensated summation in record order keeps the result
// deterministic and permutation-stable to rounding level.
inline LogAmplitudeStats log_amplitude_stats(const BurstDataset& ds) {
  ds.validate();
  const std::size_t n = ds.size();
  const auto d = static_cast<std::size_t>(ds.dim);
  std::vector<double> logs;
  logs.reserve(n);
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* zi = ds.z.data() + i * d;
    const double* xi = ds.x.data() + i * d;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = xi[k] - zi[k];
      norm2 += diff * diff;
    }
    if (norm2 == 0.0) {
      ++excluded;
      continue;
    }
    logs.push_back(0.5 * std::log(norm2));
  }
  if (logs.size() < 2)
    throw EstimationError("fewer than 2 usable records (" + std::to_string(logs.size()) + " after excluding " +
                          std::to_string(excluded) + " zero increments)");

  detail::KahanSum sum;
  for (double v : logs) sum.add(v);
  const double mean = sum.value() / static_cast<double>(logs.size());
  detail::KahanSum sq;
  for (double v : logs) sq.add((v - mean) * (v - mean));
  LogAmplitudeStats out;
  out.m = mean;
  out.V = sq.value() / static_cast<double>(logs.size() - 1);
  out.n_used = logs.size();
  out.n_excluded = excluded;
  return out;
}

// alpha_hat = [ 6/pi^2 (V - psi'(n/2)/4) + 1/4 ]^{-1/2}
//
// The bracket is positive iff V > psi'(n/2)/4 - pi^2/24; below that the
// formula has no real solution and estimation fails. Values of alpha_hat at
// or above 2 (V at or below the Gaussian floor psi'(n/2)/4) are returned
// as-is and flagged by estimate_levy rather than aborting.
inline double estimate_alpha(double V, int dim) {
  if (dim < 1) throw DomainError("estimate_alpha: dim must be >= 1");
  if (!std::isfinite(V) || V <= 0.0) throw EstimationError("estimate_alpha: variance must be positive");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double bracket = 6.0 / pi2 * (V - 0.25 * trigamma(dim / 2.0)) + 0.25;
  if (bracket <= 0.0)
    throw EstimationError("variance below Gaussian floor: no real alpha solves Var(ln R) = " + std::to_string(V));
  return 1.0 / std::sqrt(bracket);
}

// sigma_hat = exp[ m - gamma_Euler (1/alpha - 1/2) - psi(n/2)/2 - ln(t*)/alpha ] / 2
inline double estimate_sigma(double m, double alpha_hat, double t_star, int dim) {
  if (dim < 1) throw DomainError("estimate_sigma: dim must be >= 1");
  if (!(t_star > 0.0)) throw DomainError("estimate_sigma: t_star must be positive");
  if (!std::isfinite(alpha_hat) || alpha_hat <= 0.0)
    throw DomainError("estimate_sigma: alpha_hat must be positive, got " + std::to_string(alpha_hat));
  const double euler = std::numbers::egamma;
  const double sigma = 0.5 * std::exp(m - euler * (1.0 / alpha_hat - 0.5) - 0.5 * digamma(dim / 2.0) -
                                      std::log(t_star) / alpha_hat);
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw EstimationError("estimate_sigma: non-finite result from m = " + std::to_string(m));
  return sigma;
}

inline LevyEstimate estimate_levy(const BurstDataset& ds) {
  const auto stats = log_amplitude_stats(ds);
  LevyEstimate est;
  est.m = stats.m;
  est.V = stats.V;
  est.n_used = stats.n_used;
  est.n_excluded = stats.n_excluded;
  est.dim = ds.dim;
  est.t_star = ds.t_star;
  est.alpha_hat = estimate_alpha(stats.V, ds.dim);
  if (est.alpha_hat <= 1.0 || est.alpha_hat >= 2.0)
    est.flags.push_back("alpha_outside_(1,2): method assumes the small-jump regime");
  est.sigma_hat = estimate_sigma(stats.m, est.alpha_hat, ds.t_star, ds.dim);
  if (est.alpha_hat < 2.0)
    est.jump_intensity = jump_intensity_constant(ds.dim, est.alpha_hat);
  if (ds.aborted_trajectories > 0)
    est.flags.push_back("dataset reports " + std::to_string(ds.aborted_trajectories) + " aborted trajectories");
  return est;
}

// Separate estimates per distinct initial point, in first-appearance order.
// Grouping keys are the exact bit patterns of z.
inline std::vector<std::pair<std::vector<double>, LevyEstimate>> estimate_levy_per_z(const BurstDataset& ds) {
  ds.validate();
  const auto d = static_cast<std::size_t>(ds.dim);
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<double>> keys;
  std::vector<BurstDataset> groups;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto zi = ds.z_at(i);
    std::string key(reinterpret_cast<const char*>(zi.data()), d * sizeof(double));
    auto [it, inserted] = index.try_emplace(std::move(key), keys.size());
    if (inserted) {
      keys.emplace_back(zi.begin(), zi.end());
      groups.emplace_back();
      groups.back().t_star = ds.t_star;
      groups.back().dim = ds.dim;
    }
    groups[it->second].push(zi, ds.x_at(i));
  }
  std::vector<std::pair<std::vector<double>, LevyEstimate>> out;
  out.reserve(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) out.emplace_back(keys[k], estimate_levy(groups[k]));
  return out;
}

inline nlohmann::json to_json(const LevyEstimate& est) {
  return nlohmann::json{{"alpha_hat", est.alpha_hat},
                        {"sigma_hat", est.sigma_hat},
                        {"m", est.m},
                        {"V", est.V},
                        {"n_used", est.n_used},
                        {"n_excluded_zero_increment", est.n_excluded},
                        {"dim", est.dim},
                        {"t_star", est.t_star},
                        {"jump_intensity_constant", est.jump_intensity},
                        {"flags", est.flags}};
}

}  // namespace levyx
