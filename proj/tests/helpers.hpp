#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Shared utilities for statistical tests: streaming moments, Monte Carlo
// standard errors and Kolmogorov-Smirnov statistics. All tests seed their
// generators, so assertions on Monte Carlo quantities are reproducible.
namespace testutil {

struct MeanVar {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;  // running 4th central moment accumulator (exact update)
  double m3 = 0.0;

  void add(double x) {
    const double np = static_cast<double>(n + 1);
    const double delta = x - mean;
    const double delta_n = delta / np;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * static_cast<double>(n);
    m4 += term1 * delta_n2 * (np * np - 3.0 * np + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
    m3 += term1 * delta_n * (np - 2.0) - 3.0 * delta_n * m2;
    m2 += term1;
    mean += delta_n;
    n += 1;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double se_mean() const { return std::sqrt(variance() / static_cast<double>(n)); }
  // Standard error of the sample variance via the 4th central moment.
  double se_variance() const {
    const double nn = static_cast<double>(n);
    const double v = m2 / nn;
    const double mu4 = m4 / nn;
    return std::sqrt(std::max(0.0, mu4 - v * v) / nn);
  }
};

inline double percentile(std::vector<double> xs, double p) {
  const auto k = static_cast<std::size_t>(p * static_cast<double>(xs.size() - 1));
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
  return xs[k];
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Rejection threshold for the two-sample KS test at significance level a.
inline double ks_two_sample_threshold(std::size_t n, std::size_t m, double a = 1e-3) {
  const double c = std::sqrt(-std::log(a / 2.0) / 2.0);
  return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

// One-sample KS statistic against a continuous CDF.
inline double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double ks_one_sample_threshold(std::size_t n, double a = 1e-3) {
  return std::sqrt(-std::log(a / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace testutil
