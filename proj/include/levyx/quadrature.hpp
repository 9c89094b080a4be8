#pragma once

#include <cmath>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "levyx/errors.hpp"

namespace levyx {

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
// the Legendre recurrence and cached per order.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendre& order(int n) {
    static std::mutex mu;
    static std::unordered_map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(n));
    gl.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const auto j = static_cast<std::size_t>(i);
      gl.nodes[j] = -x;
      gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      gl.weights[j] = w;
      gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return cache.emplace(n, std::move(gl)).first->second;
  }
};

// Fixed-order Gauss-Legendre on [a, b].
template <class Fn>
double integrate_gl(const Fn& f, double a, double b, int order = 16) {
  const auto& gl = GaussLegendre::order(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return acc * half;
}

struct QuadratureConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  int max_refinements = 14;
  // Refinements before convergence may be declared; a floor of panels guards
  // against coarse levels agreeing because they all miss a narrow feature.
  int min_refinements = 4;
  int base_order = 16;
};

namespace detail {

inline bool converged(double cur, double prev, const QuadratureConfig& cfg) {
  const double diff = std::abs(cur - prev);
  return diff <= cfg.abs_tol || diff <= cfg.rel_tol * std::abs(cur);
}

}  // namespace detail

// Composite Gauss-Legendre on [a, b]; the panel count doubles until the last
// two refinement pairs both agree.
template <class Fn>
double integrate_adaptive_1d(const Fn& f, double a, double b, const QuadratureConfig& cfg = {}) {
  double prev = 0.0, prev2 = 0.0;
  for (int level = 0; level <= cfg.max_refinements; ++level) {
    const int panels = 1 << level;
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) acc += integrate_gl(f, a + p * h, a + (p + 1) * h, cfg.base_order);
    if (level >= cfg.min_refinements && detail::converged(acc, prev, cfg) && detail::converged(prev, prev2, cfg))
      return acc;
    prev2 = prev;
    prev = acc;
  }
  throw IntegrationError("1-d quadrature did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                         "] after " + std::to_string(cfg.max_refinements) + " refinements");
}

// Integral of f over the disk |x - center| < radius (2-d): Gauss-Legendre in
// the radius, equally spaced nodes in the angle (spectrally accurate for the
// periodic direction), both refined until agreement.
template <class Fn>
double integrate_disk(const Fn& f, std::span<const double> center, double radius,
                      const QuadratureConfig& cfg = {}) {
  double prev = 0.0, prev2 = 0.0;
  for (int level = 0; level <= cfg.max_refinements; ++level) {
    const int n_r = cfg.base_order << level;
    const int n_theta = 4 * cfg.base_order << level;
    const auto& gl = GaussLegendre::order(n_r);
    double acc = 0.0;
    std::vector<double> point(2);
    for (int ti = 0; ti < n_theta; ++ti) {
      const double theta = 2.0 * std::numbers::pi * ti / n_theta;
      const double ct = std::cos(theta), st = std::sin(theta);
      double radial = 0.0;
      for (std::size_t ri = 0; ri < gl.nodes.size(); ++ri) {
        const double r = 0.5 * radius * (gl.nodes[ri] + 1.0);
        point[0] = center[0] + r * ct;
        point[1] = center[1] + r * st;
        radial += gl.weights[ri] * f(std::span<const double>(point)) * r;
      }
      acc += radial * 0.5 * radius;
    }
    acc *= 2.0 * std::numbers::pi / n_theta;
    if (level > 0 && detail::converged(acc, prev, cfg)) return acc;
    prev = acc;
  }
  throw IntegrationError("disk quadrature did not converge (radius " + std::to_string(radius) + ")");
}

}  // namespace levyx
