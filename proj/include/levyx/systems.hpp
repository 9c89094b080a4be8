#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levyx/errors.hpp"

namespace levyx {

// Drift field b: R^n -> R^n, written into a caller-provided buffer.
using DriftFn = std::function<void(std::span<const double>, std::span<double>)>;

// Built-in drift fields used by the CLI and the experiment pipelines.
//   ex1     1-d double-well   b(x) = 4x - x^3
//   ex2     2-d coupled       b(x) = (5 x1 - x2^2, 5 x1 + x2)
//   zero    b = 0 (any dimension)
//   linear  b(x) = -x (any dimension)
struct NamedSystem {
  std::string name;
  int dim;
  DriftFn drift;
};

inline NamedSystem make_system(const std::string& name, int dim = 1) {
  if (name == "ex1") {
    return {"ex1", 1, [](std::span<const double> x, std::span<double> out) {
              out[0] = 4.0 * x[0] - x[0] * x[0] * x[0];
            }};
  }
  if (name == "ex2") {
    return {"ex2", 2, [](std::span<const double> x, std::span<double> out) {
              out[0] = 5.0 * x[0] - x[1] * x[1];
              out[1] = 5.0 * x[0] + x[1];
            }};
  }
  if (name == "zero") {
    if (dim < 1) throw DomainError("system 'zero': dim must be >= 1");
    return {"zero", dim, [](std::span<const double>, std::span<double> out) {
              for (auto& v : out) v = 0.0;
            }};
  }
  if (name == "linear") {
    if (dim < 1) throw DomainError("system 'linear': dim must be >= 1");
    return {"linear", dim, [](std::span<const double> x, std::span<double> out) {
              for (std::size_t i = 0; i < out.size(); ++i) out[i] = -x[i];
            }};
  }
  throw DomainError("unknown drift system '" + name + "' (known: ex1, ex2, zero, linear)");
}

// 1-d polynomial drift b(x) = sum_k coeffs[k] x^k.
inline DriftFn polynomial_drift(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("polynomial drift: need at least one coefficient");
  return [c = std::move(coeffs)](std::span<const double> x, std::span<double> out) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x[0] + c[k];
    out[0] = acc;
  };
}

// Uniform 1-d grid, endpoints included.
inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("linspace: need at least one point");
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = 0.5 * (lo + hi);
    return g;
  }
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

// Flattened k x k tensor grid on [lo, hi]^2, row-major.
inline std::vector<double> tensor_grid_2d(double lo, double hi, int k) {
  const auto axis = linspace(lo, hi, k);
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(k) * 2);
  for (double a : axis)
    for (double b : axis) {
      g.push_back(a);
      g.push_back(b);
    }
  return g;
}

}  // namespace levyx
