#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace levyx::ad {

// Minimal tape-based reverse-mode differentiation over scalars.
//
// The flow architectures in this library are small and fixed, so a flat tape
// with n-ary nodes (a fused dot-product node keeps MLP layers compact) is all
// the machinery training needs. Nodes are appended in evaluation order, which
// is already a topological order, so the backward pass is a single reverse
// sweep. Values are cached in the handle so data-dependent control flow
// (spline bin selection, tail branches) reads them without touching the tape.

class Tape;

struct Var {
  Tape* tape = nullptr;
  std::uint32_t idx = 0;
  double val = 0.0;
};

class Tape {
public:
  Var leaf(double v) { return push(v, static_cast<std::uint32_t>(parents_.size()), 0); }

  // Constant: participates in arithmetic but receives no gradient.
  Var constant(double v) { return push(v, static_cast<std::uint32_t>(parents_.size()), 0); }

  void clear() {
    nodes_.clear();
    parents_.clear();
  }

  std::size_t size() const { return nodes_.size(); }

  // Accumulates d(output)/d(node) into every node; read via grad().
  void backward(const Var& output) {
    assert(output.tape == this);
    for (auto& n : nodes_) n.grad = 0.0;
    nodes_[output.idx].grad = 1.0;
    for (std::size_t k = nodes_.size(); k-- > 0;) {
      const Node& n = nodes_[k];
      const double g = n.grad;
      if (g == 0.0 || n.pcnt == 0) continue;
      const Parent* ps = parents_.data() + n.pbeg;
      for (std::uint32_t i = 0; i < n.pcnt; ++i) nodes_[ps[i].idx].grad += g * ps[i].partial;
    }
  }

  double grad(const Var& v) const { return nodes_[v.idx].grad; }
  double value(const Var& v) const { return nodes_[v.idx].val; }

  // --- node construction -------------------------------------------------

  Var unary(double val, const Var& a, double pa) {
    const auto pbeg = static_cast<std::uint32_t>(parents_.size());
    parents_.push_back({a.idx, pa});
    return push(val, pbeg, 1);
  }

  Var binary(double val, const Var& a, double pa, const Var& b, double pb) {
    const auto pbeg = static_cast<std::uint32_t>(parents_.size());
    parents_.push_back({a.idx, pa});
    parents_.push_back({b.idx, pb});
    return push(val, pbeg, 2);
  }

  // dot(x, w) + b with partials d/dx_i = w_i, d/dw_i = x_i.
  Var dot_affine(std::span<const Var> x, std::span<const Var> w, const Var& b) {
    assert(x.size() == w.size());
    const auto pbeg = static_cast<std::uint32_t>(parents_.size());
    double val = b.val;
    for (std::size_t i = 0; i < x.size(); ++i) {
      val += x[i].val * w[i].val;
      parents_.push_back({x[i].idx, w[i].val});
      parents_.push_back({w[i].idx, x[i].val});
    }
    parents_.push_back({b.idx, 1.0});
    return push(val, pbeg, static_cast<std::uint32_t>(2 * x.size() + 1));
  }

  Var sum(std::span<const Var> xs) {
    const auto pbeg = static_cast<std::uint32_t>(parents_.size());
    double val = 0.0;
    for (const Var& x : xs) {
      val += x.val;
      parents_.push_back({x.idx, 1.0});
    }
    return push(val, pbeg, static_cast<std::uint32_t>(xs.size()));
  }

private:
  struct Parent {
    std::uint32_t idx;
    double partial;
  };
  struct Node {
    double val;
    double grad;
    std::uint32_t pbeg;
    std::uint32_t pcnt;
  };

  Var push(double val, std::uint32_t pbeg, std::uint32_t pcnt) {
    nodes_.push_back({val, 0.0, pbeg, pcnt});
    return {this, static_cast<std::uint32_t>(nodes_.size() - 1), val};
  }

  std::vector<Node> nodes_;
  std::vector<Parent> parents_;
};

// --- operators -----------------------------------------------------------

inline Var operator+(const Var& a, const Var& b) { return a.tape->binary(a.val + b.val, a, 1.0, b, 1.0); }
inline Var operator+(const Var& a, double c) { return a.tape->unary(a.val + c, a, 1.0); }
inline Var operator+(double c, const Var& a) { return a + c; }

inline Var operator-(const Var& a, const Var& b) { return a.tape->binary(a.val - b.val, a, 1.0, b, -1.0); }
inline Var operator-(const Var& a, double c) { return a.tape->unary(a.val - c, a, 1.0); }
inline Var operator-(double c, const Var& a) { return a.tape->unary(c - a.val, a, -1.0); }
inline Var operator-(const Var& a) { return a.tape->unary(-a.val, a, -1.0); }

inline Var operator*(const Var& a, const Var& b) { return a.tape->binary(a.val * b.val, a, b.val, b, a.val); }
inline Var operator*(const Var& a, double c) { return a.tape->unary(a.val * c, a, c); }
inline Var operator*(double c, const Var& a) { return a * c; }

inline Var operator/(const Var& a, const Var& b) {
  const double inv = 1.0 / b.val;
  return a.tape->binary(a.val * inv, a, inv, b, -a.val * inv * inv);
}
inline Var operator/(const Var& a, double c) { return a * (1.0 / c); }
inline Var operator/(double c, const Var& a) {
  const double inv = 1.0 / a.val;
  return a.tape->unary(c * inv, a, -c * inv * inv);
}

inline Var exp(const Var& a) {
  const double e = std::exp(a.val);
  return a.tape->unary(e, a, e);
}
inline Var log(const Var& a) { return a.tape->unary(std::log(a.val), a, 1.0 / a.val); }
inline Var sqrt(const Var& a) {
  const double r = std::sqrt(a.val);
  return a.tape->unary(r, a, 0.5 / r);
}
inline Var tanh(const Var& a) {
  const double t = std::tanh(a.val);
  return a.tape->unary(t, a, 1.0 - t * t);
}
// log(1 + exp(x)), overflow-safe
inline Var softplus(const Var& a) {
  const double v = a.val > 30.0 ? a.val : std::log1p(std::exp(a.val));
  const double d = 1.0 / (1.0 + std::exp(-a.val));
  return a.tape->unary(v, a, d);
}
inline Var square(const Var& a) { return a.tape->unary(a.val * a.val, a, 2.0 * a.val); }

// --- helpers shared by double/Var templated code --------------------------

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.val; }

// Mint a constant of the same scalar kind as `like`.
inline double make_const(double /*like*/, double c) { return c; }
inline Var make_const(const Var& like, double c) { return like.tape->constant(c); }

inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
inline double square(double x) { return x * x; }
inline double value_sum(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace levyx::ad
