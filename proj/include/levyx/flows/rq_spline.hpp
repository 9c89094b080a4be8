#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "levyx/autodiff.hpp"
#include "levyx/errors.hpp"

namespace levyx::flows {

// Monotonic rational-quadratic spline on [-B, B] with identity tails.
//
// A spline with K bins is described by K bin widths and heights (positive,
// each family summing to 2B) and K+1 knot derivatives, with the boundary
// derivatives fixed at 1 so the map continues as the identity outside
// [-B, B]. The in-bin map and its inverse follow the standard monotone
// rational-quadratic construction.

inline constexpr double kMinBinFraction = 1e-3;
inline constexpr double kMinDerivative = 1e-3;

constexpr int spline_raw_param_count(int bins) { return 3 * bins - 1; }

template <class T>
struct SplineValue {
  T y;
  T log_deriv;
};

namespace detail {

// Bin index for position v given knot values (as plain doubles).
template <class T>
std::size_t find_bin(std::span<const T> knots, double v) {
  std::size_t k = 0;
  while (k + 2 < knots.size() && ad::value_of(knots[k + 1]) <= v) ++k;
  return k;
}

}  // namespace detail

// Forward map through explicit knots. xk/yk have K+1 entries, dk has K+1
// (boundary entries must equal 1 for continuous identity tails).
template <class T>
SplineValue<T> spline_forward_knots(std::span<const T> xk, std::span<const T> yk, std::span<const T> dk,
                                    double bound, const T& x) {
  using std::log;
  using ad::square;
  const double v = ad::value_of(x);
  if (v <= -bound || v >= bound) return {x, ad::make_const(x, 0.0)};
  const std::size_t k = detail::find_bin(xk, v);
  const T w = xk[k + 1] - xk[k];
  const T h = yk[k + 1] - yk[k];
  const T s = h / w;
  const T xi = (x - xk[k]) / w;
  const T om = 1.0 - xi;
  const T xi_om = xi * om;
  const T denom = s + (dk[k + 1] + dk[k] - 2.0 * s) * xi_om;
  const T y = yk[k] + h * (s * square(xi) + dk[k] * xi_om) / denom;
  const T deriv = square(s) * (dk[k + 1] * square(xi) + 2.0 * s * xi_om + dk[k] * square(om)) / square(denom);
  return {y, log(deriv)};
}

// Inverse map (double precision only; training never differentiates it).
inline SplineValue<double> spline_inverse_knots(std::span<const double> xk, std::span<const double> yk,
                                                std::span<const double> dk, double bound, double y) {
  if (y <= -bound || y >= bound) return {y, 0.0};
  const std::size_t k = detail::find_bin(yk, y);
  const double w = xk[k + 1] - xk[k];
  const double h = yk[k + 1] - yk[k];
  const double s = h / w;
  const double term = y - yk[k];
  const double q = dk[k + 1] + dk[k] - 2.0 * s;
  const double a = h * (s - dk[k]) + term * q;
  const double b = h * dk[k] - term * q;
  const double c = -s * term;
  const double xi = 2.0 * c / (-b - std::sqrt(b * b - 4.0 * a * c));
  const double x = xk[k] + xi * w;
  const double om = 1.0 - xi;
  const double denom = s + q * xi * om;
  const double deriv = s * s * (dk[k + 1] * xi * xi + 2.0 * s * xi * om + dk[k] * om * om) / (denom * denom);
  return {x, std::log(deriv)};
}

// Builds knots from an unconstrained raw parameter vector of length 3K - 1:
// K width logits, K height logits, K - 1 interior derivative logits. Widths
// and heights go through a floored softmax; derivatives through a shifted
// softplus that maps 0 to exactly 1, so zero raw parameters give the
// identity spline.
template <class T>
void spline_knots_from_raw(std::span<const T> raw, int bins, double bound, std::vector<T>& xk,
                           std::vector<T>& yk, std::vector<T>& dk) {
  using std::exp;  // std:: for double, ADL for ad::Var
  using ad::softplus;
  const auto kb = static_cast<std::size_t>(bins);
  xk.clear();
  yk.clear();
  dk.clear();

  auto fill_knots = [&](std::span<const T> logits, std::vector<T>& knots) {
    double vmax = ad::value_of(logits[0]);
    for (const auto& l : logits) vmax = std::max(vmax, ad::value_of(l));
    std::vector<T> expd;
    expd.reserve(kb);
    for (const auto& l : logits) expd.push_back(exp(l - vmax));
    T total = expd[0];
    for (std::size_t i = 1; i < kb; ++i) total = total + expd[i];
    knots.push_back(ad::make_const(raw[0], -bound));
    for (std::size_t i = 0; i < kb; ++i) {
      const T frac = kMinBinFraction + (1.0 - bins * kMinBinFraction) * (expd[i] / total);
      knots.push_back(knots.back() + (2.0 * bound) * frac);
    }
  };
  fill_knots(raw.subspan(0, kb), xk);
  fill_knots(raw.subspan(kb, kb), yk);

  // softplus(c0) == 1 - kMinDerivative, so raw = 0 gives derivative 1
  const double c0 = std::log(std::expm1(1.0 - kMinDerivative));
  dk.push_back(ad::make_const(raw[0], 1.0));
  for (std::size_t j = 0; j < kb - 1; ++j) dk.push_back(kMinDerivative + softplus(raw[2 * kb + j] + c0));
  dk.push_back(ad::make_const(raw[0], 1.0));
}

// Public fixed-parameter operation: explicit widths/heights/interior
// derivatives. Non-positive entries or families that fail to cover [-B, B]
// are construction errors.
inline SplineValue<double> rq_spline_forward(std::span<const double> widths, std::span<const double> heights,
                                             std::span<const double> interior_derivs, double bound, double x) {
  const std::size_t k = widths.size();
  if (k < 1 || heights.size() != k || interior_derivs.size() + 1 != k)
    throw DomainError("rq_spline_forward: need K widths, K heights, K-1 interior derivatives");
  if (!(bound > 0.0)) throw DomainError("rq_spline_forward: bound must be positive");
  double sw = 0.0, sh = 0.0;
  for (double w : widths) {
    if (!(w > 0.0)) throw DomainError("rq_spline_forward: non-positive bin width");
    sw += w;
  }
  for (double h : heights) {
    if (!(h > 0.0)) throw DomainError("rq_spline_forward: non-positive bin height");
    sh += h;
  }
  for (double d : interior_derivs)
    if (!(d > 0.0)) throw DomainError("rq_spline_forward: non-positive knot derivative");
  if (std::abs(sw - 2.0 * bound) > 1e-8 * bound || std::abs(sh - 2.0 * bound) > 1e-8 * bound)
    throw DomainError("rq_spline_forward: widths/heights must cover [-B, B]");

  std::vector<double> xk{-bound}, yk{-bound}, dk{1.0};
  for (double w : widths) xk.push_back(xk.back() + w);
  for (double h : heights) yk.push_back(yk.back() + h);
  for (double d : interior_derivs) dk.push_back(d);
  dk.push_back(1.0);
  return spline_forward_knots<double>(xk, yk, dk, bound, x);
}

}  // namespace levyx::flows
