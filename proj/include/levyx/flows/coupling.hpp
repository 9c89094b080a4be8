#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "levyx/autodiff.hpp"
#include "levyx/errors.hpp"
#include "levyx/flows/mlp.hpp"

namespace levyx::flows {

// Affine coupling transform: the identity block x1 passes through unchanged,
// the transformed block obeys z2 = (x2 exp(mu(x1)) + nu(x1)) / C with two
// conditioner networks mu and nu. log|det J| = sum(mu(x1)) - |x2| ln C.
// The inverse is algebraic: x2 = (C z2 - nu(x1)) exp(-mu(x1)).

struct CouplingSplit {
  std::size_t id_begin, id_size;        // identity block
  std::size_t tr_begin, tr_size;        // transformed block
};

// Contiguous half split; swap exchanges the roles of the two halves.
inline CouplingSplit coupling_split(int dim, bool swap) {
  if (dim < 2) throw DomainError("coupling transform needs dim >= 2");
  const auto d = static_cast<std::size_t>(dim);
  const std::size_t h = d / 2;
  if (!swap) return {0, h, h, d - h};
  return {h, d - h, 0, h};
}

// Forward through one coupling transform, in place on `state`.
// mu_nu_params = [mu params | nu params].
template <class T>
void coupling_forward_state(const MlpSpec& mu, const MlpSpec& nu, std::span<const T> mu_nu_params,
                            const CouplingSplit& split, double c_hyper, std::span<T> state, T& log_det_acc) {
  using std::exp;
  using std::log;
  std::vector<T> x1(state.begin() + static_cast<std::ptrdiff_t>(split.id_begin),
                    state.begin() + static_cast<std::ptrdiff_t>(split.id_begin + split.id_size));
  std::vector<T> mu_out(split.tr_size), nu_out(split.tr_size);
  mu.apply<T>(mu_nu_params.subspan(0, mu.param_count()), x1, mu_out);
  nu.apply<T>(mu_nu_params.subspan(mu.param_count(), nu.param_count()), x1, nu_out);
  const double log_c = std::log(c_hyper);
  for (std::size_t j = 0; j < split.tr_size; ++j) {
    T& x2 = state[split.tr_begin + j];
    x2 = (x2 * exp(mu_out[j]) + nu_out[j]) / c_hyper;
    log_det_acc = log_det_acc + (mu_out[j] - log_c);
  }
}

inline void coupling_inverse_state(const MlpSpec& mu, const MlpSpec& nu, std::span<const double> mu_nu_params,
                                   const CouplingSplit& split, double c_hyper, std::span<double> state) {
  std::vector<double> x1(state.begin() + static_cast<std::ptrdiff_t>(split.id_begin),
                         state.begin() + static_cast<std::ptrdiff_t>(split.id_begin + split.id_size));
  std::vector<double> mu_out(split.tr_size), nu_out(split.tr_size);
  mu.apply<double>(mu_nu_params.subspan(0, mu.param_count()), x1, mu_out);
  nu.apply<double>(mu_nu_params.subspan(mu.param_count(), nu.param_count()), x1, nu_out);
  for (std::size_t j = 0; j < split.tr_size; ++j) {
    double& z2 = state[split.tr_begin + j];
    z2 = (c_hyper * z2 - nu_out[j]) * std::exp(-mu_out[j]);
  }
}

// Standalone operation used by tests: full input/output vectors.
struct CouplingResult {
  std::vector<double> z;
  double log_det;
};

inline CouplingResult coupling_forward(const MlpSpec& mu, const MlpSpec& nu,
                                       std::span<const double> mu_nu_params, std::span<const double> x,
                                       bool swap, double c_hyper) {
  if (!(c_hyper > 0.0)) throw DomainError("coupling_forward: C must be positive");
  CouplingResult out;
  out.z.assign(x.begin(), x.end());
  out.log_det = 0.0;
  const auto split = coupling_split(static_cast<int>(x.size()), swap);
  coupling_forward_state<double>(mu, nu, mu_nu_params, split, c_hyper, out.z, out.log_det);
  return out;
}

}  // namespace levyx::flows
