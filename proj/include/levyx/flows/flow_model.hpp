#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyx/autodiff.hpp"
#include "levyx/errors.hpp"
#include "levyx/flows/coupling.hpp"
#include "levyx/flows/mlp.hpp"
#include "levyx/flows/rq_spline.hpp"
#include "levyx/rng.hpp"

namespace levyx::flows {

// ---------------------------------------------------------------------------
// Layers. A flow is a composition T = T_K o ... o T_1 mapping data x to the
// prior variable z; forward() runs the layers in storage order.
// ---------------------------------------------------------------------------

// Frozen affine data whitening y = (x - center) / scale. Not trainable; it
// conditions the downstream transforms, whose parameters are all learned.
struct StandardizeLayer {
  std::vector<double> center, scale;
};

// 1-d rational-quadratic spline transform. The conditioner network receives a
// fixed zero input (an elementwise transform in one dimension has nothing to
// condition on) and emits the 3K - 1 raw spline parameters.
struct RqSplineLayer {
  int bins = 5;
  double bound = 3.0;
  MlpSpec conditioner;
};

struct AffineCouplingLayer {
  bool swap = false;
  double c_hyper = 1.0;
  MlpSpec mu, nu;
};

using FlowLayer = std::variant<StandardizeLayer, RqSplineLayer, AffineCouplingLayer>;

inline std::size_t layer_param_count(const FlowLayer& layer) {
  return std::visit(
      [](const auto& l) -> std::size_t {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, StandardizeLayer>)
          return 0;  // frozen
        else if constexpr (std::is_same_v<L, RqSplineLayer>)
          return l.conditioner.param_count();
        else
          return l.mu.param_count() + l.nu.param_count();
      },
      layer);
}

namespace detail {

template <class T>
void spline_layer_params(const RqSplineLayer& l, std::span<const T> params, std::vector<T>& theta) {
  theta.resize(static_cast<std::size_t>(spline_raw_param_count(l.bins)));
  const T zero_in = ad::make_const(params[0], 0.0);
  l.conditioner.apply<T>(params, std::span<const T>(&zero_in, 1), theta);
}

// Applies one layer in place on `state`, accumulating log|det J|.
// For spline layers a precomputed raw-parameter vector can be supplied (the
// conditioner output is input-independent, so training evaluates it once per
// batch instead of once per sample).
template <class T>
void layer_forward(const FlowLayer& layer, std::span<const T> params, std::span<T> state, T& log_det,
                   const std::vector<T>* cached_theta = nullptr) {
  if (const auto* st = std::get_if<StandardizeLayer>(&layer)) {
    for (std::size_t i = 0; i < state.size(); ++i) {
      state[i] = (state[i] - st->center[i]) / st->scale[i];
      log_det = log_det + (-std::log(st->scale[i]));
    }
    return;
  }
  if (const auto* sp = std::get_if<RqSplineLayer>(&layer)) {
    std::vector<T> theta_local;
    const std::vector<T>* theta = cached_theta;
    if (theta == nullptr) {
      spline_layer_params<T>(*sp, params, theta_local);
      theta = &theta_local;
    }
    std::vector<T> xk, yk, dk;
    spline_knots_from_raw<T>(*theta, sp->bins, sp->bound, xk, yk, dk);
    auto r = spline_forward_knots<T>(xk, yk, dk, sp->bound, state[0]);
    state[0] = r.y;
    log_det = log_det + r.log_deriv;
    return;
  }
  const auto& cp = std::get<AffineCouplingLayer>(layer);
  const auto split = coupling_split(static_cast<int>(state.size()), cp.swap);
  coupling_forward_state<T>(cp.mu, cp.nu, params, split, cp.c_hyper, state, log_det);
}

inline void layer_inverse(const FlowLayer& layer, std::span<const double> params, std::span<double> state) {
  if (const auto* st = std::get_if<StandardizeLayer>(&layer)) {
    for (std::size_t i = 0; i < state.size(); ++i) state[i] = state[i] * st->scale[i] + st->center[i];
    return;
  }
  if (const auto* sp = std::get_if<RqSplineLayer>(&layer)) {
    std::vector<double> theta, xk, yk, dk;
    spline_layer_params<double>(*sp, params, theta);
    spline_knots_from_raw<double>(theta, sp->bins, sp->bound, xk, yk, dk);
    state[0] = spline_inverse_knots(xk, yk, dk, sp->bound, state[0]).y;
    return;
  }
  const auto& cp = std::get<AffineCouplingLayer>(layer);
  const auto split = coupling_split(static_cast<int>(state.size()), cp.swap);
  coupling_inverse_state(cp.mu, cp.nu, params, split, cp.c_hyper, state);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FlowModel: layer descriptors plus one flat trainable parameter vector.
// ---------------------------------------------------------------------------

class FlowModel {
public:
  int dim = 1;
  std::vector<FlowLayer> layers;
  std::vector<double> params;  // trainable parameters only, layer by layer

  void rebuild_offsets() {
    offsets_.assign(layers.size() + 1, 0);
    for (std::size_t l = 0; l < layers.size(); ++l) offsets_[l + 1] = offsets_[l] + layer_param_count(layers[l]);
    params.resize(offsets_.back(), 0.0);
  }

  std::size_t param_count() const { return params.size(); }

  std::span<const double> layer_params(std::size_t l) const {
    return {params.data() + offsets_[l], offsets_[l + 1] - offsets_[l]};
  }
  std::size_t layer_offset(std::size_t l) const { return offsets_[l]; }

  // Random initialization; every transform starts at the identity map.
  void init(std::uint64_t seed) {
    rebuild_offsets();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      Rng rng = Rng::stream(seed, 0x1000 + l);
      std::span<double> slice(params.data() + offsets_[l], offsets_[l + 1] - offsets_[l]);
      if (const auto* sp = std::get_if<RqSplineLayer>(&layers[l]))
        sp->conditioner.init_params(slice, rng);
      else if (const auto* cp = std::get_if<AffineCouplingLayer>(&layers[l])) {
        cp->mu.init_params(slice.subspan(0, cp->mu.param_count()), rng);
        cp->nu.init_params(slice.subspan(cp->mu.param_count()), rng);
      }
    }
  }

  // x -> (z, log|det J|), accumulated along the composition.
  std::pair<std::vector<double>, double> forward(std::span<const double> x) const {
    check_dim(x.size());
    std::vector<double> state(x.begin(), x.end());
    double log_det = 0.0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      detail::layer_forward<double>(layers[l], layer_params(l), state, log_det);
      for (double v : state)
        if (!std::isfinite(v))
          throw EvaluationError("non-finite state after transform " + std::to_string(l));
    }
    return {std::move(state), log_det};
  }

  std::vector<double> inverse(std::span<const double> z) const {
    check_dim(z.size());
    std::vector<double> state(z.begin(), z.end());
    for (std::size_t l = layers.size(); l-- > 0;)
      detail::layer_inverse(layers[l], layer_params(l), state);
    return state;
  }

  // log p_x(x) = log p_z(T(x)) + log|det J_T(x)| with a standard normal prior.
  double log_density(std::span<const double> x) const {
    const auto [z, log_det] = forward(x);
    double lp = -0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi);
    for (double v : z) lp -= 0.5 * v * v;
    return lp + log_det;
  }

  double density(std::span<const double> x) const { return std::exp(log_density(x)); }

  // Tape version over leaf parameter variables; used by grad_nll. cached
  // spline thetas (one per layer, empty if unused) avoid re-running constant
  // conditioners per sample.
  ad::Var log_density_ad(ad::Tape& tape, std::span<const ad::Var> pvars, std::span<const double> x,
                         const std::vector<std::vector<ad::Var>>& theta_cache) const {
    check_dim(x.size());
    std::vector<ad::Var> state;
    state.reserve(x.size());
    for (double v : x) state.push_back(tape.constant(v));
    ad::Var log_det = tape.constant(0.0);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::span<const ad::Var> slice(pvars.data() + offsets_[l], offsets_[l + 1] - offsets_[l]);
      const auto* cache = theta_cache.empty() || theta_cache[l].empty() ? nullptr : &theta_cache[l];
      detail::layer_forward<ad::Var>(layers[l], slice, state, log_det, cache);
    }
    ad::Var lp = tape.constant(-0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi));
    for (const auto& v : state) lp = lp - 0.5 * square(v);
    return lp + log_det;
  }

  // Precompute per-layer conditioner outputs that do not depend on the input.
  std::vector<std::vector<ad::Var>> make_theta_cache(std::span<const ad::Var> pvars) const {
    std::vector<std::vector<ad::Var>> cache(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      if (const auto* sp = std::get_if<RqSplineLayer>(&layers[l])) {
        const std::span<const ad::Var> slice(pvars.data() + offsets_[l], offsets_[l + 1] - offsets_[l]);
        detail::spline_layer_params<ad::Var>(*sp, slice, cache[l]);
      }
    }
    return cache;
  }

private:
  void check_dim(std::size_t got) const {
    if (static_cast<int>(got) != dim)
      throw DomainError("flow: input has dimension " + std::to_string(got) + ", model expects " +
                        std::to_string(dim));
  }

  std::vector<std::size_t> offsets_;
};

// Negative log-likelihood of a batch (sum over samples).
inline double nll_loss(const FlowModel& model, std::span<const double> batch_flat) {
  const auto d = static_cast<std::size_t>(model.dim);
  if (batch_flat.empty() || batch_flat.size() % d != 0)
    throw DomainError("nll_loss: batch must be a non-empty multiple of dim");
  double acc = 0.0;
  for (std::size_t i = 0; i < batch_flat.size(); i += d)
    acc -= model.log_density(batch_flat.subspan(i, d));
  return acc;
}

// Reverse-mode gradient of nll_loss with respect to all trainable
// parameters. Returns (loss, gradient).
inline std::pair<double, std::vector<double>> grad_nll(const FlowModel& model,
                                                       std::span<const double> batch_flat,
                                                       ad::Tape& tape) {
  const auto d = static_cast<std::size_t>(model.dim);
  if (batch_flat.empty() || batch_flat.size() % d != 0)
    throw DomainError("grad_nll: batch must be a non-empty multiple of dim");
  tape.clear();
  std::vector<ad::Var> pvars;
  pvars.reserve(model.param_count());
  for (double p : model.params) pvars.push_back(tape.leaf(p));
  const auto theta_cache = model.make_theta_cache(pvars);
  std::vector<ad::Var> terms;
  terms.reserve(batch_flat.size() / d);
  for (std::size_t i = 0; i < batch_flat.size(); i += d)
    terms.push_back(model.log_density_ad(tape, pvars, batch_flat.subspan(i, d), theta_cache));
  const ad::Var loss = -tape.sum(terms);
  if (!std::isfinite(loss.val)) throw TrainingError("nll_loss is non-finite");
  tape.backward(loss);
  std::vector<double> grad(model.param_count());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] = tape.grad(pvars[i]);
    if (!std::isfinite(grad[i]))
      throw TrainingError("non-finite gradient component at parameter index " + std::to_string(i));
  }
  return {loss.val, std::move(grad)};
}

inline std::pair<double, std::vector<double>> grad_nll(const FlowModel& model,
                                                       std::span<const double> batch_flat) {
  ad::Tape tape;
  return grad_nll(model, batch_flat, tape);
}

// ---------------------------------------------------------------------------
// Builders matching the two architectures used in the experiments.
// ---------------------------------------------------------------------------

// 1-d neural spline flow: a frozen whitening layer followed by n_transforms
// rational-quadratic spline transforms.
inline FlowModel build_nsf_1d(int n_transforms = 5, const std::vector<int>& hidden = {32, 32, 32},
                              int bins = 5, double bound = 3.0, std::uint64_t seed = 0) {
  if (n_transforms < 1 || bins < 1 || !(bound > 0.0)) throw DomainError("build_nsf_1d: invalid architecture");
  FlowModel m;
  m.dim = 1;
  m.layers.push_back(StandardizeLayer{{0.0}, {1.0}});
  for (int t = 0; t < n_transforms; ++t) {
    RqSplineLayer l;
    l.bins = bins;
    l.bound = bound;
    l.conditioner.sizes = {1};
    for (int h : hidden) l.conditioner.sizes.push_back(h);
    l.conditioner.sizes.push_back(spline_raw_param_count(bins));
    m.layers.push_back(std::move(l));
  }
  m.init(seed);
  return m;
}

// Real NVP: frozen whitening plus n_transforms affine coupling transforms
// with the coordinate roles flipped between consecutive transforms.
inline FlowModel build_realnvp(int dim, int n_transforms = 6, const std::vector<int>& hidden = {16, 16, 16},
                               double c_hyper = 1.0, std::uint64_t seed = 0) {
  if (dim < 2) throw DomainError("build_realnvp: dim must be >= 2");
  if (n_transforms < 1 || !(c_hyper > 0.0)) throw DomainError("build_realnvp: invalid architecture");
  FlowModel m;
  m.dim = dim;
  m.layers.push_back(StandardizeLayer{std::vector<double>(static_cast<std::size_t>(dim), 0.0),
                                      std::vector<double>(static_cast<std::size_t>(dim), 1.0)});
  for (int t = 0; t < n_transforms; ++t) {
    AffineCouplingLayer l;
    l.swap = (t % 2) == 1;
    l.c_hyper = c_hyper;
    const auto split = coupling_split(dim, l.swap);
    for (MlpSpec* spec : {&l.mu, &l.nu}) {
      spec->sizes = {static_cast<int>(split.id_size)};
      for (int h : hidden) spec->sizes.push_back(h);
      spec->sizes.push_back(static_cast<int>(split.tr_size));
    }
    m.layers.push_back(std::move(l));
  }
  m.init(seed);
  return m;
}

// ---------------------------------------------------------------------------
// Serialization: versioned JSON of architecture descriptor + parameters.
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const FlowModel& model) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : model.layers) {
    if (const auto* st = std::get_if<StandardizeLayer>(&layer))
      layers.push_back({{"type", "standardize"}, {"center", st->center}, {"scale", st->scale}});
    else if (const auto* sp = std::get_if<RqSplineLayer>(&layer))
      layers.push_back({{"type", "rq_spline"},
                        {"bins", sp->bins},
                        {"bound", sp->bound},
                        {"conditioner", sp->conditioner.sizes}});
    else {
      const auto& cp = std::get<AffineCouplingLayer>(layer);
      layers.push_back({{"type", "affine_coupling"},
                        {"swap", cp.swap},
                        {"C", cp.c_hyper},
                        {"mu", cp.mu.sizes},
                        {"nu", cp.nu.sizes}});
    }
  }
  return {{"format_version", 1}, {"dim", model.dim}, {"layers", layers}, {"params", model.params}};
}

inline FlowModel flow_from_json(const nlohmann::json& j) {
  if (j.value("format_version", 0) != 1) throw SchemaError("flow model: unsupported format_version");
  FlowModel m;
  m.dim = j.at("dim").get<int>();
  for (const auto& lj : j.at("layers")) {
    const auto type = lj.at("type").get<std::string>();
    if (type == "standardize")
      m.layers.push_back(StandardizeLayer{lj.at("center").get<std::vector<double>>(),
                                          lj.at("scale").get<std::vector<double>>()});
    else if (type == "rq_spline") {
      RqSplineLayer l;
      l.bins = lj.at("bins").get<int>();
      l.bound = lj.at("bound").get<double>();
      l.conditioner.sizes = lj.at("conditioner").get<std::vector<int>>();
      m.layers.push_back(std::move(l));
    } else if (type == "affine_coupling") {
      AffineCouplingLayer l;
      l.swap = lj.at("swap").get<bool>();
      l.c_hyper = lj.at("C").get<double>();
      l.mu.sizes = lj.at("mu").get<std::vector<int>>();
      l.nu.sizes = lj.at("nu").get<std::vector<int>>();
      m.layers.push_back(std::move(l));
    } else
      throw SchemaError("flow model: unknown layer type '" + type + "'");
  }
  m.rebuild_offsets();
  const auto params = j.at("params").get<std::vector<double>>();
  if (params.size() != m.param_count()) throw SchemaError("flow model: parameter count mismatch");
  m.params = params;
  return m;
}

inline void save_flow(const FlowModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << to_json(model).dump(2) << '\n';
}

inline FlowModel load_flow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("flow model JSON malformed: " + std::string(e.what()));
  }
  return flow_from_json(j);
}

}  // namespace levyx::flows
