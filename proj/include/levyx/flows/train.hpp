#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "levyx/errors.hpp"
#include "levyx/flows/flow_model.hpp"
#include "levyx/rng.hpp"

namespace levyx::flows {

struct TrainConfig {
  int epochs = 300;
  int batch_size = 256;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;
  bool standardize = true;

  void validate() const {
    if (epochs < 1) throw DomainError("TrainConfig: epochs must be >= 1");
    if (batch_size < 1) throw DomainError("TrainConfig: batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw DomainError("TrainConfig: learning_rate must be positive");
    if (validation_fraction < 0.0 || validation_fraction > 0.5)
      throw DomainError("TrainConfig: validation_fraction must lie in [0, 0.5]");
  }
};

// Per-epoch mean negative log-likelihood per sample; val entries are NaN when
// no validation split was requested.
struct TrainHistory {
  std::vector<double> train_nll;
  std::vector<double> val_nll;
};

namespace detail {

// Median/IQR whitening; heavy-tailed burst data has no finite variance, so
// moment-based scaling is unusable.
inline void fit_standardizer(StandardizeLayer& layer, std::span<const double> data, int dim) {
  const auto d = static_cast<std::size_t>(dim);
  const std::size_t n = data.size() / d;
  layer.center.assign(d, 0.0);
  layer.scale.assign(d, 1.0);
  std::vector<double> col(n);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = data[i * d + k];
    std::sort(col.begin(), col.end());
    const double med = col[n / 2];
    const double q1 = col[n / 4];
    const double q3 = col[(3 * n) / 4];
    double scale = (q3 - q1) / 1.349;  // matches the standard deviation for a normal bulk
    if (!(scale > 1e-12)) scale = 1.0;
    layer.center[k] = med;
    layer.scale[k] = scale;
  }
}

}  // namespace detail

// Minibatch Adam over the model's flat parameter vector. Deterministic for a
// fixed seed: the train/validation split, epoch shuffles and update order are
// all driven by substreams of cfg.seed.
inline TrainHistory train(FlowModel& model, std::span<const double> data_flat, const TrainConfig& cfg) {
  cfg.validate();
  const auto d = static_cast<std::size_t>(model.dim);
  if (data_flat.empty() || data_flat.size() % d != 0)
    throw DomainError("train: data must be a non-empty multiple of dim");
  const std::size_t n = data_flat.size() / d;

  if (cfg.standardize) {
    if (auto* st = model.layers.empty() ? nullptr : std::get_if<StandardizeLayer>(&model.layers.front()))
      detail::fit_standardizer(*st, data_flat, model.dim);
  }

  // split
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng = Rng::stream(cfg.seed, 0x5eed);
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(split_rng.uniform01_open() * static_cast<double>(i))]);
  const auto n_val = static_cast<std::size_t>(cfg.validation_fraction * static_cast<double>(n));
  std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> val_idx(order.end() - static_cast<std::ptrdiff_t>(n_val), order.end());
  if (train_idx.empty()) throw DomainError("train: no training samples left after the validation split");

  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::vector<double> m1(model.param_count(), 0.0), m2(model.param_count(), 0.0);
  std::size_t step = 0;

  TrainHistory history;
  ad::Tape tape;
  std::vector<double> batch;
  const auto bs = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng epoch_rng = Rng::stream(cfg.seed, 0xe90c + static_cast<std::uint64_t>(epoch));
    for (std::size_t i = train_idx.size(); i > 1; --i)
      std::swap(train_idx[i - 1],
                train_idx[static_cast<std::size_t>(epoch_rng.uniform01_open() * static_cast<double>(i))]);

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += bs) {
      const std::size_t stop = std::min(start + bs, train_idx.size());
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) {
        const double* rec = data_flat.data() + train_idx[i] * d;
        batch.insert(batch.end(), rec, rec + d);
      }
      auto [loss, grad] = grad_nll(model, batch, tape);
      epoch_loss += loss;
      const double inv_bs = 1.0 / static_cast<double>(stop - start);
      ++step;
      const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (std::size_t p = 0; p < grad.size(); ++p) {
        const double g = grad[p] * inv_bs;
        m1[p] = beta1 * m1[p] + (1.0 - beta1) * g;
        m2[p] = beta2 * m2[p] + (1.0 - beta2) * g * g;
        model.params[p] -= cfg.learning_rate * (m1[p] / corr1) / (std::sqrt(m2[p] / corr2) + eps);
      }
    }
    const double train_mean = epoch_loss / static_cast<double>(train_idx.size());
    if (!std::isfinite(train_mean))
      throw TrainingError("loss diverged at epoch " + std::to_string(epoch));
    history.train_nll.push_back(train_mean);

    if (!val_idx.empty()) {
      double val_loss = 0.0;
      std::vector<double> rec(d);
      for (std::size_t i : val_idx) {
        std::copy_n(data_flat.data() + i * d, d, rec.begin());
        val_loss -= model.log_density(rec);
      }
      history.val_nll.push_back(val_loss / static_cast<double>(val_idx.size()));
    } else {
      history.val_nll.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return history;
}

inline void save_history_csv(const TrainHistory& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "epoch,train_nll,val_nll\n";
  char buf[96];
  for (std::size_t e = 0; e < h.train_nll.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", e, h.train_nll[e], h.val_nll[e]);
    out << buf;
  }
}

}  // namespace levyx::flows
