#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "levyx/dataset.hpp"
#include "levyx/errors.hpp"
#include "levyx/parallel.hpp"
#include "levyx/rng.hpp"
#include "levyx/stable.hpp"
#include "levyx/systems.hpp"

namespace levyx {

// Ground-truth generator dx = b(x) dt + sigma dL_t with L_t an isotropic
// alpha-stable Levy motion. sigma = 0 is allowed and degenerates to the
// deterministic Euler scheme.
struct SdeModel {
  DriftFn drift;
  double alpha = 1.5;
  double sigma = 1.0;
  int dim = 1;

  void validate() const {
    if (!drift) throw DomainError("SdeModel: drift is not set");
    if (dim < 1) throw DomainError("SdeModel: dim must be >= 1");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("SdeModel: sigma must be >= 0");
    if (sigma > 0.0 && (!(alpha > 0.0) || alpha >= 2.0))
      throw DomainError("SdeModel: alpha must lie in (0, 2) when sigma > 0");
  }

  StableParams noise_params() const {
    if (sigma <= 0.0) throw DomainError("SdeModel: no noise parameters when sigma = 0");
    return StableParams(alpha, sigma, dim);
  }
};

struct SimConfig {
  double dt = 0.0;  // 0 means one step of length t_star
  int n_samples_per_z = 5000;
  std::vector<double> z_grid;  // flattened, dim-strided
  int dim = 1;
  std::uint64_t seed = 0;
  int threads = 1;

  std::size_t grid_size() const { return dim > 0 ? z_grid.size() / static_cast<std::size_t>(dim) : 0; }

  void validate() const {
    if (dim < 1) throw DomainError("SimConfig: dim must be >= 1");
    if (n_samples_per_z < 1) throw DomainError("SimConfig: n_samples_per_z must be >= 1");
    if (z_grid.empty() || z_grid.size() % static_cast<std::size_t>(dim) != 0)
      throw DomainError("SimConfig: z_grid must be a non-empty multiple of dim");
    if (dt < 0.0 || !std::isfinite(dt)) throw DomainError("SimConfig: dt must be >= 0");
  }
};

// Standard isotropic alpha-stable draw (gamma = 1) of the given dimension.
inline void sample_isotropic_standard(double alpha, int dim, Rng& rng, std::span<double> out) {
  if (dim == 1) {
    out[0] = sample_univariate_standard(alpha, rng);
    return;
  }
  const double a = sample_positive_stable(alpha / 2.0, mixture_scale(alpha, 1.0), rng);
  const double root = std::sqrt(a);
  for (auto& v : out) v = root * rng.normal();
}

// One Euler-Maruyama step: x + b(x) dt + sigma dt^{1/alpha} xi.
inline void em_step(const SdeModel& model, std::span<const double> x, double dt, Rng& rng,
                    std::span<double> out) {
  if (!(dt > 0.0)) throw DomainError("em_step: dt must be positive");
  const auto n = static_cast<std::size_t>(model.dim);
  thread_local std::vector<double> drift_buf;
  drift_buf.assign(n, 0.0);
  model.drift(x, drift_buf);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(drift_buf[i])) {
      std::string state = "(";
      for (std::size_t k = 0; k < n; ++k) state += std::to_string(x[k]) + (k + 1 < n ? "," : ")");
      throw SimulationError("drift returned a non-finite value at state " + state);
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + drift_buf[i] * dt;
  if (model.sigma > 0.0) {
    thread_local std::vector<double> noise_buf;
    noise_buf.assign(n, 0.0);
    sample_isotropic_standard(model.alpha, model.dim, rng, noise_buf);
    const double scale = model.sigma * std::pow(dt, 1.0 / model.alpha);
    for (std::size_t i = 0; i < n; ++i) out[i] += scale * noise_buf[i];
  }
}

// Simulates n_samples_per_z short trajectories of duration t_star from every
// grid point and records (z, x(t_star)). Each grid point draws from its own
// substream derived from (seed, grid index), so the dataset is reproducible
// and invariant to the worker count. Trajectories that reach a non-finite
// state are aborted and counted in the metadata.
inline BurstDataset simulate_burst(const SdeModel& model, const SimConfig& cfg, double t_star) {
  model.validate();
  cfg.validate();
  if (!(t_star > 0.0)) throw DomainError("simulate_burst: t_star must be positive");
  if (cfg.dim != model.dim) throw DomainError("simulate_burst: config dim does not match model dim");

  const double dt = cfg.dt == 0.0 ? t_star : cfg.dt;
  const auto steps = static_cast<long>(std::llround(t_star / dt));
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - t_star) > 1e-9 * t_star)
    throw DomainError("simulate_burst: dt must divide t_star");

  const auto n = static_cast<std::size_t>(model.dim);
  const std::size_t n_grid = cfg.grid_size();
  const auto per_z = static_cast<std::size_t>(cfg.n_samples_per_z);

  struct Block {
    std::vector<double> z, x;
    std::size_t aborted = 0;
  };
  std::vector<Block> blocks(n_grid);

  parallel_for(n_grid, cfg.threads, [&](std::size_t gi) {
    Rng rng = Rng::stream(cfg.seed, gi);
    Block& blk = blocks[gi];
    blk.z.reserve(per_z * n);
    blk.x.reserve(per_z * n);
    const std::span<const double> z0(cfg.z_grid.data() + gi * n, n);
    std::vector<double> cur(n), next(n);
    for (std::size_t s = 0; s < per_z; ++s) {
      std::copy(z0.begin(), z0.end(), cur.begin());
      bool ok = true;
      for (long step = 0; step < steps && ok; ++step) {
        try {
          em_step(model, cur, dt, rng, next);
        } catch (const SimulationError&) {
          ok = false;
          break;
        }
        cur.swap(next);
      }
      for (std::size_t i = 0; i < n && ok; ++i) ok = std::isfinite(cur[i]);
      if (!ok) {
        ++blk.aborted;
        continue;
      }
      blk.z.insert(blk.z.end(), z0.begin(), z0.end());
      blk.x.insert(blk.x.end(), cur.begin(), cur.end());
    }
  });

  BurstDataset ds;
  ds.t_star = t_star;
  ds.dim = model.dim;
  ds.seed = cfg.seed;
  for (auto& blk : blocks) {
    ds.z.insert(ds.z.end(), blk.z.begin(), blk.z.end());
    ds.x.insert(ds.x.end(), blk.x.begin(), blk.x.end());
    ds.aborted_trajectories += blk.aborted;
  }
  if (ds.z.empty()) throw SimulationError("all trajectories aborted; no records produced");
  return ds;
}

}  // namespace levyx
