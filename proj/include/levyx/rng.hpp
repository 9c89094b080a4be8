#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace levyx {

// splitmix64 step; used for seeding and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable 64-bit generator (xoshiro256++) with deterministic substreams.
//
// All stochastic code in the library draws from an injected Rng. Substreams
// are derived by hashing (seed, stream id), so parallel work partitioned by
// stream id produces results that are independent of scheduling and worker
// count. Gaussian and exponential variates are generated with explicit
// formulas (Box-Muller, inverse CDF) rather than std:: distributions, whose
// algorithms are implementation-defined; byte-identical reproducibility is a
// contract here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& w : state_) w = splitmix64(st);
  }

  // Independent substream for (seed, stream_id).
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t st = seed;
    std::uint64_t mixed = splitmix64(st) ^ (stream_id * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    return Rng(mixed);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0, 1]; never returns 0, so log() is always finite.
  double uniform01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); endpoints excluded on both sides.
  double uniform01_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01_open(); }

  // Standard normal via Box-Muller; generates pairs, caches the second.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open();
    const double u2 = uniform01_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Exponential(1), strictly positive.
  double exponential() { return -std::log(uniform01_open()); }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levyx
