#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "levyx/autodiff.hpp"
#include "levyx/errors.hpp"
#include "levyx/rng.hpp"

namespace levyx::flows {

// Fully connected conditioner with tanh hidden activations and a linear
// output layer. Parameters live in an external flat vector (layout per layer:
// weights row-major [out][in], then biases); the spec only describes shapes.
//
// The final layer is zero-initialized so freshly built transforms start at
// the identity map; hidden weights and biases get random non-zero values so
// gradients can flow even when the input is a constant.
struct MlpSpec {
  std::vector<int> sizes;  // input, hidden..., output

  std::size_t param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
      n += static_cast<std::size_t>(sizes[l] + 1) * static_cast<std::size_t>(sizes[l + 1]);
    return n;
  }

  void init_params(std::span<double> params, Rng& rng) const {
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      const auto nin = static_cast<std::size_t>(sizes[l]);
      const auto nout = static_cast<std::size_t>(sizes[l + 1]);
      const bool last = l + 2 == sizes.size();
      const double bound = std::sqrt(6.0 / static_cast<double>(nin + nout));
      for (std::size_t j = 0; j < nout * nin; ++j)
        params[off + j] = last ? 0.0 : rng.uniform(-bound, bound);
      off += nout * nin;
      for (std::size_t j = 0; j < nout; ++j) params[off + j] = last ? 0.0 : rng.uniform(-0.1, 0.1);
      off += nout;
    }
  }

  template <class T>
  void apply(std::span<const T> params, std::span<const T> in, std::span<T> out) const {
    std::vector<T> cur(in.begin(), in.end());
    std::vector<T> next;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      const auto nin = static_cast<std::size_t>(sizes[l]);
      const auto nout = static_cast<std::size_t>(sizes[l + 1]);
      const bool last = l + 2 == sizes.size();
      next.resize(nout);
      for (std::size_t j = 0; j < nout; ++j) {
        const auto w = params.subspan(off + j * nin, nin);
        const T& b = params[off + nout * nin + j];
        if constexpr (std::is_same_v<T, ad::Var>) {
          next[j] = b.tape->dot_affine(std::span<const T>(cur), w, b);
          if (!last) next[j] = tanh(next[j]);
        } else {
          double acc = b;
          for (std::size_t i = 0; i < nin; ++i) acc += w[i] * cur[i];
          next[j] = last ? acc : std::tanh(acc);
        }
      }
      off += (nin + 1) * nout;
      cur.swap(next);
    }
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = cur[j];
  }
};

}  // namespace levyx::flows
