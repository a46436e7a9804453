#pragma once

#include <cstddef>
#include <vector>

#include "mrfnet/dataset.hpp"
#include "mrfnet/interaction.hpp"
#include "mrfnet/network.hpp"
#include "mrfnet/random.hpp"

namespace fixtures {

using mrfnet::SplitMix64;
using mrfnet::SymmetricNetwork;

// Random network with every diagonal set and each pair present with
// probability `density`; off-diagonal weights in [lo, hi].
inline SymmetricNetwork random_network(std::size_t p, double density, double lo, double hi,
                                       SplitMix64& rng) {
  SymmetricNetwork t(p);
  for (std::size_t s = 0; s < p; ++s) {
    t.set(s, s, 2.0 * rng.uniform() - 1.0);
    for (std::size_t l = s + 1; l < p; ++l)
      if (rng.uniform() < density) t.set(s, l, lo + (hi - lo) * rng.uniform());
  }
  return t;
}

inline mrfnet::Dataset random_dataset(std::size_t n, std::size_t p, std::size_t m,
                                      SplitMix64& rng) {
  std::vector<mrfnet::Code> cells(n * p);
  for (auto& c : cells) c = static_cast<mrfnet::Code>(rng.below(m));
  return mrfnet::Dataset(n, p, cells);
}

// A random symmetric three-letter spec with B(u,u) = B0(u).
inline mrfnet::InteractionSpec random_spec3(SplitMix64& rng) {
  mrfnet::InteractionSpec spec{mrfnet::Alphabet(3), std::vector<double>(3),
                               std::vector<double>(3), std::vector<double>(9)};
  for (std::size_t u = 0; u < 3; ++u) {
    spec.a[u] = rng.uniform() - 0.5;
    for (std::size_t v = u; v < 3; ++v) spec.b[u * 3 + v] = spec.b[v * 3 + u] = 2 * rng.uniform() - 1;
    spec.b0[u] = spec.b[u * 3 + u];
  }
  return spec;
}

}  // namespace fixtures
