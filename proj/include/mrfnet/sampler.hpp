#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfnet/dataset.hpp"
#include "mrfnet/interaction.hpp"
#include "mrfnet/network.hpp"
#include "mrfnet/random.hpp"

namespace mrfnet {

enum class SamplerMethod { CFTP, GIBBS, ENUM };

struct SamplerConfig {
  SamplerMethod method = SamplerMethod::CFTP;
  std::size_t burn_in = 1000;  // GIBBS
  std::size_t thinning = 10;   // GIBBS, sweeps between retained draws
  std::uint64_t seed = 0;
  std::size_t max_cftp_epochs = 24;  // start times -1, -2, ..., -2^(epochs-1)

  void validate() const;
};

const char* to_string(SamplerMethod method);
SamplerMethod sampler_method_from_string(const char* name);

// Sets x[s] to the smallest code u with F(u) >= uniform, where F is the CDF
// of the node-s conditional given x. For attractive networks on a
// supermodular spec this update is monotone in x.
void inverse_cdf_update(std::size_t s, std::span<Code> x, const SymmetricNetwork& theta,
                        const InteractionSpec& spec, double uniform);

// One systematic-scan Gibbs sweep over nodes 0..p-1.
std::vector<Code> gibbs_sweep(std::vector<Code> state, const SymmetricNetwork& theta,
                              const InteractionSpec& spec, SplitMix64& rng);

// A single Gibbs chain: burn_in sweeps, then `draws` states retained every
// cfg.thinning sweeps. Starts from a uniformly random state.
Dataset gibbs_chain(const SymmetricNetwork& theta, const InteractionSpec& spec, std::size_t draws,
                    const SamplerConfig& cfg);

struct CftpDraw {
  std::vector<Code> state;
  std::int64_t start_time;  // the (negative) start time at which the chains coalesced
};

// Monotone coupling from the past (Propp-Wilson). Requires theta(s,l) >= 0
// off the diagonal and a supermodular B; throws PreconditionError otherwise
// and SamplerTimeout when no coalescence happens within max_epochs doublings.
CftpDraw sample_cftp(const SymmetricNetwork& theta, const InteractionSpec& spec,
                     std::uint64_t seed, std::size_t max_epochs = 24);

// n independent draws. Row i depends only on (cfg.seed, i).
Dataset sample_dataset(const SymmetricNetwork& theta, const InteractionSpec& spec, std::size_t n,
                       const SamplerConfig& cfg);

// The same row, reproduced in isolation.
std::vector<Code> sample_row(const SymmetricNetwork& theta, const InteractionSpec& spec,
                             std::size_t row, const SamplerConfig& cfg);

struct ProjectedDataset {
  Dataset data;
  std::vector<std::size_t> kept;  // kept[j] = original index of column j
};

// Removes the `hidden` columns, preserving row order and the order of the rest.
ProjectedDataset drop_nodes(const Dataset& data, std::span<const std::size_t> hidden);

}  // namespace mrfnet
