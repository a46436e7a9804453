#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mrfnet/dataset.hpp"
#include "mrfnet/interaction.hpp"
#include "mrfnet/network.hpp"

namespace mrfnet {

// Numerically stable log(sum(exp(h))) by max subtraction.
double log_sum_exp(std::span<const double> h);

// Unnormalized node-conditional log weights
//   h(u) = A(u) + theta(s,s) B0(u) + sum_{l != s} theta(s,l) B(u, x_l)
// written into `out` (size m). `x` is a full configuration of length p;
// x[s] is ignored. Throws ArgumentError on an invalid code.
void conditional_logits(std::size_t s, std::span<const Code> x, const SymmetricNetwork& theta,
                        const InteractionSpec& spec, std::span<double> out);

// Distribution of X_s given the other coordinates of x.
std::vector<double> conditional_distribution(std::size_t s, std::span<const Code> x,
                                             const SymmetricNetwork& theta,
                                             const InteractionSpec& spec);

// log Z^(s)(x) = log sum_u exp h(u).
double log_conditional_normalizer(std::size_t s, std::span<const Code> x,
                                  const SymmetricNetwork& theta, const InteractionSpec& spec);

// log f^(s)(x_s | x_{-s}).
double log_conditional(std::size_t s, std::span<const Code> x, const SymmetricNetwork& theta,
                       const InteractionSpec& spec);

// Joint energy sum_s (A(x_s) + theta(s,s) B0(x_s)) + sum_{s<l} theta(s,l) B(x_s,x_l).
double joint_energy(std::span<const Code> x, const SymmetricNetwork& theta,
                    const InteractionSpec& spec);

// Exhaustive enumeration is limited to this many states (2^21).
inline constexpr std::size_t kMaxEnumerationStates = std::size_t{1} << 21;

// m^p, or throws CapacityError when above kMaxEnumerationStates.
std::size_t state_count(std::size_t p, std::size_t m);

// State index k encodes x_s = (k / m^s) mod m, i.e. node 0 varies fastest.
std::vector<Code> decode_state(std::size_t index, std::size_t p, std::size_t m);
std::size_t encode_state(std::span<const Code> x, std::size_t m);

// log Z_theta by exhaustive summation.
double log_partition(const SymmetricNetwork& theta, const InteractionSpec& spec);

// log f_theta(x) with Z_theta by exhaustive summation.
double joint_log_pmf(std::span<const Code> x, const SymmetricNetwork& theta,
                     const InteractionSpec& spec);

// The full joint pmf indexed as in decode_state.
std::vector<double> enumerate_joint(const SymmetricNetwork& theta, const InteractionSpec& spec);

}  // namespace mrfnet
