#include "mrfnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mrfnet/errors.hpp"

namespace mrfnet {

double log_sum_exp(std::span<const double> h) {
  const double mx = *std::max_element(h.begin(), h.end());
  if (!std::isfinite(mx)) return mx;
  double sum = 0.0;
  for (double v : h) sum += std::exp(v - mx);
  return mx + std::log(sum);
}

namespace {

void check_configuration(std::size_t s, std::span<const Code> x, const SymmetricNetwork& theta,
                         const InteractionSpec& spec) {
  if (s >= theta.p()) throw ArgumentError("node index out of range");
  if (x.size() != theta.p())
    throw ArgumentError("configuration length " + std::to_string(x.size()) +
                        " != network size " + std::to_string(theta.p()));
  for (std::size_t l = 0; l < x.size(); ++l)
    if (l != s && !spec.alphabet.contains(x[l]))
      throw ArgumentError("invalid code " + std::to_string(x[l]) + " at node " +
                          std::to_string(l));
}

}  // namespace

void conditional_logits(std::size_t s, std::span<const Code> x, const SymmetricNetwork& theta,
                        const InteractionSpec& spec, std::span<double> out) {
  check_configuration(s, x, theta, spec);
  const std::size_t m = spec.m();
  const double self = theta.diagonal(s);
  for (std::size_t u = 0; u < m; ++u) out[u] = spec.A(u) + self * spec.B0(u);
  for (const auto& nb : theta.neighbors(s)) {
    const std::size_t xl = x[nb.node];
    for (std::size_t u = 0; u < m; ++u) out[u] += nb.weight * spec.B(u, xl);
  }
}

std::vector<double> conditional_distribution(std::size_t s, std::span<const Code> x,
                                             const SymmetricNetwork& theta,
                                             const InteractionSpec& spec) {
  std::vector<double> h(spec.m());
  conditional_logits(s, x, theta, spec, h);
  const double mx = *std::max_element(h.begin(), h.end());
  double sum = 0.0;
  for (double& v : h) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : h) v /= sum;
  return h;
}

double log_conditional_normalizer(std::size_t s, std::span<const Code> x,
                                  const SymmetricNetwork& theta, const InteractionSpec& spec) {
  std::vector<double> h(spec.m());
  conditional_logits(s, x, theta, spec, h);
  return log_sum_exp(h);
}

double log_conditional(std::size_t s, std::span<const Code> x, const SymmetricNetwork& theta,
                       const InteractionSpec& spec) {
  if (s < x.size() && !spec.alphabet.contains(x[s]))
    throw ArgumentError("invalid code at node " + std::to_string(s));
  std::vector<double> h(spec.m());
  conditional_logits(s, x, theta, spec, h);
  return h[x[s]] - log_sum_exp(h);
}

double joint_energy(std::span<const Code> x, const SymmetricNetwork& theta,
                    const InteractionSpec& spec) {
  if (x.size() != theta.p()) throw ArgumentError("configuration length != network size");
  double e = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (!spec.alphabet.contains(x[s]))
      throw ArgumentError("invalid code at node " + std::to_string(s));
    e += spec.A(x[s]) + theta.diagonal(s) * spec.B0(x[s]);
    for (const auto& nb : theta.neighbors(s))
      if (nb.node > s) e += nb.weight * spec.B(x[s], x[nb.node]);
  }
  return e;
}

std::size_t state_count(std::size_t p, std::size_t m) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < p; ++i) {
    count *= m;
    if (count > kMaxEnumerationStates)
      throw CapacityError("state space " + std::to_string(m) + "^" + std::to_string(p) +
                          " exceeds the enumeration limit of " +
                          std::to_string(kMaxEnumerationStates) + " states");
  }
  return count;
}

std::vector<Code> decode_state(std::size_t index, std::size_t p, std::size_t m) {
  std::vector<Code> x(p);
  for (std::size_t s = 0; s < p; ++s) {
    x[s] = static_cast<Code>(index % m);
    index /= m;
  }
  return x;
}

std::size_t encode_state(std::span<const Code> x, std::size_t m) {
  std::size_t index = 0;
  for (std::size_t s = x.size(); s-- > 0;) index = index * m + x[s];
  return index;
}

namespace {

std::vector<double> enumerate_energies(const SymmetricNetwork& theta,
                                       const InteractionSpec& spec) {
  spec.check_shapes();
  const std::size_t m = spec.m();
  const std::size_t count = state_count(theta.p(), m);
  std::vector<double> energies(count);
  std::vector<Code> x(theta.p(), 0);
  for (std::size_t k = 0; k < count; ++k) {
    energies[k] = joint_energy(x, theta, spec);
    // Odometer increment, node 0 fastest.
    for (std::size_t s = 0; s < x.size(); ++s) {
      if (++x[s] < m) break;
      x[s] = 0;
    }
  }
  return energies;
}

}  // namespace

double log_partition(const SymmetricNetwork& theta, const InteractionSpec& spec) {
  return log_sum_exp(enumerate_energies(theta, spec));
}

double joint_log_pmf(std::span<const Code> x, const SymmetricNetwork& theta,
                     const InteractionSpec& spec) {
  const double log_z = log_partition(theta, spec);
  return joint_energy(x, theta, spec) - log_z;
}

std::vector<double> enumerate_joint(const SymmetricNetwork& theta, const InteractionSpec& spec) {
  std::vector<double> e = enumerate_energies(theta, spec);
  const double log_z = log_sum_exp(e);
  for (double& v : e) v = std::exp(v - log_z);
  return e;
}

}  // namespace mrfnet
