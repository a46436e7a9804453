#pragma once

// Reference computations written straight from the model definitions, sharing
// no code with the library beyond the container types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "mrfnet/dataset.hpp"
#include "mrfnet/interaction.hpp"
#include "mrfnet/network.hpp"

namespace oracle {

using mrfnet::Code;
using mrfnet::Dataset;
using mrfnet::InteractionSpec;
using mrfnet::SymmetricNetwork;

// Dense symmetric copy.
inline std::vector<std::vector<double>> dense(const SymmetricNetwork& t) {
  const std::size_t p = t.p();
  std::vector<std::vector<double>> m(p, std::vector<double>(p, 0.0));
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t l = 0; l < p; ++l) m[s][l] = t.get(s, l);
  return m;
}

// All configurations in lexicographic order with node 0 fastest.
inline std::vector<std::vector<Code>> all_states(std::size_t p, std::size_t m) {
  std::vector<std::vector<Code>> out;
  std::vector<Code> x(p, 0);
  while (true) {
    out.push_back(x);
    std::size_t s = 0;
    while (s < p && ++x[s] == m) x[s++] = 0;
    if (s == p) break;
  }
  return out;
}

inline double energy(const std::vector<Code>& x, const std::vector<std::vector<double>>& th,
                     const InteractionSpec& spec) {
  double e = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    e += spec.A(x[s]) + th[s][s] * spec.B0(x[s]);
    for (std::size_t l = s + 1; l < x.size(); ++l) e += th[s][l] * spec.B(x[s], x[l]);
  }
  return e;
}

// Joint pmf, indexed like all_states.
inline std::vector<double> joint_pmf(const SymmetricNetwork& t, const InteractionSpec& spec) {
  const auto th = dense(t);
  const auto states = all_states(t.p(), spec.alphabet.size());
  std::vector<double> w;
  double top = -INFINITY;
  for (const auto& x : states) {
    w.push_back(energy(x, th, spec));
    top = std::max(top, w.back());
  }
  double z = 0.0;
  for (double& v : w) z += (v = std::exp(v - top));
  for (double& v : w) v /= z;
  return w;
}

inline std::size_t state_index(const std::vector<Code>& x, std::size_t m) {
  std::size_t k = 0;
  for (std::size_t s = x.size(); s-- > 0;) k = k * m + x[s];
  return k;
}

// Conditional pmf of node s given the rest, from the joint energy directly.
inline std::vector<double> conditional(std::size_t s, std::vector<Code> x,
                                       const SymmetricNetwork& t, const InteractionSpec& spec) {
  const auto th = dense(t);
  const std::size_t m = spec.alphabet.size();
  std::vector<double> e(m);
  for (std::size_t u = 0; u < m; ++u) {
    x[s] = static_cast<Code>(u);
    e[u] = energy(x, th, spec);
  }
  const double top = *std::max_element(e.begin(), e.end());
  double z = 0.0;
  for (double& v : e) z += (v = std::exp(v - top));
  for (double& v : e) v /= z;
  return e;
}

inline double pseudo_loglik(const SymmetricNetwork& t, const Dataset& d,
                            const InteractionSpec& spec) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    std::vector<Code> x(d.row(i).begin(), d.row(i).end());
    for (std::size_t s = 0; s < d.p(); ++s) total += std::log(conditional(s, x, t, spec)[x[s]]);
  }
  return total;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) tv += std::abs(a[k] - b[k]);
  return 0.5 * tv;
}

inline double bernoulli_kl(double p, double q) {
  return p * std::log(p / q) + (1 - p) * std::log((1 - p) / (1 - q));
}

// b_n from a dense full matrix: for each observed node, the total absolute
// weight to hidden nodes, then the Euclidean norm of those totals.
inline double b_n(const std::vector<std::vector<double>>& full,
                  const std::vector<std::size_t>& observed,
                  const std::vector<std::size_t>& hidden) {
  double sq = 0.0;
  for (std::size_t s : observed) {
    double row = 0.0;
    for (std::size_t h : hidden) row += std::abs(full[s][h]);
    sq += row * row;
  }
  return std::sqrt(sq);
}

// Norm over pairs l >= s.
inline double upper_norm(const std::vector<std::vector<double>>& m) {
  double sq = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s)
    for (std::size_t l = s; l < m.size(); ++l) sq += m[s][l] * m[s][l];
  return std::sqrt(sq);
}

}  // namespace oracle
