#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mrfnet/dataset.hpp"
#include "mrfnet/interaction.hpp"
#include "mrfnet/network.hpp"
#include "mrfnet/penalty.hpp"

namespace mrfnet {

// A network over p + r nodes of which only `observed` are seen.
struct PartitionedTruth {
  SymmetricNetwork theta_full;
  std::vector<std::size_t> observed;
  std::vector<std::size_t> hidden;

  // Throws ArgumentError unless observed and hidden partition 0..p+r-1.
  void validate() const;
  // theta restricted to the observed nodes, relabeled 0..p-1 in `observed` order.
  SymmetricNetwork observed_block() const;
};

struct StructureStats {
  std::size_t a_n = 0;                     // nonzero pairs l >= s inside the observed block
  std::vector<std::size_t> boundary;       // observed nodes with a hidden neighbor (original ids)
  std::vector<std::size_t> boundary_local; // the same nodes as positions in `observed`
  double b_n = 0.0;

  // tau_ratio of an observed-block matrix against this boundary.
  double tau_ratio(const SymmetricNetwork& theta_observed) const;
};

StructureStats structure_stats(const PartitionedTruth& truth);

// sqrt(sum_{s in boundary} (sum_l |theta(s,l)|)^2) / ||theta||_2, the norm
// over pairs l >= s. Throws ArgumentError for the zero matrix.
double tau_ratio(const SymmetricNetwork& theta, std::span<const std::size_t> boundary);

// alpha sqrt(n) / (sqrt(a log p) + sqrt(n) b tau).
double rate_r_n(double alpha_n, std::size_t n, double a_n, std::size_t p_n, double b_n,
                double tau_n);

struct A2Proxies {
  double alpha = 0.0;        // min over s of the smallest eigenvalue of rho^(s)
  double alpha_prime = 0.0;  // largest eigenvalue of the residual second-moment matrix
  std::vector<double> node_min_eigenvalues;  // per node s
  // Nonzero spectrum of the residual second-moment matrix, nonincreasing.
  std::vector<double> residual_eigenvalues;
  std::size_t reference_n = 0;
  bool ill_conditioned = false;  // n < p
};

// Plug-in Monte Carlo proxies for the A2 eigenvalue constants at theta,
// averaging conditional moments over the rows of `data`.
A2Proxies a2_eigen_proxies(const Dataset& data, const SymmetricNetwork& theta,
                           const InteractionSpec& spec);

// sum_s mean_i KL(f^(s)_{theta*}(.|x_i) || f^(s)_{theta*+delta}(.|x_i)).
double conditional_kl(const SymmetricNetwork& theta_star, const SymmetricNetwork& delta,
                      const Dataset& reference_data, const InteractionSpec& spec);

// U_n(delta) computed term by term from node conditionals:
// n^-1 sum_i sum_s [log f_{theta*} - log f_{theta*+delta}] + n^-1 sum [q(|theta*+delta|) - q(|theta*|)].
double shifted_objective(const SymmetricNetwork& theta_star, const SymmetricNetwork& delta,
                         const Dataset& data, const InteractionSpec& spec,
                         const PenaltyConfig& pen, bool penalize_diagonal = true);

// ||estimate - truth||_2 / ||truth||_2.
double relative_error(const SymmetricNetwork& estimate, const SymmetricNetwork& truth);
// Mean of relative_error over replications.
double relative_mse(std::span<const SymmetricNetwork> estimates, const SymmetricNetwork& truth);

struct SupportMetrics {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

// Off-diagonal edge recovery with |w| > zero_tol counting as an edge.
// precision = 1 when nothing is estimated, recall = 1 when the truth is empty.
SupportMetrics support_metrics(const SymmetricNetwork& theta_hat,
                               const SymmetricNetwork& theta_star, double zero_tol = 1e-8);

}  // namespace mrfnet
