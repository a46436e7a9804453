#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrfnet/dataset.hpp"
#include "mrfnet/interaction.hpp"
#include "mrfnet/network.hpp"
#include "mrfnet/penalty.hpp"

namespace mrfnet {

// Sum over rows i and nodes s of log f^(s)(x_is | x_i,-s), every other node
// treated as a potential neighbor.
double pseudo_loglik(const SymmetricNetwork& theta, const Dataset& data,
                     const InteractionSpec& spec);

// Gradient of pseudo_loglik with respect to the upper-triangle coordinates.
// Off-diagonal entry (s,l) collects the score of both the node-s and the
// node-l conditional; the diagonal uses B0.
SymmetricNetwork pseudo_loglik_grad(const SymmetricNetwork& theta, const Dataset& data,
                                    const InteractionSpec& spec);

// Q_n = pseudo_loglik - sum over pairs l >= s of q_lambda(|theta(s,l)|).
double objective(const SymmetricNetwork& theta, const Dataset& data, const InteractionSpec& spec,
                 const PenaltyConfig& pen, bool penalize_diagonal = true);

// Sum of q_lambda(|theta(s,l)|) over the upper triangle.
double penalty_sum(const SymmetricNetwork& theta, const PenaltyConfig& pen,
                   bool penalize_diagonal = true);

struct FitOptions {
  std::size_t max_iters = 5000;
  double tol_rel_obj = 1e-8;
  double step_init = 1.0;  // on the per-observation scale (objective / n)
  double backtrack_factor = 0.5;
  std::optional<SymmetricNetwork> theta_init;  // zero when empty
  bool penalize_diagonal = true;
  // When > 0, stop only once the prox-gradient mapping (unscaled, inf-norm)
  // falls below this; the relative objective test is then ignored.
  double tol_grad = 0.0;

  void validate() const;
};

struct FitResult {
  SymmetricNetwork theta_hat;
  std::vector<double> objective_trace;  // Q_n at the start and after every accepted step
  std::size_t iterations = 0;
  bool converged = false;
  double final_grad_inf_norm = 0.0;  // of the smooth part, unscaled
  std::vector<std::string> warnings;
};

// Proximal-gradient ascent on Q_n with backtracking. Global maximizer (to
// tolerance) for L1; a stationary point for SCAD. Throws NumericalError on a
// non-finite objective.
FitResult fit(const Dataset& data, const InteractionSpec& spec, const PenaltyConfig& pen,
              const FitOptions& opts = {});

// c * sqrt(n log p), natural log. c must be > 0.
double lambda_default(std::size_t n, std::size_t p, double c = 0.5);

}  // namespace mrfnet
