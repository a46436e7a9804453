#include "mrfnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "mrfnet/errors.hpp"
#include "mrfnet/model.hpp"

namespace mrfnet {

void PartitionedTruth::validate() const {
  const std::size_t total = theta_full.p();
  if (observed.size() + hidden.size() != total)
    throw ArgumentError("observed + hidden sizes do not cover the network");
  std::vector<int> seen(total, 0);
  for (std::size_t s : observed) {
    if (s >= total || seen[s]++) throw ArgumentError("invalid or repeated observed node");
  }
  for (std::size_t s : hidden) {
    if (s >= total || seen[s]++) throw ArgumentError("invalid or repeated hidden node");
  }
  if (observed.empty()) throw ArgumentError("at least one node must be observed");
}

SymmetricNetwork PartitionedTruth::observed_block() const {
  return theta_full.restricted(observed);
}

StructureStats structure_stats(const PartitionedTruth& truth) {
  truth.validate();
  const std::size_t total = truth.theta_full.p();
  std::vector<bool> is_hidden(total, false);
  for (std::size_t h : truth.hidden) is_hidden[h] = true;

  StructureStats st;
  st.a_n = truth.observed_block().nonzeros();
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < truth.observed.size(); ++i) {
    const std::size_t s = truth.observed[i];
    double hidden_mass = 0.0;
    bool touches = false;
    for (const auto& nb : truth.theta_full.neighbors(s)) {
      if (is_hidden[nb.node]) {
        hidden_mass += std::abs(nb.weight);
        touches = true;
      }
    }
    if (touches) {
      st.boundary.push_back(s);
      st.boundary_local.push_back(i);
    }
    sum_sq += hidden_mass * hidden_mass;
  }
  std::sort(st.boundary.begin(), st.boundary.end());
  std::sort(st.boundary_local.begin(), st.boundary_local.end());
  st.b_n = std::sqrt(sum_sq);
  return st;
}

double StructureStats::tau_ratio(const SymmetricNetwork& theta_observed) const {
  return mrfnet::tau_ratio(theta_observed, boundary_local);
}

double tau_ratio(const SymmetricNetwork& theta, std::span<const std::size_t> boundary) {
  const double denom = theta.norm2();
  if (!(denom > 0.0)) throw ArgumentError("tau ratio undefined for the zero matrix");
  double num = 0.0;
  for (std::size_t s : boundary) {
    if (s >= theta.p()) throw ArgumentError("boundary node out of range");
    double row = std::abs(theta.diagonal(s));
    for (const auto& nb : theta.neighbors(s)) row += std::abs(nb.weight);
    num += row * row;
  }
  return std::sqrt(num) / denom;
}

double rate_r_n(double alpha_n, std::size_t n, double a_n, std::size_t p_n, double b_n,
                double tau_n) {
  if (!(alpha_n > 0.0) || n < 1 || !(a_n >= 0.0) || p_n < 1)
    throw ArgumentError("rate_r_n needs alpha_n > 0, n >= 1, a_n >= 0, p_n >= 1");
  if (!(b_n >= 0.0) || !(tau_n >= 0.0)) throw ArgumentError("rate_r_n needs b_n, tau_n >= 0");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double denom =
      std::sqrt(a_n * std::log(static_cast<double>(p_n))) + root_n * b_n * tau_n;
  if (!(denom > 0.0)) throw ArgumentError("rate_r_n denominator is zero");
  return alpha_n * root_n / denom;
}

A2Proxies a2_eigen_proxies(const Dataset& data, const SymmetricNetwork& theta,
                           const InteractionSpec& spec) {
  if (theta.p() != data.p()) throw ArgumentError("dimension mismatch");
  spec.check_shapes();
  data.check_alphabet(spec.alphabet);
  const std::size_t n = data.n(), p = data.p(), m = spec.m();

  // Interaction feature for node s against node l: B(u, x_l), or B0(u) when l == s.
  Eigen::MatrixXd feature(m, p);
  std::vector<Eigen::MatrixXd> rho(p, Eigen::MatrixXd::Zero(p, p));
  Eigen::MatrixXd residuals(n, p * p);
  Eigen::VectorXd prob(m);

  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.row(i);
    for (std::size_t s = 0; s < p; ++s) {
      const auto dist = conditional_distribution(s, x, theta, spec);
      for (std::size_t u = 0; u < m; ++u) prob(u) = dist[u];
      for (std::size_t l = 0; l < p; ++l)
        for (std::size_t u = 0; u < m; ++u)
          feature(u, l) = (l == s) ? spec.B0(u) : spec.B(u, x[l]);
      const Eigen::VectorXd mean = feature.transpose() * prob;
      const Eigen::MatrixXd weighted = prob.asDiagonal() * feature;
      rho[s] += feature.transpose() * weighted - mean * mean.transpose();
      for (std::size_t l = 0; l < p; ++l)
        residuals(i, s * p + l) = feature(x[s], l) - mean(l);
    }
  }

  A2Proxies out;
  out.reference_n = n;
  out.ill_conditioned = n < p;
  out.alpha = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < p; ++s) {
    rho[s] /= static_cast<double>(n);
    if (!rho[s].allFinite()) throw NumericalError("non-finite conditional covariance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho[s], Eigen::EigenvaluesOnly);
    const double smallest = es.eigenvalues()(0);
    out.node_min_eigenvalues.push_back(smallest);
    out.alpha = std::min(out.alpha, smallest);
  }

  // The nonzero spectra of R'R/n and RR'/n coincide; decompose the smaller.
  if (!residuals.allFinite()) throw NumericalError("non-finite conditional residuals");
  const Eigen::MatrixXd gram = (n <= p * p)
                                   ? Eigen::MatrixXd(residuals * residuals.transpose())
                                   : Eigen::MatrixXd(residuals.transpose() * residuals);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram / static_cast<double>(n),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  for (Eigen::Index k = ev.size(); k-- > 0;) out.residual_eigenvalues.push_back(ev(k));
  out.alpha_prime = out.residual_eigenvalues.empty() ? 0.0 : out.residual_eigenvalues.front();
  return out;
}

namespace {
void check_same_p(const SymmetricNetwork& a, const SymmetricNetwork& b, const Dataset& data) {
  if (a.p() != b.p() || a.p() != data.p()) throw ArgumentError("dimension mismatch");
}
}  // namespace

double conditional_kl(const SymmetricNetwork& theta_star, const SymmetricNetwork& delta,
                      const Dataset& reference_data, const InteractionSpec& spec) {
  check_same_p(theta_star, delta, reference_data);
  const SymmetricNetwork shifted = theta_star + delta;
  const std::size_t m = spec.m();
  std::vector<double> h_star(m), h_shift(m);
  double total = 0.0;
  for (std::size_t i = 0; i < reference_data.n(); ++i) {
    const auto x = reference_data.row(i);
    for (std::size_t s = 0; s < reference_data.p(); ++s) {
      conditional_logits(s, x, theta_star, spec, h_star);
      conditional_logits(s, x, shifted, spec, h_shift);
      const double lz_star = log_sum_exp(h_star);
      const double lz_shift = log_sum_exp(h_shift);
      double kl = 0.0;
      for (std::size_t u = 0; u < m; ++u) {
        const double log_p = h_star[u] - lz_star;
        const double log_q = h_shift[u] - lz_shift;
        kl += std::exp(log_p) * (log_p - log_q);
      }
      // KL is nonnegative; clip rounding noise around zero.
      total += std::max(kl, 0.0);
    }
  }
  return total / static_cast<double>(reference_data.n());
}

double shifted_objective(const SymmetricNetwork& theta_star, const SymmetricNetwork& delta,
                         const Dataset& data, const InteractionSpec& spec,
                         const PenaltyConfig& pen, bool penalize_diagonal) {
  check_same_p(theta_star, delta, data);
  pen.validate();
  const SymmetricNetwork shifted = theta_star + delta;
  double loss = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto x = data.row(i);
    for (std::size_t s = 0; s < data.p(); ++s)
      loss += log_conditional(s, x, theta_star, spec) - log_conditional(s, x, shifted, spec);
  }
  double pen_change = 0.0;
  const std::size_t p = data.p();
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t l = s; l < p; ++l) {
      if (l == s && !penalize_diagonal) continue;
      pen_change += penalty(pen, std::abs(shifted.get(s, l))).value -
                    penalty(pen, std::abs(theta_star.get(s, l))).value;
    }
  return (loss + pen_change) / static_cast<double>(data.n());
}

double relative_error(const SymmetricNetwork& estimate, const SymmetricNetwork& truth) {
  const double denom = truth.norm2();
  if (!(denom > 0.0)) throw ArgumentError("relative error undefined: truth has zero norm");
  return (estimate - truth).norm2() / denom;
}

double relative_mse(std::span<const SymmetricNetwork> estimates, const SymmetricNetwork& truth) {
  if (estimates.empty()) throw ArgumentError("relative_mse needs at least one estimate");
  double sum = 0.0;
  for (const auto& e : estimates) sum += relative_error(e, truth);
  return sum / static_cast<double>(estimates.size());
}

SupportMetrics support_metrics(const SymmetricNetwork& theta_hat,
                               const SymmetricNetwork& theta_star, double zero_tol) {
  if (theta_hat.p() != theta_star.p()) throw ArgumentError("dimension mismatch");
  if (!(zero_tol >= 0.0)) throw ArgumentError("zero_tol must be >= 0");
  SupportMetrics out;
  const std::size_t p = theta_hat.p();
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t l = s + 1; l < p; ++l) {
      const bool est = std::abs(theta_hat.get(s, l)) > zero_tol;
      const bool tru = std::abs(theta_star.get(s, l)) > zero_tol;
      if (est && tru) ++out.true_positives;
      else if (est) ++out.false_positives;
      else if (tru) ++out.false_negatives;
    }
  const double tp = static_cast<double>(out.true_positives);
  const std::size_t n_est = out.true_positives + out.false_positives;
  const std::size_t n_true = out.true_positives + out.false_negatives;
  out.precision = n_est == 0 ? 1.0 : tp / static_cast<double>(n_est);
  out.recall = n_true == 0 ? 1.0 : tp / static_cast<double>(n_true);
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

}  // namespace mrfnet
