#include "mrfnet/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "mrfnet/errors.hpp"

namespace mrfnet {

namespace {

// Pseudo-log-likelihood over the distinct rows of a dataset, each weighted
// by its multiplicity. Evaluation is O(distinct rows * p^2 * m).
class PseudoLikelihood {
 public:
  PseudoLikelihood(const Dataset& data, const InteractionSpec& spec)
      : p_(data.p()), m_(spec.m()), n_(data.n()), spec_(spec) {
    spec.check_shapes();
    data.check_alphabet(spec.alphabet);
    std::map<std::vector<Code>, std::size_t> counts;
    for (std::size_t i = 0; i < data.n(); ++i) {
      auto r = data.row(i);
      ++counts[std::vector<Code>(r.begin(), r.end())];
    }
    rows_.reserve(counts.size() * p_);
    weights_.reserve(counts.size());
    for (const auto& [row, c] : counts) {
      rows_.insert(rows_.end(), row.begin(), row.end());
      weights_.push_back(static_cast<double>(c));
    }
  }

  std::size_t p() const { return p_; }
  std::size_t n() const { return n_; }

  // Returns the pseudo-log-likelihood; fills `grad` (packed) when non-empty.
  double evaluate(std::span<const double> packed, std::span<double> grad) const {
    std::vector<double> dense(p_ * p_);
    for (std::size_t s = 0; s < p_; ++s)
      for (std::size_t l = s; l < p_; ++l)
        dense[s * p_ + l] = dense[l * p_ + s] = packed[packed_index(p_, s, l)];
    const bool want_grad = !grad.empty();
    if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);

    std::vector<double> h(m_), prob(m_);
    double total = 0.0;
    for (std::size_t r = 0; r < weights_.size(); ++r) {
      const Code* x = rows_.data() + r * p_;
      const double w = weights_[r];
      for (std::size_t s = 0; s < p_; ++s) {
        const double* th = dense.data() + s * p_;
        for (std::size_t u = 0; u < m_; ++u) h[u] = spec_.A(u) + th[s] * spec_.B0(u);
        for (std::size_t l = 0; l < p_; ++l) {
          if (l == s || th[l] == 0.0) continue;
          const std::size_t xl = x[l];
          for (std::size_t u = 0; u < m_; ++u) h[u] += th[l] * spec_.B(u, xl);
        }
        const double mx = *std::max_element(h.begin(), h.end());
        double z = 0.0;
        for (std::size_t u = 0; u < m_; ++u) {
          prob[u] = std::exp(h[u] - mx);
          z += prob[u];
        }
        const double log_z = mx + std::log(z);
        total += w * (h[x[s]] - log_z);
        if (!want_grad) continue;

        for (std::size_t u = 0; u < m_; ++u) prob[u] /= z;
        double mean_b0 = 0.0;
        for (std::size_t u = 0; u < m_; ++u) mean_b0 += prob[u] * spec_.B0(u);
        grad[packed_index(p_, s, s)] += w * (spec_.B0(x[s]) - mean_b0);
        for (std::size_t l = 0; l < p_; ++l) {
          if (l == s) continue;
          const std::size_t xl = x[l];
          double mean_b = 0.0;
          for (std::size_t u = 0; u < m_; ++u) mean_b += prob[u] * spec_.B(u, xl);
          grad[packed_index(p_, s, l)] += w * (spec_.B(x[s], xl) - mean_b);
        }
      }
    }
    return total;
  }

 private:
  std::size_t p_, m_, n_;
  const InteractionSpec& spec_;
  std::vector<Code> rows_;
  std::vector<double> weights_;
};

void check_dims(const SymmetricNetwork& theta, const Dataset& data) {
  if (theta.p() != data.p())
    throw ArgumentError("dimension mismatch: network has p=" + std::to_string(theta.p()) +
                        ", dataset has p=" + std::to_string(data.p()));
}

double packed_penalty(std::size_t p, std::span<const double> packed, const PenaltyConfig& pen,
                      bool penalize_diagonal) {
  double sum = 0.0;
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t l = s; l < p; ++l) {
      if (l == s && !penalize_diagonal) continue;
      const double w = packed[packed_index(p, s, l)];
      if (w != 0.0) sum += penalty(pen, std::abs(w)).value;
    }
  return sum;
}

}  // namespace

double pseudo_loglik(const SymmetricNetwork& theta, const Dataset& data,
                     const InteractionSpec& spec) {
  check_dims(theta, data);
  PseudoLikelihood pl(data, spec);
  return pl.evaluate(theta.to_packed(), {});
}

SymmetricNetwork pseudo_loglik_grad(const SymmetricNetwork& theta, const Dataset& data,
                                    const InteractionSpec& spec) {
  check_dims(theta, data);
  PseudoLikelihood pl(data, spec);
  std::vector<double> grad(packed_size(theta.p()));
  pl.evaluate(theta.to_packed(), grad);
  return SymmetricNetwork::from_packed(theta.p(), grad);
}

double penalty_sum(const SymmetricNetwork& theta, const PenaltyConfig& pen,
                   bool penalize_diagonal) {
  pen.validate();
  double sum = 0.0;
  for (const auto& t : theta.entries()) {
    if (t.s == t.l && !penalize_diagonal) continue;
    sum += penalty(pen, std::abs(t.weight)).value;
  }
  return sum;
}

double objective(const SymmetricNetwork& theta, const Dataset& data, const InteractionSpec& spec,
                 const PenaltyConfig& pen, bool penalize_diagonal) {
  return pseudo_loglik(theta, data, spec) - penalty_sum(theta, pen, penalize_diagonal);
}

void FitOptions::validate() const {
  if (max_iters < 1) throw ArgumentError("max_iters must be >= 1");
  if (!(tol_rel_obj > 0.0)) throw ArgumentError("tol_rel_obj must be > 0");
  if (!(tol_grad >= 0.0)) throw ArgumentError("tol_grad must be >= 0");
  if (!(step_init > 0.0)) throw ArgumentError("step_init must be > 0");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw ArgumentError("backtrack_factor must be in (0, 1)");
}

double lambda_default(std::size_t n, std::size_t p, double c) {
  if (!(c > 0.0)) throw ArgumentError("lambda constant c must be > 0");
  if (n < 1 || p < 1) throw ArgumentError("lambda_default needs n, p >= 1");
  return c * std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(p)));
}

FitResult fit(const Dataset& data, const InteractionSpec& spec, const PenaltyConfig& pen,
              const FitOptions& opts) {
  opts.validate();
  pen.validate();
  const std::size_t p = data.p();
  if (opts.theta_init && opts.theta_init->p() != p)
    throw ArgumentError("theta_init dimension mismatch");

  FitResult result;
  if (pen.lambda == 0.0) {
    for (std::size_t s : data.constant_columns())
      result.warnings.push_back("column " + std::to_string(s) +
                                " is constant; with lambda=0 its diagonal weight may diverge");
  }

  PseudoLikelihood pl(data, spec);
  // Work on the per-observation scale so step sizes are independent of n.
  const double inv_n = 1.0 / static_cast<double>(data.n());
  // The per-observation penalty is q_lambda / n. SCAD is not homogeneous in
  // lambda, so the 1/n goes on the penalty value and the prox step.
  auto scaled_penalty = [&](const std::vector<double>& x) {
    return packed_penalty(p, x, pen, opts.penalize_diagonal) * inv_n;
  };
  const std::size_t d = packed_size(p);

  std::vector<double> theta = opts.theta_init ? opts.theta_init->to_packed()
                                              : std::vector<double>(d, 0.0);
  std::vector<double> grad(d), trial(d), trial_grad(d), step(d);

  auto fail = [&](const char* where, std::size_t iter, double value) {
    double mx = 0.0;
    for (double v : theta) mx = std::max(mx, std::abs(v));
    std::ostringstream os;
    os << "non-finite objective " << where << " at iteration " << iter << " (objective " << value
       << ", max |theta| " << mx << ")";
    throw NumericalError(os.str());
  };

  double smooth = pl.evaluate(theta, grad) * inv_n;
  for (double& g : grad) g *= inv_n;
  double composite = smooth - scaled_penalty(theta);
  if (!std::isfinite(composite)) fail("at the initial point", 0, composite);
  result.objective_trace.push_back(composite * static_cast<double>(data.n()));

  // out = prox(x + t g) - x
  auto prox_step = [&](const std::vector<double>& x, const std::vector<double>& g, double t,
                       std::vector<double>& out) {
    for (std::size_t s = 0; s < p; ++s)
      for (std::size_t l = s; l < p; ++l) {
        const std::size_t k = packed_index(p, s, l);
        const double v = x[k] + t * g[k];
        out[k] = (l == s && !opts.penalize_diagonal ? v : penalty_prox(pen, v, t * inv_n)) - x[k];
      }
  };
  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  const double n_d = static_cast<double>(data.n());
  std::vector<double> probe(d);

  double t = opts.step_init;
  std::size_t iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    bool accepted = false;
    double trial_smooth = 0.0, trial_composite = 0.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      prox_step(theta, grad, t, step);
      double sq = 0.0, lin = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        trial[k] = theta[k] + step[k];
        sq += step[k] * step[k];
        lin += grad[k] * step[k];
      }
      if (sq == 0.0) break;  // fixed point of the prox-gradient map
      const double mapping = inf_norm(step) / t;
      if (opts.tol_grad > 0.0 && mapping * n_d <= opts.tol_grad) break;
      trial_smooth = pl.evaluate(trial, trial_grad) * inv_n;
      for (double& g : trial_grad) g *= inv_n;
      if (!std::isfinite(trial_smooth)) {
        t *= opts.backtrack_factor;
        continue;
      }
      trial_composite =
          trial_smooth - scaled_penalty(trial);
      const bool majorized = trial_smooth >= smooth + lin - sq / (2.0 * t);
      if (majorized && trial_composite >= composite) {
        accepted = true;
        break;
      }
      // Near the optimum objective differences drown in rounding; fall back on
      // the size of the prox-gradient mapping as the merit function.
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(composite), 1.0);
      if (std::abs(trial_composite - composite) <= noise) {
        prox_step(trial, trial_grad, t, probe);
        if (inf_norm(probe) / t < mapping) {
          accepted = true;
          break;
        }
      }
      t *= opts.backtrack_factor;
    }
    if (!accepted) {
      result.converged = true;
      break;
    }
    if (!std::isfinite(trial_composite)) fail("after a step", iter + 1, trial_composite);

    // Barzilai-Borwein guess for the next step; the smooth part is concave so
    // s'y <= 0 along the path.
    double ss = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      ss += step[k] * step[k];
      sy += step[k] * (trial_grad[k] - grad[k]);
    }
    const double prev_composite = composite;
    theta.swap(trial);
    grad.swap(trial_grad);
    smooth = trial_smooth;
    composite = trial_composite;
    result.objective_trace.push_back(composite * n_d);
    t = (sy < 0.0) ? std::clamp(ss / -sy, 1e-8, 1e8) : t / opts.backtrack_factor;

    const double change = std::abs(composite - prev_composite);
    if (opts.tol_grad == 0.0 &&
        change <= opts.tol_rel_obj * std::max(std::abs(composite), 1e-300)) {
      ++iter;
      result.converged = true;
      break;
    }
  }

  result.iterations = iter;
  result.theta_hat = SymmetricNetwork::from_packed(p, theta);
  double gmax = 0.0;
  for (double g : grad) gmax = std::max(gmax, std::abs(g));
  result.final_grad_inf_norm = gmax * static_cast<double>(data.n());
  return result;
}

}  // namespace mrfnet
