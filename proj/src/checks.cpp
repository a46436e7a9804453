#include "mrfnet/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mrfnet/estimator.hpp"
#include "mrfnet/experiment.hpp"
#include "mrfnet/metrics.hpp"
#include "mrfnet/model.hpp"
#include "mrfnet/random.hpp"
#include "mrfnet/sampler.hpp"

namespace mrfnet {

namespace {

SymmetricNetwork random_attractive(std::size_t p, double density, double hi, SplitMix64& rng) {
  SymmetricNetwork t(p);
  for (std::size_t s = 0; s < p; ++s) {
    t.set(s, s, 2.0 * rng.uniform() - 1.0);
    for (std::size_t l = s + 1; l < p; ++l)
      if (rng.uniform() < density) t.set(s, l, hi * rng.uniform() + 1e-3);
  }
  return t;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

CheckResult check_kernel_invariance(std::uint64_t seed) {
  const auto spec = auto_logistic_spec();
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto theta = random_attractive(3, 0.8, 1.0, rng);
    const auto pmf = enumerate_joint(theta, spec);
    for (std::size_t s = 0; s < 3; ++s) {
      std::vector<double> moved(pmf.size(), 0.0);
      for (std::size_t k = 0; k < pmf.size(); ++k) {
        auto x = decode_state(k, 3, 2);
        const auto cond = conditional_distribution(s, x, theta, spec);
        for (Code u = 0; u < 2; ++u) {
          x[s] = u;
          moved[encode_state(x, 2)] += pmf[k] * cond[u];
        }
      }
      for (std::size_t k = 0; k < pmf.size(); ++k)
        worst = std::max(worst, std::abs(moved[k] - pmf[k]));
    }
  }
  return {"gibbs kernel leaves the joint invariant", worst <= 1e-10, "max deviation " + num(worst)};
}

CheckResult check_cftp_tv(std::uint64_t seed) {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork theta(3);
  theta.set(0, 1, 0.6);
  theta.set(1, 2, 0.4);
  theta.set(0, 0, -0.2);
  const auto pmf = enumerate_joint(theta, spec);
  constexpr std::size_t draws = 20000;
  std::vector<double> freq(pmf.size(), 0.0);
  for (std::size_t i = 0; i < draws; ++i)
    freq[encode_state(sample_cftp(theta, spec, derive_seed(seed, {i})).state, 2)] += 1.0 / draws;
  double tv = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) tv += 0.5 * std::abs(freq[k] - pmf[k]);
  return {"cftp draws match the enumerated joint", tv <= 0.02, "TV " + num(tv)};
}

CheckResult check_gradient(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const auto spec = auto_binomial_spec(2);
  double worst = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t p = 4;
    SymmetricNetwork theta(p);
    for (std::size_t s = 0; s < p; ++s)
      for (std::size_t l = s; l < p; ++l) theta.set(s, l, rng.uniform() - 0.5);
    std::vector<Code> cells(30 * p);
    for (auto& c : cells) c = static_cast<Code>(rng.below(3));
    const Dataset data(30, p, cells);
    const auto grad = pseudo_loglik_grad(theta, data, spec);
    for (std::size_t s = 0; s < p; ++s) {
      for (std::size_t l = s; l < p; ++l) {
        const double h = 1e-5;
        auto up = theta, down = theta;
        up.set(s, l, theta.get(s, l) + h);
        down.set(s, l, theta.get(s, l) - h);
        const double fd =
            (pseudo_loglik(up, data, spec) - pseudo_loglik(down, data, spec)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - grad.get(s, l)) / std::max(1.0, std::abs(fd)));
      }
    }
  }
  return {"gradient agrees with finite differences", worst <= 1e-6, "max rel error " + num(worst)};
}

CheckResult check_comparison_bound(std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::size_t violations = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = 2 + rng.below(5);
    std::vector<double> h1(m), h2(m);
    double sup = 0.0;
    for (std::size_t u = 0; u < m; ++u) {
      h1[u] = 6.0 * rng.uniform() - 3.0;
      h2[u] = 6.0 * rng.uniform() - 3.0;
      sup = std::max(sup, std::abs(h2[u] - h1[u]));
    }
    if (std::abs(log_sum_exp(h2) - log_sum_exp(h1)) > sup + 1e-12) ++violations;
  }
  return {"log-normalizer is 1-Lipschitz in sup norm", violations == 0,
          std::to_string(violations) + " violations"};
}

CheckResult check_degeneracy(std::uint64_t seed) {
  const auto spec = auto_logistic_spec();
  SplitMix64 rng(seed);
  const auto theta = random_attractive(4, 0.6, 0.8, rng);
  SamplerConfig sc;
  sc.seed = seed;
  const auto data = sample_dataset(theta, spec, 200, sc);
  const auto big = fit(data, spec, {PenaltyFamily::L1, 1e6});
  const bool zero = big.theta_hat.nonzeros() == 0;
  FitOptions fo;
  fo.tol_grad = 1e-8;
  const auto free = fit(data, spec, {PenaltyFamily::L1, 0.0}, fo);
  const bool kkt = free.final_grad_inf_norm <= 1e-6;
  return {"huge lambda gives zero, lambda 0 reaches a stationary point", zero && kkt,
          "nonzeros " + std::to_string(big.theta_hat.nonzeros()) + ", grad " +
              num(free.final_grad_inf_norm)};
}

CheckResult check_kl(std::uint64_t seed) {
  const auto spec = auto_logistic_spec();
  SplitMix64 rng(seed);
  const auto theta = random_attractive(4, 0.6, 0.8, rng);
  SamplerConfig sc;
  sc.seed = seed;
  const auto ref = sample_dataset(theta, spec, 100, sc);
  bool ok = conditional_kl(theta, SymmetricNetwork(4), ref, spec) == 0.0;
  double lowest = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    SymmetricNetwork delta(4);
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t l = s; l < 4; ++l) delta.set(s, l, 2.0 * rng.uniform() - 1.0);
    lowest = std::min(lowest, conditional_kl(theta, delta, ref, spec));
  }
  ok = ok && lowest >= 0.0;
  return {"conditional KL is nonnegative and zero at delta = 0", ok, "min " + num(lowest)};
}

CheckResult check_boundary_additivity(std::uint64_t seed) {
  TruthConfig tc;
  tc.p = 10;
  tc.r = 2;
  tc.cross_degree = 2;
  const auto a = generate_truth(tc, seed);
  const auto b = generate_truth(tc, seed + 1);
  // Stack the two truths as disjoint components.
  const std::size_t pa = a.theta_full.p();
  PartitionedTruth both;
  both.theta_full = SymmetricNetwork(2 * pa);
  for (const auto& t : a.theta_full.entries()) both.theta_full.set(t.s, t.l, t.weight);
  for (const auto& t : b.theta_full.entries()) both.theta_full.set(t.s + pa, t.l + pa, t.weight);
  for (auto s : a.observed) both.observed.push_back(s);
  for (auto s : b.observed) both.observed.push_back(s + pa);
  for (auto h : a.hidden) both.hidden.push_back(h);
  for (auto h : b.hidden) both.hidden.push_back(h + pa);
  const double ba = structure_stats(a).b_n, bb = structure_stats(b).b_n;
  const double bs = structure_stats(both).b_n;
  const double gap = std::abs(bs * bs - (ba * ba + bb * bb));
  return {"b_n squares add over disjoint boundaries", gap <= 1e-12, "gap " + num(gap)};
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed) {
  const std::vector<std::function<CheckResult(std::uint64_t)>> checks{
      check_kernel_invariance, check_cftp_tv,   check_gradient,           check_comparison_bound,
      check_degeneracy,        check_kl,        check_boundary_additivity};
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      out.push_back(checks[i](derive_seed(seed, {i})));
    } catch (const std::exception& e) {
      out.push_back({"check " + std::to_string(i), false, e.what()});
    }
  }
  return out;
}

}  // namespace mrfnet
