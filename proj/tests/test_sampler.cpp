#include <cmath>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "mrfnet/errors.hpp"
#include "mrfnet/model.hpp"
#include "mrfnet/sampler.hpp"

using namespace mrfnet;
using doctest::Approx;

namespace {

SymmetricNetwork cycle4(double w) {
  SymmetricNetwork t(4);
  for (std::size_t s = 0; s < 4; ++s) t.set(s, (s + 1) % 4, w);
  return t;
}

std::vector<double> empirical(const Dataset& d, std::size_t m) {
  std::vector<double> f(state_count(d.p(), m), 0.0);
  for (std::size_t i = 0; i < d.n(); ++i)
    f[oracle::state_index({d.row(i).begin(), d.row(i).end()}, m)] += 1.0 / d.n();
  return f;
}

}  // namespace

TEST_CASE("sampler config validation") {
  SamplerConfig c;
  c.thinning = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.thinning = 1;
  c.max_cftp_epochs = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  CHECK(sampler_method_from_string("GIBBS") == SamplerMethod::GIBBS);
  CHECK_THROWS_AS(sampler_method_from_string("METROPOLIS"), ArgumentError);
}

TEST_CASE("gibbs sweep at theta = 0 ignores the input") {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork zero(5);
  SplitMix64 a(9), b(9);
  const auto xa = gibbs_sweep({0, 0, 0, 0, 0}, zero, spec, a);
  const auto xb = gibbs_sweep({1, 1, 1, 1, 1}, zero, spec, b);
  CHECK(xa == xb);

  SplitMix64 c(9);
  CHECK(gibbs_sweep({0, 0, 0, 0, 0}, zero, spec, c) == xa);
}

TEST_CASE("gibbs chain approaches the enumerated joint") {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork t(3);
  t.set(0, 1, 0.8);
  t.set(1, 2, -0.5);
  t.set(0, 0, -0.3);
  t.set(2, 2, 0.4);
  SamplerConfig cfg;
  cfg.method = SamplerMethod::GIBBS;
  cfg.burn_in = 100;
  cfg.thinning = 5;
  cfg.seed = 77;
  const auto chain = gibbs_chain(t, spec, 100000, cfg);
  CHECK(oracle::total_variation(empirical(chain, 2), oracle::joint_pmf(t, spec)) <= 0.01);
  CHECK(gibbs_chain(t, spec, 100, cfg) == gibbs_chain(t, spec, 100, cfg));
}

TEST_CASE("single-site kernels leave the joint invariant") {
  SplitMix64 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const auto spec = rep % 2 ? auto_logistic_spec() : fixtures::random_spec3(rng);
    const std::size_t m = spec.m();
    const auto theta = fixtures::random_network(3, 0.8, -1.0, 1.0, rng);
    const auto pmf = oracle::joint_pmf(theta, spec);
    const auto states = oracle::all_states(3, m);
    for (std::size_t s = 0; s < 3; ++s) {
      std::vector<double> moved(pmf.size(), 0.0);
      for (std::size_t k = 0; k < states.size(); ++k) {
        const auto cond = conditional_distribution(s, states[k], theta, spec);
        auto y = states[k];
        for (std::size_t u = 0; u < m; ++u) {
          y[s] = static_cast<Code>(u);
          moved[oracle::state_index(y, m)] += pmf[k] * cond[u];
        }
      }
      for (std::size_t k = 0; k < pmf.size(); ++k) CHECK(moved[k] == Approx(pmf[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("cftp at theta = 0 coalesces immediately and is uniform") {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork zero(3);
  std::vector<double> f(8, 0.0);
  for (std::uint64_t i = 0; i < 40000; ++i) {
    const auto d = sample_cftp(zero, spec, i);
    CHECK(d.start_time == -1);
    f[oracle::state_index(d.state, 2)] += 1.0 / 40000;
  }
  CHECK(oracle::total_variation(f, std::vector<double>(8, 0.125)) <= 0.01);
}

TEST_CASE("cftp on the four-cycle matches enumeration") {
  const auto spec = auto_logistic_spec();
  const auto t = cycle4(0.3);
  SamplerConfig cfg;
  cfg.seed = 2024;
  const auto data = sample_dataset(t, spec, 30000, cfg);
  CHECK(oracle::total_variation(empirical(data, 2), oracle::joint_pmf(t, spec)) <= 0.015);
}

TEST_CASE("cftp on the auto-binomial alphabet matches enumeration") {
  const auto spec = auto_binomial_spec(2);
  SymmetricNetwork t(3);
  t.set(0, 1, 0.4);
  t.set(1, 2, 0.2);
  t.set(0, 0, -0.5);
  SamplerConfig cfg;
  cfg.seed = 99;
  const auto data = sample_dataset(t, spec, 30000, cfg);
  CHECK(oracle::total_variation(empirical(data, 3), oracle::joint_pmf(t, spec)) <= 0.02);
}

TEST_CASE("cftp refuses non-attractive networks") {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork t(2);
  t.set(0, 1, -0.1);
  try {
    sample_cftp(t, spec, 1);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("non-attractive") != std::string::npos);
  }
  SamplerConfig cfg;
  cfg.method = SamplerMethod::GIBBS;
  cfg.burn_in = 10;
  CHECK(sample_dataset(t, spec, 5, cfg).n() == 5);
}

TEST_CASE("cftp reports a timeout when the epoch budget is too small") {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork t(8);
  for (std::size_t s = 0; s < 8; ++s) {
    t.set(s, s, -3.5);
    t.set(s, (s + 1) % 8, 3.5);
  }
  int timeouts = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    try {
      sample_cftp(t, spec, seed, 1);
    } catch (const SamplerTimeout& e) {
      ++timeouts;
      CHECK(e.deepest_start() == -1);
    }
  }
  CHECK(timeouts > 0);
}

TEST_CASE("coupled update is monotone for attractive networks") {
  SplitMix64 rng(41);
  for (int rep = 0; rep < 10000; ++rep) {
    const bool binomial = rep % 2;
    const auto spec = binomial ? auto_binomial_spec(3) : auto_logistic_spec();
    const std::size_t p = 2 + rng.below(5);
    const auto theta = fixtures::random_network(p, 0.6, 0.0, 2.0, rng);
    std::vector<Code> lo(p), hi(p);
    for (std::size_t s = 0; s < p; ++s) {
      lo[s] = static_cast<Code>(rng.below(spec.m()));
      hi[s] = static_cast<Code>(lo[s] + rng.below(spec.m() - lo[s]));
    }
    const std::size_t s = rng.below(p);
    const double u = rng.uniform();
    inverse_cdf_update(s, lo, theta, spec, u);
    inverse_cdf_update(s, hi, theta, spec, u);
    REQUIRE(lo[s] <= hi[s]);
  }
}

TEST_CASE("enumeration sampler shapes and determinism") {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork t(3);
  t.set(0, 2, 0.5);
  SamplerConfig cfg;
  cfg.method = SamplerMethod::ENUM;
  cfg.seed = 5;
  const auto d = sample_dataset(t, spec, 100, cfg);
  CHECK(d.n() == 100);
  CHECK(d.p() == 3);
  CHECK(sample_dataset(t, spec, 100, cfg) == d);

  const auto big = sample_dataset(t, spec, 50000, cfg);
  CHECK(oracle::total_variation(empirical(big, 2), oracle::joint_pmf(t, spec)) <= 0.015);
}

TEST_CASE("column means at theta = 0") {
  const auto spec = auto_logistic_spec();
  SymmetricNetwork zero(4);
  for (auto method : {SamplerMethod::CFTP, SamplerMethod::ENUM}) {
    SamplerConfig cfg;
    cfg.method = method;
    cfg.seed = 8;
    const auto d = sample_dataset(zero, spec, 100000, cfg);
    for (std::size_t s = 0; s < 4; ++s) {
      double mean = 0.0;
      for (std::size_t i = 0; i < d.n(); ++i) mean += d.at(i, s);
      CHECK(mean / d.n() == Approx(0.5).epsilon(0.01));
      CHECK(std::abs(mean / d.n() - 0.5) <= 0.005);
    }
  }
}

TEST_CASE("rows depend only on their own index") {
  const auto spec = auto_logistic_spec();
  const auto t = cycle4(0.6);
  for (auto method : {SamplerMethod::CFTP, SamplerMethod::GIBBS, SamplerMethod::ENUM}) {
    SamplerConfig cfg;
    cfg.method = method;
    cfg.burn_in = 20;
    cfg.seed = 1234;
    const auto small = sample_dataset(t, spec, 10, cfg);
    const auto large = sample_dataset(t, spec, 40, cfg);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(std::equal(small.row(i).begin(), small.row(i).end(), large.row(i).begin()));
      const auto alone = sample_row(t, spec, i, cfg);
      CHECK(std::equal(alone.begin(), alone.end(), small.row(i).begin()));
    }
  }
}

TEST_CASE("drop_nodes projections") {
  const auto d = Dataset::from_rows({{0, 1, 1, 0, 1}, {1, 0, 1, 1, 0}});
  CHECK(drop_nodes(d, std::vector<std::size_t>{}).data == d);
  const auto pr = drop_nodes(d, std::vector<std::size_t>{3, 4});
  CHECK(pr.data == Dataset::from_rows({{0, 1, 1}, {1, 0, 1}}));
  CHECK(pr.kept == std::vector<std::size_t>{0, 1, 2});
  const auto mid = drop_nodes(d, std::vector<std::size_t>{1});
  CHECK(mid.kept == std::vector<std::size_t>{0, 2, 3, 4});
  CHECK(mid.data.at(1, 1) == 1);
  CHECK_THROWS_AS(drop_nodes(d, std::vector<std::size_t>{0, 1, 2, 3, 4}), ArgumentError);
  CHECK_THROWS_AS(drop_nodes(d, std::vector<std::size_t>{7}), ArgumentError);
}
