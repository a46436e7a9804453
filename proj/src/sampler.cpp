#include "mrfnet/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrfnet/errors.hpp"
#include "mrfnet/model.hpp"

namespace mrfnet {

void SamplerConfig::validate() const {
  if (thinning < 1) throw ArgumentError("sampler thinning must be >= 1");
  if (max_cftp_epochs < 1) throw ArgumentError("max_cftp_epochs must be >= 1");
  if (max_cftp_epochs > 62) throw ArgumentError("max_cftp_epochs must be <= 62");
}

const char* to_string(SamplerMethod method) {
  switch (method) {
    case SamplerMethod::CFTP: return "cftp";
    case SamplerMethod::GIBBS: return "gibbs";
    case SamplerMethod::ENUM: return "enum";
  }
  return "?";
}

SamplerMethod sampler_method_from_string(const char* name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "cftp") return SamplerMethod::CFTP;
  if (s == "gibbs") return SamplerMethod::GIBBS;
  if (s == "enum") return SamplerMethod::ENUM;
  throw ArgumentError("unknown sampler method '" + std::string(name) + "'");
}

void inverse_cdf_update(std::size_t s, std::span<Code> x, const SymmetricNetwork& theta,
                        const InteractionSpec& spec, double uniform) {
  const std::vector<double> prob = conditional_distribution(s, x, theta, spec);
  double cdf = 0.0;
  const std::size_t m = prob.size();
  Code value = static_cast<Code>(m - 1);
  for (std::size_t u = 0; u + 1 < m; ++u) {
    cdf += prob[u];
    if (uniform < cdf) {
      value = static_cast<Code>(u);
      break;
    }
  }
  x[s] = value;
}

std::vector<Code> gibbs_sweep(std::vector<Code> state, const SymmetricNetwork& theta,
                              const InteractionSpec& spec, SplitMix64& rng) {
  for (std::size_t s = 0; s < state.size(); ++s)
    inverse_cdf_update(s, state, theta, spec, rng.uniform());
  return state;
}

namespace {

std::vector<Code> random_state(std::size_t p, std::size_t m, SplitMix64& rng) {
  std::vector<Code> x(p);
  for (auto& v : x) v = static_cast<Code>(rng.below(m));
  return x;
}

void check_attractive(const SymmetricNetwork& theta, const InteractionSpec& spec) {
  for (std::size_t s = 0; s < theta.p(); ++s)
    for (const auto& nb : theta.neighbors(s))
      if (nb.weight < 0.0)
        throw PreconditionError("non-attractive network: theta(" + std::to_string(s) + "," +
                                std::to_string(nb.node) +
                                ") < 0; monotone CFTP needs theta(s,l) >= 0, use GIBBS");
  if (!is_supermodular(spec))
    throw PreconditionError("interaction B is not supermodular; monotone CFTP is invalid, use GIBBS");
}

std::vector<Code> draw_enum(const std::vector<double>& cdf, std::size_t p, std::size_t m,
                            std::uint64_t row_seed) {
  const double u = to_unit(mix64(row_seed));
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t k = static_cast<std::size_t>(it - cdf.begin());
  if (k >= cdf.size()) k = cdf.size() - 1;
  return decode_state(k, p, m);
}

std::vector<double> enum_cdf(const SymmetricNetwork& theta, const InteractionSpec& spec) {
  std::vector<double> pmf = enumerate_joint(theta, spec);
  double acc = 0.0;
  for (double& v : pmf) {
    acc += v;
    v = acc;
  }
  return pmf;
}

std::vector<Code> draw_gibbs(const SymmetricNetwork& theta, const InteractionSpec& spec,
                             std::size_t burn_in, std::uint64_t row_seed) {
  SplitMix64 rng(row_seed);
  std::vector<Code> x = random_state(theta.p(), spec.m(), rng);
  for (std::size_t k = 0; k < burn_in; ++k) x = gibbs_sweep(std::move(x), theta, spec, rng);
  // At least one sweep so the draw never equals the uniform initial state.
  if (burn_in == 0) x = gibbs_sweep(std::move(x), theta, spec, rng);
  return x;
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t row) { return derive_seed(seed, {row}); }

}  // namespace

Dataset gibbs_chain(const SymmetricNetwork& theta, const InteractionSpec& spec, std::size_t draws,
                    const SamplerConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);
  std::vector<Code> x = random_state(theta.p(), spec.m(), rng);
  for (std::size_t k = 0; k < cfg.burn_in; ++k) x = gibbs_sweep(std::move(x), theta, spec, rng);
  std::vector<Code> cells;
  cells.reserve(draws * theta.p());
  for (std::size_t d = 0; d < draws; ++d) {
    for (std::size_t k = 0; k < cfg.thinning; ++k) x = gibbs_sweep(std::move(x), theta, spec, rng);
    cells.insert(cells.end(), x.begin(), x.end());
  }
  return Dataset(draws, theta.p(), std::move(cells));
}

CftpDraw sample_cftp(const SymmetricNetwork& theta, const InteractionSpec& spec,
                     std::uint64_t seed, std::size_t max_epochs) {
  spec.check_shapes();
  check_attractive(theta, spec);
  if (max_epochs < 1 || max_epochs > 62) throw ArgumentError("max_cftp_epochs must be in [1, 62]");
  const std::size_t p = theta.p();
  const Code top_code = static_cast<Code>(spec.m() - 1);
  std::vector<Code> top(p), bottom(p);
  std::int64_t depth = 1;
  for (std::size_t epoch = 0; epoch < max_epochs; ++epoch, depth *= 2) {
    std::fill(top.begin(), top.end(), top_code);
    std::fill(bottom.begin(), bottom.end(), Code{0});
    for (std::int64_t t = -depth; t < 0; ++t) {
      for (std::size_t s = 0; s < p; ++s) {
        const double u = counter_uniform(seed, t, s);
        inverse_cdf_update(s, top, theta, spec, u);
        inverse_cdf_update(s, bottom, theta, spec, u);
      }
    }
    if (top == bottom) return {std::move(top), -depth};
  }
  const long long deepest = -(depth / 2);
  throw SamplerTimeout("CFTP did not coalesce within " + std::to_string(max_epochs) +
                           " epochs (deepest start time " + std::to_string(deepest) + ")",
                       deepest);
}

std::vector<Code> sample_row(const SymmetricNetwork& theta, const InteractionSpec& spec,
                             std::size_t row, const SamplerConfig& cfg) {
  cfg.validate();
  const std::uint64_t rs = row_seed(cfg.seed, row);
  switch (cfg.method) {
    case SamplerMethod::CFTP: return sample_cftp(theta, spec, rs, cfg.max_cftp_epochs).state;
    case SamplerMethod::GIBBS: return draw_gibbs(theta, spec, cfg.burn_in, rs);
    case SamplerMethod::ENUM: return draw_enum(enum_cdf(theta, spec), theta.p(), spec.m(), rs);
  }
  throw ArgumentError("unknown sampler method");
}

Dataset sample_dataset(const SymmetricNetwork& theta, const InteractionSpec& spec, std::size_t n,
                       const SamplerConfig& cfg) {
  cfg.validate();
  if (n < 1) throw ArgumentError("sample size must be >= 1");
  spec.check_shapes();
  const std::size_t p = theta.p();
  std::vector<Code> cells;
  cells.reserve(n * p);
  if (cfg.method == SamplerMethod::ENUM) {
    const std::vector<double> cdf = enum_cdf(theta, spec);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = draw_enum(cdf, p, spec.m(), row_seed(cfg.seed, i));
      cells.insert(cells.end(), x.begin(), x.end());
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = sample_row(theta, spec, i, cfg);
      cells.insert(cells.end(), x.begin(), x.end());
    }
  }
  return Dataset(n, p, std::move(cells));
}

ProjectedDataset drop_nodes(const Dataset& data, std::span<const std::size_t> hidden) {
  std::vector<bool> drop(data.p(), false);
  for (std::size_t h : hidden) {
    if (h >= data.p()) throw ArgumentError("hidden node index out of range: " + std::to_string(h));
    drop[h] = true;
  }
  std::vector<std::size_t> kept;
  for (std::size_t s = 0; s < data.p(); ++s)
    if (!drop[s]) kept.push_back(s);
  if (kept.empty()) throw ArgumentError("cannot hide every node");
  std::vector<Code> cells;
  cells.reserve(data.n() * kept.size());
  for (std::size_t i = 0; i < data.n(); ++i)
    for (std::size_t s : kept) cells.push_back(data.at(i, s));
  return {Dataset(data.n(), kept.size(), std::move(cells)), std::move(kept)};
}

}  // namespace mrfnet
