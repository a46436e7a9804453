#include "mrfnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <thread>

#include "mrfnet/errors.hpp"
#include "mrfnet/random.hpp"

namespace mrfnet {

namespace {

constexpr std::size_t kMaxTruthAttempts = 1000;

double draw_weight(SplitMix64& rng, double lo, double hi) {
  return lo == hi ? lo : lo + (hi - lo) * rng.uniform();
}

// First k entries of a uniformly random permutation of 0..count-1.
std::vector<std::size_t> sample_without_replacement(std::size_t count, std::size_t k,
                                                    SplitMix64& rng) {
  std::vector<std::size_t> pool(count);
  for (std::size_t i = 0; i < count; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(count - i)]);
  pool.resize(k);
  return pool;
}

void check_truth_config(const TruthConfig& cfg) {
  if (cfg.p < 2) throw ArgumentError("p must be >= 2");
  if (!(cfg.weight_lo >= 0.0) || !(cfg.weight_hi >= cfg.weight_lo) || !(cfg.weight_hi > 0.0))
    throw ArgumentError("weight range must satisfy 0 <= lo <= hi, hi > 0");
  if (!(cfg.edge_factor >= 0.0)) throw ArgumentError("edge_factor must be >= 0");
  const std::size_t pairs = cfg.p * (cfg.p - 1) / 2;
  const auto edges = static_cast<std::size_t>(std::llround(cfg.edge_factor * cfg.p));
  if (edges > pairs)
    throw ArgumentError("edge budget " + std::to_string(edges) + " exceeds the " +
                        std::to_string(pairs) + " available observed pairs");
  if (cfg.r > 0 && (cfg.cross_degree < 1 || cfg.cross_degree > cfg.p))
    throw ArgumentError("cross_degree must be in [1, p]");
}

}  // namespace

PartitionedTruth generate_truth(const TruthConfig& cfg, std::uint64_t seed) {
  check_truth_config(cfg);
  const std::size_t p = cfg.p, r = cfg.r, total = p + r;
  const auto edges = static_cast<std::size_t>(std::llround(cfg.edge_factor * p));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t l = s + 1; l < p; ++l) pairs.emplace_back(s, l);

  SymmetricNetwork observed(p);
  bool found = false;
  for (std::size_t attempt = 0; attempt < kMaxTruthAttempts && !found; ++attempt) {
    SplitMix64 rng(derive_seed(seed, {0, attempt}));
    SymmetricNetwork net(p);
    for (std::size_t idx : sample_without_replacement(pairs.size(), edges, rng))
      net.set(pairs[idx].first, pairs[idx].second, draw_weight(rng, cfg.weight_lo, cfg.weight_hi));
    if (net.max_degree() <= cfg.max_degree) {
      observed = std::move(net);
      found = true;
    }
  }
  if (!found) throw ArgumentError("could not draw an observed network within the degree cap");

  PartitionedTruth truth;
  for (std::size_t s = 0; s < p; ++s) truth.observed.push_back(s);
  for (std::size_t h = p; h < total; ++h) truth.hidden.push_back(h);

  for (std::size_t attempt = 0; attempt < kMaxTruthAttempts; ++attempt) {
    SplitMix64 rng(derive_seed(seed, {1, r, attempt}));
    SymmetricNetwork full(total);
    for (const auto& t : observed.entries()) full.set(t.s, t.l, t.weight);
    if (r > 0) {
      const std::size_t slots = r * cfg.cross_degree;
      std::vector<std::size_t> targets;
      if (slots <= p) {
        targets = sample_without_replacement(p, slots, rng);
      } else {
        for (std::size_t h = 0; h < r; ++h) {
          auto pick = sample_without_replacement(p, cfg.cross_degree, rng);
          targets.insert(targets.end(), pick.begin(), pick.end());
        }
      }
      for (std::size_t h = 0; h < r; ++h)
        for (std::size_t j = 0; j < cfg.cross_degree; ++j)
          full.set(targets[h * cfg.cross_degree + j], p + h,
                   draw_weight(rng, cfg.weight_lo, cfg.weight_hi));
    }
    if (full.max_degree() <= cfg.max_degree) {
      truth.theta_full = std::move(full);
      return truth;
    }
  }
  throw ArgumentError("could not attach hidden nodes within the degree cap");
}

std::size_t sample_size_for(double a, std::size_t p, double beta) {
  if (!(beta > 0.0)) throw ArgumentError("beta must be > 0");
  const double n = a * std::log(static_cast<double>(p)) / (beta * beta);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n)));
}

void ExperimentConfig::validate() const {
  if (p < 2) throw ArgumentError("p must be >= 2");
  if (r_values.empty()) throw ArgumentError("r_values must not be empty");
  if (beta_grid.empty()) throw ArgumentError("beta_grid must not be empty");
  for (double b : beta_grid)
    if (!(b > 0.0)) throw ArgumentError("every beta must be > 0");
  if (replications < 1) throw ArgumentError("replications must be >= 1");
  if (!(weight_lo >= 0.0)) throw ArgumentError("weight_lo must be >= 0 (attractive truth)");
  if (!(lambda_c > 0.0)) throw ArgumentError("penalty c must be > 0");
  if (workers < 1) throw ArgumentError("workers must be >= 1");
  if (!(zero_tol >= 0.0)) throw ArgumentError("zero_tol must be >= 0");
  PenaltyConfig{penalty_family, 0.0, scad_a}.validate();
  sampler.validate();
  FitOptions{fit_max_iters, fit_tol_rel_obj, fit_step_init, fit_backtrack_factor, {}, true, 0.0}
      .validate();
  for (std::size_t r : r_values) check_truth_config(truth_config(r));
}

TruthConfig ExperimentConfig::truth_config(std::size_t r) const {
  return TruthConfig{p, r, edge_factor, weight_lo, weight_hi, cross_degree, max_degree};
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {
      {"p", c.p},
      {"r_values", c.r_values},
      {"edge_factor", c.edge_factor},
      {"weight_range", {c.weight_lo, c.weight_hi}},
      {"cross_degree", c.cross_degree},
      {"max_degree", c.max_degree},
      {"beta_grid", c.beta_grid},
      {"replications", c.replications},
      {"master_seed", c.master_seed},
      {"penalty",
       {{"family", to_string(c.penalty_family)},
        {"c", c.lambda_c},
        {"scad_a", c.scad_a},
        {"penalize_diagonal", c.penalize_diagonal}}},
      {"sampler",
       {{"method", to_string(c.sampler.method)},
        {"burn_in", c.sampler.burn_in},
        {"thinning", c.sampler.thinning},
        {"max_cftp_epochs", c.sampler.max_cftp_epochs}}},
      {"fit",
       {{"max_iters", c.fit_max_iters},
        {"tol_rel_obj", c.fit_tol_rel_obj},
        {"step_init", c.fit_step_init},
        {"backtrack_factor", c.fit_backtrack_factor}}},
      {"zero_tol", c.zero_tol},
      {"workers", c.workers},
      {"record_timing", c.record_timing},
  };
}

namespace {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("config field '" + path + key + "': " + e.what());
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                    const std::string& path) {
  if (!j.is_object()) throw ArgumentError("config section '" + path + "' must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ArgumentError("unknown config field '" + path + item.key() + "'");
  }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  reject_unknown(j,
                 {"p", "r_values", "edge_factor", "weight_range", "cross_degree", "max_degree",
                  "beta_grid", "replications", "master_seed", "penalty", "sampler", "fit",
                  "zero_tol", "workers", "record_timing"},
                 "");
  read_field(j, "p", c.p, "");
  read_field(j, "r_values", c.r_values, "");
  read_field(j, "edge_factor", c.edge_factor, "");
  if (j.contains("weight_range")) {
    std::vector<double> wr;
    read_field(j, "weight_range", wr, "");
    if (wr.size() != 2) throw ArgumentError("weight_range must be [lo, hi]");
    c.weight_lo = wr[0];
    c.weight_hi = wr[1];
  }
  read_field(j, "cross_degree", c.cross_degree, "");
  read_field(j, "max_degree", c.max_degree, "");
  read_field(j, "beta_grid", c.beta_grid, "");
  read_field(j, "replications", c.replications, "");
  read_field(j, "master_seed", c.master_seed, "");
  read_field(j, "zero_tol", c.zero_tol, "");
  read_field(j, "workers", c.workers, "");
  read_field(j, "record_timing", c.record_timing, "");

  if (j.contains("penalty")) {
    const auto& pj = j.at("penalty");
    reject_unknown(pj, {"family", "c", "scad_a", "penalize_diagonal"}, "penalty.");
    std::string family = to_string(c.penalty_family);
    read_field(pj, "family", family, "penalty.");
    c.penalty_family = penalty_family_from_string(family.c_str());
    read_field(pj, "c", c.lambda_c, "penalty.");
    read_field(pj, "scad_a", c.scad_a, "penalty.");
    read_field(pj, "penalize_diagonal", c.penalize_diagonal, "penalty.");
  }
  if (j.contains("sampler")) {
    const auto& sj = j.at("sampler");
    reject_unknown(sj, {"method", "burn_in", "thinning", "max_cftp_epochs"}, "sampler.");
    std::string method = to_string(c.sampler.method);
    read_field(sj, "method", method, "sampler.");
    c.sampler.method = sampler_method_from_string(method.c_str());
    read_field(sj, "burn_in", c.sampler.burn_in, "sampler.");
    read_field(sj, "thinning", c.sampler.thinning, "sampler.");
    read_field(sj, "max_cftp_epochs", c.sampler.max_cftp_epochs, "sampler.");
  }
  if (j.contains("fit")) {
    const auto& fj = j.at("fit");
    reject_unknown(fj, {"max_iters", "tol_rel_obj", "step_init", "backtrack_factor"}, "fit.");
    read_field(fj, "max_iters", c.fit_max_iters, "fit.");
    read_field(fj, "tol_rel_obj", c.fit_tol_rel_obj, "fit.");
    read_field(fj, "step_init", c.fit_step_init, "fit.");
    read_field(fj, "backtrack_factor", c.fit_backtrack_factor, "fit.");
  }
  c.validate();
  return c;
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ArgumentError("override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  nlohmann::json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ArgumentError("override key '" + key + "' is malformed");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (!node->is_object() && !node->is_null())
      throw ArgumentError("override key '" + key + "' descends into a non-object");
    start = dot + 1;
  }
}

const Annotation* MetricsReport::fatal() const {
  for (const auto& row : rows) {
    if (row.completed > 0) continue;
    for (const auto& a : annotations)
      if (a.r == row.r && a.beta == row.beta) return &a;
  }
  return nullptr;
}

namespace {

struct ReplicationOutcome {
  bool ok = false;
  double rel_error = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double iterations = 0.0;
  double wall_ms = 0.0;
  FailureKind kind = FailureKind::Other;
  std::string message;
};

struct Task {
  std::size_t r_index;
  std::size_t beta_index;
  std::size_t k;
};

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const InteractionSpec spec = auto_logistic_spec();
  const std::size_t K = cfg.replications;

  // One truth per setting r; the observed block is shared across settings.
  const std::uint64_t truth_seed = derive_seed(cfg.master_seed, {0x7275747});
  std::vector<PartitionedTruth> truths;
  std::vector<StructureStats> stats;
  std::vector<SymmetricNetwork> observed_truths;
  for (std::size_t r : cfg.r_values) {
    truths.push_back(generate_truth(cfg.truth_config(r), truth_seed));
    stats.push_back(structure_stats(truths.back()));
    observed_truths.push_back(truths.back().observed_block());
  }

  std::vector<Task> tasks;
  for (std::size_t ri = 0; ri < cfg.r_values.size(); ++ri)
    for (std::size_t bi = 0; bi < cfg.beta_grid.size(); ++bi)
      for (std::size_t k = 0; k < K; ++k) tasks.push_back({ri, bi, k});
  std::vector<ReplicationOutcome> outcomes(tasks.size());

  auto run_task = [&](const Task& task, ReplicationOutcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t r = cfg.r_values[task.r_index];
    const double beta = cfg.beta_grid[task.beta_index];
    const auto& truth = truths[task.r_index];
    const std::size_t n =
        sample_size_for(static_cast<double>(stats[task.r_index].a_n), cfg.p, beta);
    try {
      SamplerConfig sc = cfg.sampler;
      sc.seed = derive_seed(cfg.master_seed, {r, std::bit_cast<std::uint64_t>(beta), task.k});
      const Dataset full = sample_dataset(truth.theta_full, spec, n, sc);
      const Dataset observed = drop_nodes(full, truth.hidden).data;
      const PenaltyConfig pen{cfg.penalty_family, lambda_default(n, cfg.p, cfg.lambda_c),
                              cfg.scad_a};
      FitOptions fo{cfg.fit_max_iters, cfg.fit_tol_rel_obj, cfg.fit_step_init,
                    cfg.fit_backtrack_factor, {}, cfg.penalize_diagonal};
      const FitResult fr = fit(observed, spec, pen, fo);
      const auto& truth_obs = observed_truths[task.r_index];
      const SupportMetrics sm = support_metrics(fr.theta_hat, truth_obs, cfg.zero_tol);
      out.rel_error = relative_error(fr.theta_hat, truth_obs);
      out.precision = sm.precision;
      out.recall = sm.recall;
      out.iterations = static_cast<double>(fr.iterations);
      out.ok = true;
    } catch (const SamplerTimeout& e) {
      out.kind = FailureKind::SamplerTimeout;
      out.message = e.what();
    } catch (const NumericalError& e) {
      out.kind = FailureKind::Numerical;
      out.message = e.what();
    } catch (const std::exception& e) {
      out.kind = FailureKind::Other;
      out.message = e.what();
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
      run_task(tasks[i], outcomes[i]);
  };
  const std::size_t n_threads = std::min(cfg.workers, tasks.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  }

  MetricsReport report;
  std::size_t idx = 0;
  for (std::size_t ri = 0; ri < cfg.r_values.size(); ++ri) {
    for (std::size_t bi = 0; bi < cfg.beta_grid.size(); ++bi) {
      ReportRow row;
      row.r = cfg.r_values[ri];
      row.beta = cfg.beta_grid[bi];
      row.a_n = stats[ri].a_n;
      row.n = sample_size_for(static_cast<double>(row.a_n), cfg.p, row.beta);
      row.b_n = stats[ri].b_n;
      row.boundary_size = stats[ri].boundary.size();
      std::vector<double> errs;
      double prec = 0.0, rec = 0.0, iters = 0.0, wall = 0.0;
      for (std::size_t k = 0; k < K; ++k, ++idx) {
        const auto& o = outcomes[idx];
        wall += o.wall_ms;
        if (!o.ok) {
          report.annotations.push_back({row.r, row.beta, k, o.kind, o.message});
          continue;
        }
        errs.push_back(o.rel_error);
        prec += o.precision;
        rec += o.recall;
        iters += o.iterations;
      }
      row.completed = errs.size();
      const double c = static_cast<double>(errs.size());
      if (errs.empty()) {
        row.rel_mse_mean = row.rel_mse_sd = row.precision_mean = row.recall_mean =
            row.iters_mean = std::nan("");
      } else {
        double mean = 0.0;
        for (double e : errs) mean += e;
        mean /= c;
        double ss = 0.0;
        for (double e : errs) ss += (e - mean) * (e - mean);
        row.rel_mse_mean = mean;
        row.rel_mse_sd = errs.size() > 1 ? std::sqrt(ss / (c - 1.0)) : 0.0;
        row.precision_mean = prec / c;
        row.recall_mean = rec / c;
        row.iters_mean = iters / c;
      }
      row.wall_ms = cfg.record_timing ? wall : 0.0;
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace mrfnet
