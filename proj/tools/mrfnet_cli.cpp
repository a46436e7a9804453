#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mrfnet/checks.hpp"
#include "mrfnet/errors.hpp"
#include "mrfnet/estimator.hpp"
#include "mrfnet/experiment.hpp"
#include "mrfnet/io.hpp"
#include "mrfnet/metrics.hpp"
#include "mrfnet/sampler.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mrfnet;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kTimeout = 4 };

struct SampleArgs {
  TruthConfig truth;
  std::size_t n = 500;
  std::uint64_t seed = 1;
  std::string method = "CFTP";
  std::size_t burn_in = 1000;
  std::string out_dir = ".";
};

struct FitArgs {
  std::string data, out;
  std::optional<double> lambda;
  double c = 0.5;
  std::string penalty = "L1";
  double scad_a = 3.7;
  std::size_t max_iters = 5000;
  double tol = 1e-8;
  bool no_diag_penalty = false;
};

struct MetricsArgs {
  std::string truth, partition, estimate, data, out;
  double zero_tol = 1e-8;
};

struct ExperimentArgs {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out_dir = "out";
  bool timing = false;
};

Dataset load_dataset(const std::string& path) {
  std::istringstream in(io::read_file(path));
  return io::read_dataset_csv(in);
}

SymmetricNetwork load_network(const std::string& path, std::optional<std::size_t> p = {}) {
  std::istringstream in(io::read_file(path));
  return io::read_network_csv(in, p);
}

std::string network_csv(const SymmetricNetwork& theta) {
  std::ostringstream out;
  io::write_network_csv(out, theta);
  return out.str();
}

std::string dataset_csv(const Dataset& data) {
  std::ostringstream out;
  io::write_dataset_csv(out, data);
  return out.str();
}

json parse_json_file(const std::string& path) {
  json j = json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw ArgumentError("'" + path + "' is not valid JSON");
  return j;
}

int run_sample(const SampleArgs& a) {
  const auto truth = generate_truth(a.truth, a.seed);
  const auto stats = structure_stats(truth);
  SamplerConfig sc;
  sc.method = sampler_method_from_string(a.method.c_str());
  sc.burn_in = a.burn_in;
  sc.seed = derive_seed(a.seed, {1});
  const auto spec = auto_logistic_spec();
  const Dataset full = sample_dataset(truth.theta_full, spec, a.n, sc);
  const Dataset observed = drop_nodes(full, truth.hidden).data;

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  io::write_file(dir / "truth.csv", network_csv(truth.theta_full));
  io::write_file(dir / "partition.json",
                 json{{"observed", truth.observed}, {"hidden", truth.hidden}}.dump(2) + "\n");
  io::write_file(dir / "data.csv", dataset_csv(observed));
  io::write_file(dir / "data_full.csv", dataset_csv(full));
  std::printf("wrote %zu rows over %zu observed + %zu hidden nodes to %s (a_n=%zu, b_n=%s)\n",
              a.n, truth.observed.size(), truth.hidden.size(), dir.string().c_str(), stats.a_n,
              io::format_double(stats.b_n).c_str());
  return kOk;
}

int run_fit(const FitArgs& a) {
  const Dataset data = load_dataset(a.data);
  PenaltyConfig pen;
  pen.family = penalty_family_from_string(a.penalty.c_str());
  pen.scad_a = a.scad_a;
  pen.lambda = a.lambda ? *a.lambda : lambda_default(data.n(), data.p(), a.c);
  FitOptions fo;
  fo.max_iters = a.max_iters;
  fo.tol_rel_obj = a.tol;
  fo.penalize_diagonal = !a.no_diag_penalty;
  const auto result = fit(data, auto_logistic_spec(), pen, fo);
  io::write_file(a.out, network_csv(result.theta_hat));
  for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const json summary{{"lambda", pen.lambda},
                     {"penalty", to_string(pen.family)},
                     {"iterations", result.iterations},
                     {"converged", result.converged},
                     {"objective", result.objective_trace.back()},
                     {"grad_inf_norm", result.final_grad_inf_norm},
                     {"nonzero_edges", result.theta_hat.entries().size()}};
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

int run_metrics(const MetricsArgs& a) {
  const json part = parse_json_file(a.partition);
  PartitionedTruth truth;
  truth.observed = part.at("observed").get<std::vector<std::size_t>>();
  truth.hidden = part.at("hidden").get<std::vector<std::size_t>>();
  truth.theta_full = load_network(a.truth, truth.observed.size() + truth.hidden.size());
  truth.validate();
  const auto stats = structure_stats(truth);
  const auto truth_obs = truth.observed_block();
  const auto estimate = load_network(a.estimate, truth.observed.size());
  const auto sm = support_metrics(estimate, truth_obs, a.zero_tol);

  json out{{"a_n", stats.a_n},
           {"b_n", stats.b_n},
           {"boundary", stats.boundary},
           {"relative_error", relative_error(estimate, truth_obs)},
           {"precision", sm.precision},
           {"recall", sm.recall},
           {"f1", sm.f1}};
  const auto diff = estimate - truth_obs;
  if (diff.norm2() > 0.0) out["tau_ratio_error"] = stats.tau_ratio(diff);
  if (!a.data.empty()) {
    const Dataset data = load_dataset(a.data);
    const auto spec = auto_logistic_spec();
    const auto a2 = a2_eigen_proxies(data, estimate, spec);
    out["a2_proxy"] = {{"alpha", a2.alpha},
                       {"alpha_prime", a2.alpha_prime},
                       {"reference_n", a2.reference_n},
                       {"ill_conditioned", a2.ill_conditioned}};
    out["conditional_kl_plugin"] = conditional_kl(truth_obs, diff, data, spec);
    out["rate_r_n"] = rate_r_n(a2.alpha, data.n(), static_cast<double>(stats.a_n), data.p(),
                               stats.b_n, diff.norm2() > 0.0 ? stats.tau_ratio(diff) : 0.0);
  }
  const std::string text = out.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    io::write_file(a.out, text);
  return kOk;
}

int run_experiment_cmd(const ExperimentArgs& a) {
  json j = a.config.empty() ? to_json(ExperimentConfig{}) : parse_json_file(a.config);
  for (const auto& s : a.sets) apply_override(j, s);
  if (a.seed) j["master_seed"] = *a.seed;
  if (a.workers) j["workers"] = *a.workers;
  if (a.timing) j["record_timing"] = true;
  const ExperimentConfig cfg = experiment_config_from_json(j);

  for (std::size_t r : cfg.r_values) {
    const auto truth = generate_truth(cfg.truth_config(r), derive_seed(cfg.master_seed, {0x7275747}));
    const auto st = structure_stats(truth);
    std::fprintf(stderr, "setting r=%zu: a_n=%zu, b_n=%.4f, boundary=%zu\n", r, st.a_n, st.b_n,
                 st.boundary.size());
  }
  const MetricsReport report = run_experiment(cfg);
  emit_report(report, cfg, a.out_dir);
  std::fprintf(stderr, "%zu rows, %zu failed replications, written to %s\n", report.rows.size(),
               report.annotations.size(), a.out_dir.c_str());
  if (const Annotation* f = report.fatal()) {
    std::fprintf(stderr, "error: every replication failed at r=%zu beta=%g: %s\n", f->r, f->beta,
                 f->message.c_str());
    return f->kind == FailureKind::SamplerTimeout ? kTimeout : kNumerical;
  }
  return kOk;
}

int run_check(std::uint64_t seed) {
  bool all = true;
  for (const auto& c : run_self_checks(seed)) {
    std::printf("%s  %s (%s)\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
    all = all && c.passed;
  }
  return all ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized pseudo-likelihood estimation for auto-model networks with hidden nodes"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Generate a truth and sample a dataset");
  sample->add_option("--p", sa.truth.p, "Observed nodes")->capture_default_str();
  sample->add_option("--r", sa.truth.r, "Hidden nodes")->capture_default_str();
  sample->add_option("--n", sa.n, "Rows to sample")->capture_default_str();
  sample->add_option("--edge-factor", sa.truth.edge_factor)->capture_default_str();
  sample->add_option("--weight-lo", sa.truth.weight_lo)->capture_default_str();
  sample->add_option("--weight-hi", sa.truth.weight_hi)->capture_default_str();
  sample->add_option("--cross-degree", sa.truth.cross_degree)->capture_default_str();
  sample->add_option("--max-degree", sa.truth.max_degree)->capture_default_str();
  sample->add_option("--method", sa.method, "CFTP, GIBBS or ENUM")->capture_default_str();
  sample->add_option("--burn-in", sa.burn_in, "Gibbs sweeps per row")->capture_default_str();
  sample->add_option("--seed", sa.seed)->capture_default_str();
  sample->add_option("--out-dir", sa.out_dir)->capture_default_str();

  FitArgs fa;
  auto* fitc = app.add_subcommand("fit", "Fit a network to a dataset CSV");
  fitc->add_option("--data", fa.data, "Dataset CSV")->required();
  fitc->add_option("--out", fa.out, "Estimate CSV to write")->required();
  auto* lam = fitc->add_option("--lambda", fa.lambda, "Penalty level");
  fitc->add_option("--c", fa.c, "lambda = c sqrt(n log p)")->capture_default_str()->excludes(lam);
  fitc->add_option("--penalty", fa.penalty, "L1 or SCAD")->capture_default_str();
  fitc->add_option("--scad-a", fa.scad_a)->capture_default_str();
  fitc->add_option("--max-iters", fa.max_iters)->capture_default_str();
  fitc->add_option("--tol", fa.tol, "Relative objective tolerance")->capture_default_str();
  fitc->add_flag("--no-diagonal-penalty", fa.no_diag_penalty);

  MetricsArgs ma;
  auto* metrics = app.add_subcommand("metrics", "Compare an estimate against a truth");
  metrics->add_option("--truth", ma.truth, "Full truth CSV")->required();
  metrics->add_option("--partition", ma.partition, "partition.json")->required();
  metrics->add_option("--estimate", ma.estimate, "Estimate CSV")->required();
  metrics->add_option("--data", ma.data, "Observed dataset for plug-in proxies");
  metrics->add_option("--zero-tol", ma.zero_tol)->capture_default_str();
  metrics->add_option("--out", ma.out, "Write JSON here instead of stdout");

  ExperimentArgs ea;
  auto* exp = app.add_subcommand("experiment", "Run the Monte Carlo study");
  exp->add_option("--config", ea.config, "JSON config file");
  exp->add_option("--set", ea.sets, "Override, e.g. --set penalty.c=0.7");
  exp->add_option("--seed", ea.seed, "Master seed");
  exp->add_option("--workers", ea.workers, "Worker threads");
  exp->add_option("--out-dir", ea.out_dir)->capture_default_str();
  exp->add_flag("--timing", ea.timing, "Record wall_ms (makes report.csv run-dependent)");

  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "Run the invariant self-checks");
  check->add_option("--seed", check_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sample) return run_sample(sa);
    if (*fitc) return run_fit(fa);
    if (*metrics) return run_metrics(ma);
    if (*exp) return run_experiment_cmd(ea);
    if (*check) return run_check(check_seed);
  } catch (const SamplerTimeout& e) {
    std::fprintf(stderr, "sampler timeout: %s\n", e.what());
    return kTimeout;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumerical;
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kOk;
}
