#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "mrfnet/estimator.hpp"
#include "mrfnet/metrics.hpp"
#include "mrfnet/penalty.hpp"
#include "mrfnet/sampler.hpp"

namespace mrfnet {

struct TruthConfig {
  std::size_t p = 20;
  std::size_t r = 0;
  double edge_factor = 1.3;
  double weight_lo = 0.4;
  double weight_hi = 0.8;
  std::size_t cross_degree = 2;  // observed neighbors per hidden node
  std::size_t max_degree = 8;
};

// Builds theta* over p + r nodes: round(edge_factor * p) observed edges chosen
// uniformly without replacement, each hidden node attached to cross_degree
// observed nodes (distinct across hidden nodes when r * cross_degree <= p),
// weights uniform in [weight_lo, weight_hi], zero diagonal. Observed nodes
// are 0..p-1, hidden p..p+r-1. The observed block depends on `seed` only, so
// truths that differ in r share it. Draws whose maximum degree exceeds
// max_degree are redrawn.
PartitionedTruth generate_truth(const TruthConfig& cfg, std::uint64_t seed);

// n = round(a log p / beta^2), at least 1.
std::size_t sample_size_for(double a, std::size_t p, double beta);

struct ExperimentConfig {
  std::size_t p = 20;
  std::vector<std::size_t> r_values{0, 3, 8};
  double edge_factor = 1.3;
  double weight_lo = 0.4;
  double weight_hi = 0.8;
  // Four attachments per hidden node; with two, r = 3 is indistinguishable
  // from r = 0 once n drops below p.
  std::size_t cross_degree = 4;
  std::size_t max_degree = 8;
  std::vector<double> beta_grid{0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
  std::size_t replications = 20;
  std::uint64_t master_seed = 20110801;

  PenaltyFamily penalty_family = PenaltyFamily::L1;
  double lambda_c = 0.5;
  double scad_a = 3.7;
  bool penalize_diagonal = true;

  SamplerConfig sampler{};
  std::size_t fit_max_iters = 5000;
  double fit_tol_rel_obj = 1e-8;
  double fit_step_init = 1.0;
  double fit_backtrack_factor = 0.5;

  double zero_tol = 1e-8;
  std::size_t workers = 1;
  bool record_timing = false;  // wall_ms is 0 unless set, keeping report.csv reproducible

  void validate() const;
  TruthConfig truth_config(std::size_t r) const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
// Unknown keys and ill-typed values raise ArgumentError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
// Applies "a.b=value" to a config JSON. The value is parsed as JSON when
// possible, otherwise taken as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

enum class FailureKind { SamplerTimeout, Numerical, Other };

struct Annotation {
  std::size_t r;
  double beta;
  std::size_t replication;
  FailureKind kind;
  std::string message;
};

struct ReportRow {
  std::size_t r = 0;
  double beta = 0.0;
  std::size_t n = 0;
  std::size_t a_n = 0;
  double b_n = 0.0;
  std::size_t boundary_size = 0;
  double rel_mse_mean = 0.0;
  double rel_mse_sd = 0.0;
  double precision_mean = 0.0;
  double recall_mean = 0.0;
  double iters_mean = 0.0;
  double wall_ms = 0.0;
  std::size_t completed = 0;  // replications that finished
};

struct MetricsReport {
  std::vector<ReportRow> rows;  // ordered by r_values, then beta_grid
  std::vector<Annotation> annotations;

  // A cell where every replication failed, if any; the CLI aborts on it.
  const Annotation* fatal() const;
};

// Runs the full Monte Carlo study. Deterministic given cfg (worker count
// does not change the output). Replication failures are annotated, not thrown.
MetricsReport run_experiment(const ExperimentConfig& cfg);

// Writes report.csv, mse_vs_beta.svg, annotations.csv and config.resolved.json.
void emit_report(const MetricsReport& report, const ExperimentConfig& cfg,
                 const std::filesystem::path& out_dir);

std::string report_csv(const MetricsReport& report);
std::string report_svg(const MetricsReport& report);

}  // namespace mrfnet
