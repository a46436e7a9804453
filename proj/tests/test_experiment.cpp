#include <algorithm>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "mrfnet/errors.hpp"
#include "mrfnet/experiment.hpp"
#include "mrfnet/io.hpp"

using namespace mrfnet;
using doctest::Approx;

namespace {

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.p = 6;
  c.r_values = {0};
  c.beta_grid = {1.0};
  c.replications = 1;
  c.cross_degree = 2;
  return c;
}

}  // namespace

TEST_CASE("generated truths follow the configuration") {
  TruthConfig tc;
  tc.p = 50;
  tc.r = 0;
  const auto t = generate_truth(tc, 7);
  CHECK(t.theta_full.entries().size() == 65);
  CHECK(structure_stats(t).b_n == 0.0);
  CHECK(generate_truth(tc, 7).theta_full == t.theta_full);
  for (const auto& e : t.theta_full.entries()) {
    CHECK(e.s != e.l);
    CHECK(e.weight >= tc.weight_lo);
    CHECK(e.weight <= tc.weight_hi);
  }
  CHECK(t.theta_full.max_degree() <= tc.max_degree);
}

TEST_CASE("hidden nodes attach to distinct observed nodes and share the observed block") {
  TruthConfig tc;
  tc.p = 20;
  tc.r = 3;
  tc.cross_degree = 2;
  const auto with = generate_truth(tc, 11);
  tc.r = 0;
  const auto without = generate_truth(tc, 11);
  CHECK(with.observed_block() == without.observed_block());
  std::set<std::size_t> attached;
  for (std::size_t h : with.hidden) {
    CHECK(with.theta_full.degree(h) == 2);
    for (const auto& nb : with.theta_full.neighbors(h)) {
      CHECK(nb.node < 20);
      attached.insert(nb.node);
    }
  }
  CHECK(attached.size() == 6);
  const auto st = structure_stats(with);
  CHECK(st.boundary.size() == 6);
  CHECK(st.b_n == Approx(oracle::b_n(oracle::dense(with.theta_full), with.observed, with.hidden)));
}

TEST_CASE("generator can hit a b_n of 1.8") {
  TruthConfig tc;
  tc.p = 50;
  tc.r = 8;
  tc.cross_degree = 2;
  tc.weight_lo = 0.44;
  tc.weight_hi = 0.46;
  const auto b = structure_stats(generate_truth(tc, 3)).b_n;
  CHECK(std::abs(b - 1.8) <= 0.05);
}

TEST_CASE("truth generation rejects impossible budgets") {
  TruthConfig tc;
  tc.p = 4;
  tc.edge_factor = 2.0;  // 8 edges, only 6 pairs
  CHECK_THROWS_AS(generate_truth(tc, 1), ArgumentError);
  tc.edge_factor = 1.0;
  tc.weight_lo = -0.1;
  CHECK_THROWS_AS(generate_truth(tc, 1), ArgumentError);
}

TEST_CASE("sample size formula") {
  CHECK(sample_size_for(26, 20, 1.0) == 78);
  CHECK(sample_size_for(65, 50, 0.3) == 2825);
  CHECK_THROWS_AS(sample_size_for(26, 20, 0.0), ArgumentError);
}

TEST_CASE("config json round trip and overrides") {
  ExperimentConfig c;
  c.penalty_family = PenaltyFamily::SCAD;
  c.sampler.method = SamplerMethod::GIBBS;
  c.r_values = {0, 8};
  const auto j = to_json(c);
  const auto back = experiment_config_from_json(j);
  CHECK(to_json(back) == j);

  auto k = j;
  apply_override(k, "penalty.c=0.7");
  apply_override(k, "beta_grid=[1.0,2.0]");
  apply_override(k, "sampler.method=CFTP");
  const auto o = experiment_config_from_json(k);
  CHECK(o.lambda_c == 0.7);
  CHECK(o.beta_grid == std::vector<double>{1.0, 2.0});
  CHECK(o.sampler.method == SamplerMethod::CFTP);

  auto bad = j;
  bad["replicates"] = 3;
  CHECK_THROWS_AS(experiment_config_from_json(bad), ArgumentError);
  bad = j;
  bad["beta_grid"] = {1.0, -1.0};
  CHECK_THROWS_AS(experiment_config_from_json(bad), ArgumentError);
  bad = j;
  bad["p"] = "many";
  CHECK_THROWS_AS(experiment_config_from_json(bad), ArgumentError);
  CHECK_THROWS_AS(apply_override(k, "novalue"), ArgumentError);
}

TEST_CASE("every config field is echoed") {
  const auto j = to_json(ExperimentConfig{});
  for (const char* key : {"p", "r_values", "edge_factor", "weight_range", "cross_degree",
                          "max_degree", "beta_grid", "replications", "master_seed", "penalty",
                          "sampler", "fit", "zero_tol", "workers", "record_timing"})
    CHECK(j.contains(key));
  CHECK(j["penalty"].contains("penalize_diagonal"));
  CHECK(j["sampler"].contains("max_cftp_epochs"));
}

TEST_CASE("degenerate experiment grid") {
  const auto rep = run_experiment(tiny());
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].b_n == 0.0);
  CHECK(rep.rows[0].completed == 1);
  CHECK(rep.rows[0].rel_mse_mean >= 0.0);
  CHECK(rep.rows[0].wall_ms == 0.0);
  CHECK(rep.fatal() == nullptr);
}

TEST_CASE("experiment output does not depend on worker count") {
  auto c = tiny();
  c.r_values = {0, 2};
  c.beta_grid = {0.8, 1.6};
  c.replications = 3;
  const auto one = report_csv(run_experiment(c));
  c.workers = 4;
  CHECK(report_csv(run_experiment(c)) == one);
}

TEST_CASE("report files") {
  auto c = tiny();
  c.r_values = {0, 2};
  c.beta_grid = {0.8, 1.2, 1.6};
  const auto rep = run_experiment(c);
  const auto dir = std::filesystem::temp_directory_path() / "mrfnet_report_test";
  std::filesystem::remove_all(dir);
  emit_report(rep, c, dir);
  const auto csv = io::read_file(dir / "report.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.rfind("setting_r,beta,n,a_n,b_n,boundary_size,rel_mse_mean,rel_mse_sd,precision_mean,"
                  "recall_mean,iters_mean,wall_ms\n",
                  0) == 0);
  const auto svg = io::read_file(dir / "mse_vs_beta.svg");
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1))
    ++polylines;
  CHECK(polylines == 2);
  const auto echoed = nlohmann::json::parse(io::read_file(dir / "config.resolved.json"));
  CHECK(echoed == to_json(c));
  CHECK(std::filesystem::exists(dir / "annotations.csv"));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_report(MetricsReport{}, c, dir), ArgumentError);
}

TEST_CASE("failed replications are annotated, not thrown") {
  auto c = tiny();
  c.sampler.max_cftp_epochs = 1;
  c.weight_lo = 3.0;
  c.weight_hi = 3.5;
  c.replications = 4;
  const auto rep = run_experiment(c);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].completed + rep.annotations.size() == 4);
  CHECK(!rep.annotations.empty());
  CHECK(rep.annotations[0].kind == FailureKind::SamplerTimeout);
}
