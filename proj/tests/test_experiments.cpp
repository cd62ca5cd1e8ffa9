#include <gtest/gtest.h>

#include <cmath>

#include "covertime/experiments.hpp"
#include "covertime/report_json.hpp"

using namespace covertime;

TEST(Fit, RecoversExactPowerLaw) {
  const std::vector<double> x{10, 20, 40, 80};
  std::vector<double> y;
  for (double v : x)
    y.push_back(3.0 * std::pow(v, 1.5));
  const auto f = fit_loglog(x, y);
  EXPECT_NEAR(f.slope, 1.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(f.ci_low, 1.5, 1e-9);
  EXPECT_NEAR(f.ci_high, 1.5, 1e-9);
}

TEST(Fit, IntervalCoversNoisySlope) {
  const std::vector<double> x{100, 200, 400, 800, 1600};
  const std::vector<double> noise{1.1, 0.9, 1.05, 0.95, 1.0};
  std::vector<double> y;
  for (std::size_t i = 0; i < x.size(); ++i)
    y.push_back(x[i] * noise[i]);
  const auto f = fit_loglog(x, y);
  EXPECT_LT(f.ci_low, f.slope);
  EXPECT_GT(f.ci_high, f.slope);
  EXPECT_LT(f.ci_low, 1.0);
  EXPECT_GT(f.ci_high, 1.0);
}

TEST(Fit, Median) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

TEST(CooperFrieze, MatchesFixedPointIteration) {
  for (double c : {1.5, 2.0, 4.0}) {
    double x = 1.0;
    for (int i = 0; i < 10000; ++i)
      x = 1.0 - std::exp(-c * x);
    EXPECT_NEAR(cooper_frieze_phi(c), c * x * (2 - x) / (4 * (c * x - std::log(c))), 1e-9);
  }
  EXPECT_THROW(cooper_frieze_phi(1.0), std::domain_error);
}

TEST(EdgeAddition, PathOfThreePlusChord) {
  const auto row = edge_addition_row(path_graph(3), {{0, 2}}, true, 0, 1);
  EXPECT_NEAR(row.t_before, 5.0, 1e-12);
  EXPECT_NEAR(row.t_after, 3.0, 1e-12);
  EXPECT_NEAR(row.ratio, 0.6, 1e-12);
  EXPECT_TRUE(row.within_bound);
}

TEST(EdgeAddition, StarWithLoopAtCenter) {
  const auto row = edge_addition_row(star_graph(3), {{0, 0}}, true, 0, 1);
  EXPECT_LE(row.ratio, 4.0);
  EXPECT_GT(row.ratio, 1.0);
}

TEST(EdgeAddition, BoundFormula) {
  EXPECT_EQ(edge_addition_bound(1, 7), 4.0);
  EXPECT_NEAR(edge_addition_bound(2, 8), 5.0 + 1.0, 1e-15);
  EXPECT_NEAR(edge_addition_bound(3, 9), 7.0 + 2.0, 1e-15);
}

TEST(EdgeAddition, ExactModeHasNoViolations) {
  for (std::size_t k : {1u, 2u, 3u}) {
    EdgeAdditionOptions o;
    o.k_edges = k;
    o.instances = 30;
    o.max_vertices = 8;
    o.master_seed = 11 + k;
    const auto rep = run_edge_addition(o);
    EXPECT_EQ(rep.violations, 0u) << "k = " << k;
    EXPECT_EQ(rep.rows.size(), 30u);
    for (const auto& r : rep.rows)
      EXPECT_EQ(r.added.size(), k);
  }
}

TEST(EdgeAddition, ExactModeSizeLimit) {
  EdgeAdditionOptions o;
  o.max_vertices = 13;
  EXPECT_THROW(run_edge_addition(o), ContractViolation);
}

TEST(EdgeAddition, MonteCarloModeReportsErrors) {
  EdgeAdditionOptions o;
  o.exact = false;
  o.instances = 3;
  o.max_vertices = 8;
  o.trials = 300;
  const auto rep = run_edge_addition(o);
  EXPECT_EQ(rep.mode, "monte_carlo");
  bool any_noise = false;
  for (const auto& r : rep.rows) {
    EXPECT_GE(r.se_before, 0.0);
    any_noise = any_noise || r.se_before > 0.0;
  }
  EXPECT_TRUE(any_noise);
}

TEST(Scaling, TinyTreeCoverIsOneStep) {
  const auto cell = detail::measure_cell(path_graph(2), 50, 1);
  EXPECT_EQ(cell.cover_mean, 1.0);
  EXPECT_TRUE(cell.sandwich_ok);
}

TEST(Scaling, GridNeedsThreePoints) {
  SweepOptions o;
  o.grid = {16, 32};
  EXPECT_THROW(run_gw_scaling(o), ContractViolation);
  EvolutionOptions e;
  e.grid = {100, 200};
  EXPECT_THROW(run_evolution(e), ContractViolation);
}

TEST(Scaling, GwSweepDeterministicAcrossThreads) {
  SweepOptions o;
  o.grid = {16, 32, 64};
  o.seeds = 4;
  o.trials = 20;
  o.master_seed = 5;
  o.threads = 1;
  const auto a = json(run_gw_scaling(o)).dump();
  o.threads = 4;
  const auto b = json(run_gw_scaling(o)).dump();
  EXPECT_EQ(a, b);
}

TEST(Scaling, GwSweepRowsSatisfySandwich) {
  SweepOptions o;
  o.grid = {32, 64, 128};
  o.seeds = 5;
  o.trials = 40;
  const auto rep = run_gw_scaling(o);
  EXPECT_EQ(rep.regime, "gw_tree");
  EXPECT_EQ(rep.sandwich_violations, 0u);
  ASSERT_EQ(rep.rows.size(), 3u);
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.cells.size(), 5u);
    EXPECT_LE(row.median_kklv_lower, row.median_upper_theorem);
  }
  EXPECT_GT(rep.fitted_exponent, 1.0);
  EXPECT_LT(rep.fitted_exponent, 2.0);
}

TEST(Scaling, SupercriticalRowsCarryReferenceConstant) {
  EvolutionOptions o;
  o.regime = Regime::c;
  o.grid = {500, 1000, 2000};
  o.seeds = 2;
  o.trials = 10;
  const auto rep = run_evolution(o);
  for (const auto& row : rep.rows) {
    ASSERT_TRUE(row.cooper_frieze_reference.has_value());
    EXPECT_GT(*row.cooper_frieze_reference, 0.0);
    const double eps = std::pow(double(row.size_param), -0.25);
    const double n = double(row.size_param);
    EXPECT_NEAR(row.predicted_law, n * std::pow(std::log(eps * eps * eps * n), 2), 1e-6 * row.predicted_law);
  }
}

TEST(Reports, BoundJsonHasExactFieldSet) {
  const ResistanceOracle o(cycle_graph(6));
  const json j = compute_bounds(o);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items())
    keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"R", "R_provenance", "kklv_lower", "levels", "matthews_lower", "psi",
                                            "upper_clean", "upper_theorem"}));
  for (const auto& lvl : j["levels"]) {
    std::vector<std::string> lk;
    for (const auto& [k, v] : lvl.items())
      lk.push_back(k);
    EXPECT_EQ(lk, (std::vector<std::string>{"alpha", "i", "radius", "size"}));
  }
}

TEST(Reports, WalkEstimateJson) {
  SimulationRequest req;
  req.trials = 10;
  req.master_seed = 3;
  const json j = simulate(path_graph(3), req);
  for (const char* k : {"quantity", "start_policy", "mean", "std_err", "trials", "seed"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["quantity"], "cover");
}
