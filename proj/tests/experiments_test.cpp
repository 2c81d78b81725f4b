// Copyright 2026 The onebit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "onebit/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "onebit/error.hpp"
#include "onebit/movielens.hpp"

namespace onebit {
namespace {

ExperimentSettings quick_settings() {
  ExperimentSettings s;
  s.repeats = 3;
  s.seed = 12;
  s.reproducible = true;
  s.solver.lambda_halvings = 4;
  s.solver.max_iters_per_lambda = 40;
  s.solver.cv_folds = 2;
  return s;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

TEST(SynthTest, CountingContract) {
  const std::vector<SynthPoint> points = {{50, 2, 0.4}, {50, 2, 0.8}};
  const ExperimentSettings s = quick_settings();
  const std::vector<RunRow> rows = run_synth(points, s);
  ASSERT_EQ(rows.size(), 6u);
  const std::vector<AggregateRow> agg = aggregate(points, rows);
  ASSERT_EQ(agg.size(), 2u);

  // Mean and standard error against a direct computation.
  for (const AggregateRow& a : agg) {
    std::vector<double> v;
    for (const RunRow& row : rows)
      if (row.point == a.point) v.push_back(*row.relative_mse);
    ASSERT_EQ(v.size(), 3u);
    const double mu = (v[0] + v[1] + v[2]) / 3;
    const double var =
        ((v[0] - mu) * (v[0] - mu) + (v[1] - mu) * (v[1] - mu) + (v[2] - mu) * (v[2] - mu)) / 2;
    EXPECT_NEAR(a.mean_relative_mse, mu, 1e-15);
    EXPECT_NEAR(a.stderr_relative_mse, std::sqrt(var / 3), 1e-15);
    EXPECT_EQ(a.repeats, 3);
    EXPECT_DOUBLE_EQ(a.inv_n, 1.0 / 50);
  }

  std::ostringstream csv;
  write_run_csv(csv, rows);
  const auto lines = lines_of(csv.str());
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], kRunCsvColumns);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = fields_of(lines[i]);
    ASSERT_EQ(f.size(), 11u) << lines[i];
    if (i > 1) {
      EXPECT_LT(fields_of(lines[i - 1])[0], f[0]);
    }
    EXPECT_EQ(f[6], "probit");
    EXPECT_EQ(f[10], "0");  // reproducible mode
    const double acc = std::stod(f[9]);
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
}

TEST(SynthTest, InfeasiblePointsAreSkipped) {
  ExperimentSettings s = quick_settings();
  s.repeats = 1;
  std::vector<std::string> skipped;
  const std::vector<RunRow> rows =
      run_synth({{6, 8, 0.5}, {10, 1, 0.9}, {7, 1, 0.3, 0.3, SamplingKind::kBlock}}, s,
                &skipped);
  EXPECT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].point, 1);
  EXPECT_EQ(skipped.size(), 2u);
  EXPECT_THROW(run_synth_once({6, 8, 0.5}, 0, 0, s), InvalidArgument);
}

TEST(SynthTest, ReproducibleOutputIsIdentical) {
  const std::vector<SynthPoint> points = {{20, 1, 0.5}};
  ExperimentSettings s = quick_settings();
  s.repeats = 2;
  auto render = [&](int threads) {
    s.threads = threads;
    std::ostringstream out;
    write_header(out, "synth", {{"seed", "12"}, {"repeats", "2"}});
    write_run_csv(out, run_synth(points, s));
    return out.str();
  };
  const std::string a = render(1);
  EXPECT_EQ(a, render(1));
  EXPECT_EQ(a, render(2));
  EXPECT_EQ(a.rfind("# onebit ", 0), 0u);
  EXPECT_NE(a.find("# command=synth\n"), std::string::npos);
  EXPECT_NE(a.find("# seed=12\n"), std::string::npos);
}

TEST(SynthTest, CommonRandomNumbersAcrossPoints) {
  // Random streams depend on the repeat, not on the grid index.
  ExperimentSettings s = quick_settings();
  s.repeats = 1;
  const RunRow a = run_synth_once({30, 2, 0.3}, 0, 0, s);
  const RunRow b = run_synth_once({30, 2, 0.3}, 5, 0, s);
  EXPECT_EQ(a.relative_mse, b.relative_mse);
  EXPECT_NE(a.run_id, b.run_id);
}

TEST(SlopeTest, RecoversPowerLaw) {
  const std::vector<double> n = {50, 100, 200, 400};
  std::vector<double> y;
  for (double x : n) y.push_back(3.7 * std::pow(x, -1.3));
  EXPECT_NEAR(log_log_slope(n, y), -1.3, 1e-12);
  EXPECT_THROW(log_log_slope({1.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(log_log_slope({1.0, 2.0}, {1.0, -1.0}), InvalidArgument);
  EXPECT_THROW(log_log_slope({2.0, 2.0}, {1.0, 3.0}), InvalidArgument);
}

TEST(AggregateTest, AnchoredReferencePassesThroughFirstPoint) {
  const std::vector<SynthPoint> points = {{50, 2, 0.4}, {100, 2, 0.4}};
  std::vector<RunRow> rows(4);
  const double mse[] = {0.4, 0.6, 0.2, 0.3};
  for (int i = 0; i < 4; ++i) {
    rows[i].point = i / 2;
    rows[i].relative_mse = mse[i];
  }
  const auto agg = aggregate(points, rows);
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_DOUBLE_EQ(agg[0].anchored_ref, 0.5);
  EXPECT_DOUBLE_EQ(agg[1].anchored_ref, 0.25);
  std::ostringstream out;
  write_aggregate_csv(out, agg);
  EXPECT_EQ(lines_of(out.str()).size(), 3u);
}

TEST(BoundTableTest, FivePointGridDelegatesBitForBit) {
  BoundSettings s;
  s.n_grid = {200};
  s.seed = 3;
  const std::vector<BoundRow> rows = run_bounds(s);
  ASSERT_EQ(rows.size(), 5u);
  for (const BoundRow& row : rows) {
    ASSERT_EQ(row.status, "ok");
    ASSERT_TRUE(row.theorem);
    BoundInputs in{row.m,      row.n,      row.r,          row.alpha,
                   row.constants, row.sigma1, row.sigma2, row.omega_size, 3.0};
    const TheoremBound t = theorem_bound(in);
    EXPECT_EQ(row.theorem->spectral_form, t.spectral_form);
    EXPECT_EQ(row.theorem->omega_form, t.omega_form);
    EXPECT_EQ(row.corollary, corollary_rate(in, row.p, 1.0));
    EXPECT_EQ(row.rates.ours_rate, comparison_rates(row.n, row.r, row.p).ours_rate);
    EXPECT_EQ(row.omega_size, std::lround(row.p * 200) * 200);
  }
  std::ostringstream out;
  write_bound_csv(out, rows);
  EXPECT_EQ(lines_of(out.str()).size(), 6u);
}

TEST(BoundTableTest, CorollarySlopeInNIsMinusHalf) {
  BoundSettings s;
  s.n_grid = {50, 100, 200, 400, 800};
  s.p_grid = {0.5};
  const std::vector<BoundRow> rows = run_bounds(s);
  std::vector<double> n, rate;
  for (const BoundRow& row : rows) {
    n.push_back(row.n);
    rate.push_back(row.corollary);
  }
  EXPECT_NEAR(log_log_slope(n, rate), -0.5, 1e-6);
}

TEST(BoundTableTest, UndefinedCurvatureIsMarkedPerRow) {
  BoundSettings s;
  s.n_grid = {40};
  s.p_grid = {0.5, 1.0};
  s.link = {LinkKind::kProbit, 0.01};
  const std::vector<BoundRow> rows = run_bounds(s);
  ASSERT_EQ(rows.size(), 2u);
  for (const BoundRow& row : rows) {
    EXPECT_EQ(row.status, "error:gamma_alpha<=0");
    EXPECT_FALSE(row.theorem);
  }
  std::ostringstream out;
  write_bound_csv(out, rows);
  EXPECT_NE(out.str().find("error:gamma_alpha<=0"), std::string::npos);
}

bool has_prefix(const std::vector<std::string>& lines, const std::string& prefix) {
  for (const auto& l : lines)
    if (l.rfind(prefix, 0) == 0) return true;
  return false;
}

TEST(SpectralVerdictTest, RegularMaskPassesA1) {
  const auto v = spectral_verdicts(spectral_report(gen_regular(60, 60, 12, 4)));
  EXPECT_TRUE(has_prefix(v, "(A1): PASS (residual ≤ 1e-6)"));
  EXPECT_TRUE(has_prefix(v, "(A2): "));
}

TEST(SpectralVerdictTest, AllOnesReportsZeroSigma2) {
  std::vector<Entry> all;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 7; ++j) all.push_back({i, j});
  std::ostringstream out;
  write_spectral_report(out, spectral_report(Mask(9, 7, all)));
  EXPECT_NE(out.str().find("sigma2=0\n"), std::string::npos);
}

TEST(SpectralVerdictTest, BernoulliMaskHasVerdictLines) {
  const auto v = spectral_verdicts(spectral_report(gen_bernoulli(200, 200, 0.4, 5)));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_TRUE(has_prefix(v, "(A1): "));
  EXPECT_TRUE(has_prefix(v, "(A2): "));
}

TEST(FormatTest, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3.0), "3");
  for (double x : {1.0 / 3, 2.5e-300, 12345.678901234567})
    EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(GnuplotTest, Fig3UsesLogAxes) {
  EXPECT_NE(gnuplot_script("fig3", "aggregate.csv").find("logscale"), std::string::npos);
  EXPECT_EQ(gnuplot_script("fig2", "aggregate.csv").find("logscale"), std::string::npos);
  EXPECT_NE(gnuplot_script("fig2", "aggregate.csv").find("aggregate.csv"),
            std::string::npos);
}

TEST(MovielensRunTest, GridRowsAndSummary) {
  const BinaryObservations all = binarize(synthesize_ratings(40, 50, 800, 2, 3));
  MovielensSettings s;
  s.train_fractions = {0.8, 0.3};
  s.realizations = 2;
  s.sigmas = {0.5, 1.0};
  s.ranks = {1};
  s.solver.lambda_halvings = 3;
  s.solver.max_iters_per_lambda = 20;
  s.solver.cv_folds = 2;
  s.reproducible = true;
  const std::vector<RunRow> rows = run_movielens(all, s);
  ASSERT_EQ(rows.size(), 8u);
  for (const RunRow& row : rows) {
    EXPECT_EQ(row.link, LinkKind::kLogit);
    EXPECT_FALSE(row.relative_mse);
    EXPECT_EQ(row.wall_time_s, 0.0);
  }
  const auto summary = summarize_movielens(rows, s);
  ASSERT_EQ(summary.size(), 2u);
  for (const MovielensSummary& m : summary) {
    EXPECT_EQ(m.realizations, 2);
    // Oracle: best mean over the sigma cells of this fraction.
    double best = -1.0;
    for (double sigma : s.sigmas) {
      double sum = 0.0;
      for (const RunRow& row : rows)
        if (row.p == m.train_fraction && row.sigma == sigma) sum += row.sign_accuracy;
      best = std::max(best, sum / 2);
    }
    EXPECT_DOUBLE_EQ(m.mean_accuracy, best);
  }
  std::ostringstream out;
  write_run_csv(out, rows);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_EQ(fields_of(lines[1])[8], "");  // no ground truth
}

}  // namespace
}  // namespace onebit
