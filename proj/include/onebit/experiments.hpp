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

// Experiment drivers shared by the command-line tool and the acceptance
// suite: synthetic sweeps, MovieLens grid search and bound tables, plus their
// CSV and gnuplot emitters.

#ifndef ONEBIT_EXPERIMENTS_HPP_
#define ONEBIT_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "onebit/bounds.hpp"
#include "onebit/links.hpp"
#include "onebit/observe.hpp"
#include "onebit/sampling.hpp"
#include "onebit/solver.hpp"

namespace onebit {

enum class SamplingKind { kBernoulli, kBlock, kRegular };

std::string to_string(SamplingKind kind);
SamplingKind parse_sampling_kind(const std::string& name);

// One grid point of a synthetic sweep; square n-by-n matrices.
struct SynthPoint {
  int n = 100;
  int r = 5;
  double p = 0.5;
  double q = 0.0;  // off-diagonal probability for the block model
  SamplingKind sampling = SamplingKind::kBernoulli;
};

struct ExperimentSettings {
  LinkModel link{LinkKind::kProbit, 0.18};
  double alpha = 1.0;
  SolverConfig solver;  // rank_r and alpha are overwritten per run
  int repeats = 20;
  std::uint64_t seed = 0;
  int threads = 1;
  // Zeroes wall-clock columns so reruns produce identical files.
  bool reproducible = false;
};

// Fixed per-run CSV schema.
struct RunRow {
  std::string run_id;
  int m = 0;
  int n = 0;
  int r = 0;
  double p = 0.0;
  double sigma = 0.0;
  LinkKind link = LinkKind::kProbit;
  double lambda_selected = 0.0;
  std::optional<double> relative_mse;
  double sign_accuracy = 0.0;
  double wall_time_s = 0.0;
  // Not part of the CSV; used for aggregation.
  int point = 0;
  int repeat = 0;
  double spectral_gap = 0.0;  // sigma1 / sigma2 of the mask
  Certificate certificate = Certificate::kFullRankNoCertificate;
};

inline constexpr const char* kRunCsvColumns =
    "run_id,m,n,r,p,sigma,link,lambda_selected,relative_mse,sign_accuracy,"
    "wall_time_s";

// Seeds: the ground truth, mask uniforms, observations and solver of repeat
// k are independent sub-streams of the master seed that do not depend on the
// grid point, so points within one repeat share random numbers.
RunRow run_synth_once(const SynthPoint& point, int point_index, int repeat,
                      const ExperimentSettings& settings);

// All points times all repeats; infeasible points (r > n, odd n for the
// block model, ...) are skipped and reported through `skipped`.
std::vector<RunRow> run_synth(const std::vector<SynthPoint>& points,
                              const ExperimentSettings& settings,
                              std::vector<std::string>* skipped = nullptr);

struct AggregateRow {
  int point = 0;
  SynthPoint params;
  int repeats = 0;
  double mean_relative_mse = 0.0;
  double stderr_relative_mse = 0.0;
  double mean_sign_accuracy = 0.0;
  double mean_spectral_gap = 0.0;
  double inv_n = 0.0;       // 1/n reference line
  double anchored_ref = 0.0;  // c/n through the first point's mean
};

std::vector<AggregateRow> aggregate(const std::vector<SynthPoint>& points,
                                    const std::vector<RunRow>& rows);

// Least-squares slope of log(mean relative MSE) against log(n).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MovielensSettings {
  std::vector<double> train_fractions{0.95, 0.10, 0.05};
  int realizations = 20;
  std::vector<double> sigmas{0.1, 0.25, 0.5, 1.0, 2.0};
  std::vector<int> ranks{1, 2, 3, 5, 10};
  double alpha = 1.0;
  SolverConfig solver;
  std::uint64_t seed = 0;
  int threads = 1;
  bool reproducible = false;
};

// One row per (fraction, realization, sigma, rank); logit link.
std::vector<RunRow> run_movielens(const BinaryObservations& all,
                                  const MovielensSettings& settings);

struct MovielensSummary {
  double train_fraction;
  double sigma;  // grid point with the best mean accuracy
  int r;
  double mean_accuracy;
  double std_accuracy;
  int realizations;
};

std::vector<MovielensSummary> summarize_movielens(
    const std::vector<RunRow>& rows, const MovielensSettings& settings);

struct BoundSettings {
  std::vector<int> n_grid{200};
  std::vector<double> p_grid{0.2, 0.4, 0.6, 0.8, 1.0};
  int m = 0;  // 0: square
  int r = 5;
  double alpha = 1.0;
  LinkModel link{LinkKind::kProbit, 0.18};
  double c_spectral = 3.0;
  SamplingKind sampling = SamplingKind::kRegular;
  std::uint64_t seed = 0;
};

struct BoundRow {
  int m = 0;
  int n = 0;
  int r = 0;
  double p = 0.0;  // |Omega| / (m n) of the realized mask
  double alpha = 0.0;
  LinkModel link;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  long long omega_size = 0;
  LinkConstants constants{};
  std::optional<TheoremBound> theorem;  // empty when gamma_alpha <= 0
  double corollary = 0.0;
  ComparisonRates rates{};
  std::string status = "ok";
};

std::vector<BoundRow> run_bounds(const BoundSettings& settings);

// Advisory (A1)/(A2) verdict lines; warnings above a1_residual 0.05 or
// a2_ratio 5 never make the report fail.
inline constexpr double kA1WarnResidual = 0.05;
inline constexpr double kA2WarnRatio = 5.0;
std::vector<std::string> spectral_verdicts(const SpectralReport& report);
void write_spectral_report(std::ostream& out, const SpectralReport& report);

// Comment header: tool version, every parameter and the master seed.
void write_header(std::ostream& out, const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& params);

void write_run_csv(std::ostream& out, const std::vector<RunRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_movielens_summary_csv(std::ostream& out,
                                 const std::vector<MovielensSummary>& rows);
void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows);

// gnuplot script plotting an aggregate CSV; fig3 uses log-log axes and the
// anchored 1/n line.
std::string gnuplot_script(const std::string& mode, const std::string& data_file);

// Shortest round-trip decimal used for all numeric CSV fields.
std::string format_number(double x);

}  // namespace onebit

#endif  // ONEBIT_EXPERIMENTS_HPP_
