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

// Log-barrier central-path solver over the factorization M = U V^T.
//
// For each lambda in lambda0, lambda0/2, ..., the factored barrier objective
// is minimized by gradient descent with backtracking (Armijo) line search,
// warm-started from the previous lambda. The lambda at which to stop is
// chosen by K-fold cross-validation of the held-out negative log-likelihood.

#ifndef ONEBIT_SOLVER_HPP_
#define ONEBIT_SOLVER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "onebit/links.hpp"
#include "onebit/objective.hpp"
#include "onebit/observe.hpp"

namespace onebit {

struct SolverConfig {
  int rank_r = 1;
  int k = 0;  // factor width; 0 selects rank_r + 1
  double alpha = 1.0;
  // Unset selects max(1, F(M0) / (m n)) at the initial product M0.
  std::optional<double> lambda0;
  int lambda_halvings = 12;
  int max_iters_per_lambda = 500;
  double grad_tol = 1e-5;
  double armijo_c = 1e-4;
  double backtrack_beta = 0.5;
  int cv_folds = 5;  // 1 disables cross-validation (stop at the last lambda)
  std::uint64_t seed = 0;
  int threads = 1;  // concurrent CV folds

  int factor_width() const { return k > 0 ? k : rank_r + 1; }
};

// Throws InvalidArgument on out-of-range fields.
void validate(const SolverConfig& cfg);

// Smallest step the line search tries before declaring a stall.
inline constexpr double kMinStep = 1e-20;
// Initial product scale: ||U V^T||_inf = kInitFraction * alpha.
inline constexpr double kInitFraction = 0.95;

// Standard normal entries, then one common scale on both factors so that
// ||U V^T||_inf = 0.95 alpha.
FactorPair init_factors(int m, int n, const SolverConfig& cfg);

struct IterateEvent {
  double lambda;
  int iteration;  // 1-based within the current lambda
  double step;
  ObjectiveValue before;
  ObjectiveValue after;
  double max_abs_entry;  // ||U V^T||_inf of the accepted iterate
};
using IterateObserver = std::function<void(const IterateEvent&)>;

struct InnerResult {
  FactorPair factors;
  ObjectiveValue value;
  int iterations = 0;
  double grad_norm = 0.0;
  double last_step = 1.0;
  bool converged = false;
  // Line search fell below kMinStep; factors hold the last accepted iterate.
  bool stalled = false;
};

InnerResult minimize_at_lambda(const BinaryObservations& obs,
                               const LinkModel& link, const FactorPair& fp0,
                               double alpha, double lambda,
                               const SolverConfig& cfg,
                               const IterateObserver& observer = {});

// Same, reusing an evaluator and starting the line search from
// min(1, 2 * previous_step).
InnerResult minimize_at_lambda(BarrierObjective& objective,
                               const FactorPair& fp0, double lambda,
                               const SolverConfig& cfg, double previous_step,
                               const IterateObserver& observer = {});

enum class Certificate { kRankDeficientGlobalOpt, kFullRankNoCertificate };

std::string to_string(Certificate c);

// Relative singular-value threshold for numerical rank deficiency.
inline constexpr double kRankDeficiencyTol = 1e-6;

// Rank deficiency of either factor certifies a global optimum of the
// rank-constrained barrier problem. Full rank certifies nothing.
Certificate certify(const FactorPair& fp);

struct CvPoint {
  double lambda;
  double holdout_nll;  // mean per-entry held-out nll over usable folds; NaN without CV
};

struct FitReport {
  Eigen::MatrixXd m_hat;
  FactorPair factors;
  double lambda0 = 0.0;
  double lambda_selected = 0.0;
  std::vector<CvPoint> cv_errors;  // one per lambda in the schedule
  std::vector<int> iterations;     // final refit, one per lambda visited
  int folds_used = 0;
  int stalls = 0;
  Certificate certificate = Certificate::kFullRankNoCertificate;
  double final_grad_norm = 0.0;
};

// lambda0 / 2^t for t = 0..halvings.
std::vector<double> lambda_schedule(double lambda0, int halvings);

FitReport fit(const BinaryObservations& obs, const LinkModel& link,
              const SolverConfig& cfg, const IterateObserver& observer = {});

// key=value sections followed by the dense estimate.
void write_fit_report(std::ostream& out, const FitReport& report);
void save_fit_report(const std::filesystem::path& path, const FitReport& report);

// "m n" header then row-major values with 17 significant digits.
void write_dense_matrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_dense_matrix(std::istream& in);

}  // namespace onebit

#endif  // ONEBIT_SOLVER_HPP_
