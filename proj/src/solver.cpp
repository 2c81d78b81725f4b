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

#include "onebit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "onebit/error.hpp"
#include "onebit/parallel.hpp"
#include "onebit/rng.hpp"

namespace onebit {
namespace {

bool in_open_unit(double x) { return std::isfinite(x) && x > 0.0 && x < 1.0; }

// Largest singular values of U and V and the k-th, with missing ones (k
// larger than the row count) taken as zero.
struct FactorSpectrum {
  double top = 0.0;
  double kth = 0.0;
};

FactorSpectrum factor_spectrum(const Eigen::MatrixXd& f, int k) {
  if (f.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  const auto& s = svd.singularValues();
  return {s(0), s.size() >= k ? s(k - 1) : 0.0};
}

struct PathResult {
  FactorPair factors;
  std::vector<int> iterations;
  std::vector<double> holdout;  // per-entry holdout nll per lambda
  int stalls = 0;
  double grad_norm = 0.0;
};

// Runs the central path over `lambdas`, optionally scoring each solution on
// held-out observations.
PathResult run_path(const BinaryObservations& train,
                    const BinaryObservations* holdout, const LinkModel& link,
                    const SolverConfig& cfg, const FactorPair& start,
                    const std::vector<double>& lambdas,
                    const IterateObserver& observer) {
  BarrierObjective objective(train, link, cfg.alpha);
  std::optional<BarrierObjective> scorer;
  if (holdout != nullptr) scorer.emplace(*holdout, link, cfg.alpha);
  PathResult out;
  out.factors = start;
  double step = 1.0;
  for (double lambda : lambdas) {
    InnerResult inner =
        minimize_at_lambda(objective, out.factors, lambda, cfg, step, observer);
    out.factors = std::move(inner.factors);
    out.iterations.push_back(inner.iterations);
    out.stalls += inner.stalled ? 1 : 0;
    out.grad_norm = inner.grad_norm;
    step = inner.last_step;
    if (scorer) {
      out.holdout.push_back(scorer->nll_at(out.factors.product()) /
                            static_cast<double>(holdout->size()));
    }
  }
  return out;
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (cfg.rank_r <= 0) throw InvalidArgument("rank_r must be positive");
  if (cfg.k < 0) throw InvalidArgument("k must be positive (or 0 for r + 1)");
  if (!std::isfinite(cfg.alpha) || cfg.alpha <= 0.0)
    throw InvalidArgument("alpha must be finite and positive");
  if (cfg.lambda0 && (!std::isfinite(*cfg.lambda0) || *cfg.lambda0 <= 0.0))
    throw InvalidArgument("lambda0 must be finite and positive");
  if (cfg.lambda_halvings < 0)
    throw InvalidArgument("lambda_halvings must be nonnegative");
  if (cfg.max_iters_per_lambda <= 0)
    throw InvalidArgument("max_iters_per_lambda must be positive");
  if (!std::isfinite(cfg.grad_tol) || cfg.grad_tol <= 0.0)
    throw InvalidArgument("grad_tol must be positive");
  if (!in_open_unit(cfg.armijo_c)) throw InvalidArgument("armijo_c must lie in (0, 1)");
  if (!in_open_unit(cfg.backtrack_beta))
    throw InvalidArgument("backtrack_beta must lie in (0, 1)");
  if (cfg.cv_folds <= 0) throw InvalidArgument("cv_folds must be positive");
  if (cfg.threads <= 0) throw InvalidArgument("threads must be positive");
}

FactorPair init_factors(int m, int n, const SolverConfig& cfg) {
  validate(cfg);
  if (m <= 0 || n <= 0) throw InvalidArgument("sizes must be positive");
  const int k = cfg.factor_width();
  Rng rng = make_rng(substream(cfg.seed, "init"));
  FactorPair fp{Eigen::MatrixXd(m, k), Eigen::MatrixXd(n, k)};
  for (Eigen::Index i = 0; i < fp.u.size(); ++i) fp.u.data()[i] = standard_normal(rng);
  for (Eigen::Index i = 0; i < fp.v.size(); ++i) fp.v.data()[i] = standard_normal(rng);
  const double peak = fp.product().cwiseAbs().maxCoeff();
  const double scale = std::sqrt(kInitFraction * cfg.alpha / peak);
  fp.u *= scale;
  fp.v *= scale;
  return fp;
}

InnerResult minimize_at_lambda(const BinaryObservations& obs,
                               const LinkModel& link, const FactorPair& fp0,
                               double alpha, double lambda,
                               const SolverConfig& cfg,
                               const IterateObserver& observer) {
  SolverConfig local = cfg;
  local.alpha = alpha;
  validate(local);
  if (fp0.u.rows() != obs.rows() || fp0.v.rows() != obs.cols() ||
      fp0.u.cols() != fp0.v.cols())
    throw InvalidArgument("factor shapes do not match observations");
  BarrierObjective objective(obs, link, alpha);
  return minimize_at_lambda(objective, fp0, lambda, local, 0.5, observer);
}

InnerResult minimize_at_lambda(BarrierObjective& objective,
                               const FactorPair& fp0, double lambda,
                               const SolverConfig& cfg, double previous_step,
                               const IterateObserver& observer) {
  if (!objective.value(fp0, lambda))
    throw InfeasiblePoint("starting factors are not strictly feasible");

  InnerResult out;
  out.factors = fp0;
  out.last_step = previous_step;
  Eigen::MatrixXd grad_u, grad_v;
  FactorPair trial;
  ObjectiveValue current =
      objective.value_and_grad(out.factors, lambda, grad_u, grad_v);

  for (;;) {
    const double grad_sq = grad_u.squaredNorm() + grad_v.squaredNorm();
    out.grad_norm = std::sqrt(grad_sq);
    if (out.grad_norm <= cfg.grad_tol * std::max(1.0, std::abs(current.total))) {
      out.converged = true;
      break;
    }
    if (out.iterations >= cfg.max_iters_per_lambda) break;

    double step = std::min(1.0, 2.0 * out.last_step);
    std::optional<ObjectiveValue> accepted;
    while (step >= kMinStep) {
      trial.u = out.factors.u - step * grad_u;
      trial.v = out.factors.v - step * grad_v;
      const auto value = objective.value(trial, lambda);
      if (value && value->total <= current.total - cfg.armijo_c * step * grad_sq) {
        accepted = value;
        break;
      }
      step *= cfg.backtrack_beta;
    }
    if (!accepted) {
      out.stalled = true;
      break;
    }

    ++out.iterations;
    out.last_step = step;
    std::swap(out.factors, trial);
    const ObjectiveValue before = current;
    current = objective.value_and_grad(out.factors, lambda, grad_u, grad_v);
    if (observer) {
      observer({lambda, out.iterations, step, before, current,
                out.factors.product().cwiseAbs().maxCoeff()});
    }
  }
  out.value = current;
  return out;
}

std::string to_string(Certificate c) {
  return c == Certificate::kRankDeficientGlobalOpt ? "RankDeficient_GlobalOpt"
                                                   : "FullRank_NoCertificate";
}

Certificate certify(const FactorPair& fp) {
  const int k = fp.k();
  if (k == 0) return Certificate::kRankDeficientGlobalOpt;
  const FactorSpectrum su = factor_spectrum(fp.u, k);
  const FactorSpectrum sv = factor_spectrum(fp.v, k);
  const double scale = std::max(su.top, sv.top);
  return std::min(su.kth, sv.kth) <= kRankDeficiencyTol * scale
             ? Certificate::kRankDeficientGlobalOpt
             : Certificate::kFullRankNoCertificate;
}

std::vector<double> lambda_schedule(double lambda0, int halvings) {
  std::vector<double> out;
  out.reserve(halvings + 1);
  double lambda = lambda0;
  for (int t = 0; t <= halvings; ++t, lambda *= 0.5) out.push_back(lambda);
  return out;
}

FitReport fit(const BinaryObservations& obs, const LinkModel& link,
              const SolverConfig& cfg, const IterateObserver& observer) {
  validate(cfg);
  validate(link);
  if (obs.empty()) throw InvalidArgument("fit needs at least one observation");
  const int m = obs.rows();
  const int n = obs.cols();
  const FactorPair start = init_factors(m, n, cfg);

  FitReport report;
  if (cfg.lambda0) {
    report.lambda0 = *cfg.lambda0;
  } else {
    const double f0 = BarrierObjective(obs, link, cfg.alpha).nll_at(start.product());
    report.lambda0 = std::max(1.0, f0 / (static_cast<double>(m) * n));
  }
  const std::vector<double> lambdas =
      lambda_schedule(report.lambda0, cfg.lambda_halvings);

  std::size_t selected = lambdas.size() - 1;
  report.cv_errors.reserve(lambdas.size());
  if (cfg.cv_folds >= 2) {
    // Seeded fold assignment: position perm[i] goes to fold i mod K.
    std::vector<std::size_t> perm(obs.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng = make_rng(substream(cfg.seed, "folds"));
    shuffle(perm, rng);
    const auto folds = static_cast<std::size_t>(cfg.cv_folds);
    std::vector<std::vector<std::size_t>> held(folds), kept(folds);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (std::size_t f = 0; f < folds; ++f)
        (i % folds == f ? held[f] : kept[f]).push_back(perm[i]);
    }

    std::vector<std::optional<PathResult>> results(folds);
    parallel_for(folds, cfg.threads, [&](std::size_t f) {
      if (held[f].empty() || kept[f].empty()) return;
      const BinaryObservations train = obs.subset(kept[f]);
      const BinaryObservations test = obs.subset(held[f]);
      results[f] = run_path(train, &test, link, cfg, start, lambdas, {});
    });

    std::vector<double> mean(lambdas.size(), 0.0);
    for (const auto& r : results) {
      if (!r) continue;
      ++report.folds_used;
      for (std::size_t t = 0; t < lambdas.size(); ++t) mean[t] += r->holdout[t];
    }
    if (report.folds_used == 0) {
      throw CvDegenerate(
          "every cross-validation fold has an empty training or holdout set; "
          "use fewer folds");
    }
    for (double& v : mean) v /= report.folds_used;
    selected = static_cast<std::size_t>(
        std::min_element(mean.begin(), mean.end()) - mean.begin());
    for (std::size_t t = 0; t < lambdas.size(); ++t)
      report.cv_errors.push_back({lambdas[t], mean[t]});
  } else {
    for (double lambda : lambdas)
      report.cv_errors.push_back({lambda, std::numeric_limits<double>::quiet_NaN()});
  }

  const std::vector<double> path(lambdas.begin(), lambdas.begin() + selected + 1);
  PathResult final_path = run_path(obs, nullptr, link, cfg, start, path, observer);
  report.lambda_selected = lambdas[selected];
  report.factors = std::move(final_path.factors);
  report.iterations = std::move(final_path.iterations);
  report.stalls = final_path.stalls;
  report.final_grad_norm = final_path.grad_norm;
  report.m_hat = report.factors.product();
  report.certificate = certify(report.factors);
  return report;
}

void write_dense_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  const auto old_precision = out.precision(17);
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

Eigen::MatrixXd read_dense_matrix(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw ParseError("dense matrix header must be \"m n\"", 1);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) throw ParseError("truncated dense matrix", i + 2);
    }
  }
  return m;
}

void write_fit_report(std::ostream& out, const FitReport& report) {
  const auto old_precision = out.precision(17);
  out << "[fit]\n"
      << "m=" << report.m_hat.rows() << '\n'
      << "n=" << report.m_hat.cols() << '\n'
      << "k=" << report.factors.k() << '\n'
      << "lambda0=" << report.lambda0 << '\n'
      << "lambda_selected=" << report.lambda_selected << '\n'
      << "folds_used=" << report.folds_used << '\n'
      << "cv_schedule=full_path_per_fold\n"
      << "certificate=" << to_string(report.certificate) << '\n'
      << "final_grad_norm=" << report.final_grad_norm << '\n'
      << "stalls=" << report.stalls << '\n';
  out << "[cv]\n";
  for (std::size_t t = 0; t < report.cv_errors.size(); ++t) {
    out << "lambda_" << t << '=' << report.cv_errors[t].lambda << '\n'
        << "holdout_nll_" << t << '=' << report.cv_errors[t].holdout_nll << '\n';
  }
  out << "[iterations]\n";
  for (std::size_t t = 0; t < report.iterations.size(); ++t)
    out << "iters_" << t << '=' << report.iterations[t] << '\n';
  out << "[matrix]\n";
  out.precision(old_precision);
  write_dense_matrix(out, report.m_hat);
}

void save_fit_report(const std::filesystem::path& path, const FitReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_fit_report(out, report);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace onebit
