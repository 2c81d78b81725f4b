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

// Negative log-likelihood of 1-bit observations, its entrywise derivatives,
// and the log-barrier objective in both the matrix and factored forms.

#ifndef ONEBIT_OBJECTIVE_HPP_
#define ONEBIT_OBJECTIVE_HPP_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "onebit/links.hpp"
#include "onebit/observe.hpp"

namespace onebit {

// M = U V^T with U m-by-k and V n-by-k.
struct FactorPair {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;

  int k() const { return static_cast<int>(u.cols()); }
  Eigen::MatrixXd product() const { return u * v.transpose(); }

  friend bool operator==(const FactorPair& a, const FactorPair& b) {
    return a.u == b.u && a.v == b.v;
  }
};

struct ObjectiveValue {
  double nll = 0.0;
  double barrier = 0.0;  // -sum over all (i, j) of log(1 - (M_ij / alpha)^2)
  double total = 0.0;    // nll + lambda * barrier
  double lambda = 0.0;
};

// -sum over Omega of log f(Y_ij M_ij).
double nll(const BinaryObservations& obs, const LinkModel& link,
           const Eigen::MatrixXd& m_hat);

// dF/dM, zero off the mask.
Eigen::MatrixXd nll_grad(const BinaryObservations& obs, const LinkModel& link,
                         const Eigen::MatrixXd& m_hat);

// d^2F/dM_ij^2, zero off the mask. The Hessian in vec(M) is diagonal, so this
// matrix is all of it.
Eigen::MatrixXd nll_hess_diag(const BinaryObservations& obs,
                              const LinkModel& link,
                              const Eigen::MatrixXd& m_hat);

// Throws InfeasiblePoint if any |M_ij| >= alpha.
ObjectiveValue barrier_objective(const BinaryObservations& obs,
                                 const LinkModel& link,
                                 const Eigen::MatrixXd& m_hat, double alpha,
                                 double lambda);

struct FactoredGradient {
  ObjectiveValue value;
  Eigen::MatrixXd grad_u;  // W V
  Eigen::MatrixXd grad_v;  // W^T U
};

// Throws InfeasiblePoint if U V^T leaves the open box.
FactoredGradient factored_objective_and_grad(const BinaryObservations& obs,
                                             const LinkModel& link,
                                             const FactorPair& fp, double alpha,
                                             double lambda);

// Reusable evaluator for one (observations, link, alpha) problem. Keeps the
// mask as linear indices and owns scratch matrices, so a single instance must
// not be shared between threads.
class BarrierObjective {
 public:
  BarrierObjective(const BinaryObservations& obs, const LinkModel& link,
                   double alpha);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double alpha() const { return alpha_; }
  const LinkModel& link() const { return link_; }

  // Objective at M = U V^T, or nullopt when M is not strictly inside the box.
  std::optional<ObjectiveValue> value(const FactorPair& fp, double lambda);
  std::optional<ObjectiveValue> value_at(const Eigen::MatrixXd& m,
                                         double lambda) const;

  // Objective and factor gradients; fp must be strictly feasible.
  ObjectiveValue value_and_grad(const FactorPair& fp, double lambda,
                                Eigen::MatrixXd& grad_u,
                                Eigen::MatrixXd& grad_v);

  double nll_at(const Eigen::MatrixXd& m) const;

 private:
  std::optional<double> barrier_at(const Eigen::MatrixXd& m) const;

  LinkModel link_;
  double alpha_;
  int rows_;
  int cols_;
  std::vector<Eigen::Index> index_;  // column-major linear index of each entry
  std::vector<double> sign_;         // observation as +-1.0
  Eigen::MatrixXd m_;
  Eigen::MatrixXd w_;
};

}  // namespace onebit

#endif  // ONEBIT_OBJECTIVE_HPP_
