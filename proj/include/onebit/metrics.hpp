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

#ifndef ONEBIT_METRICS_HPP_
#define ONEBIT_METRICS_HPP_

#include <optional>

#include <Eigen/Dense>

#include "onebit/observe.hpp"

namespace onebit {

struct MetricReport {
  std::optional<double> relative_mse;  // present when ground truth is known
  double sign_accuracy = 0.0;
  long long n_test = 0;
};

// ||M_hat - M*||_F^2 / ||M*||_F^2.
double relative_mse(const Eigen::MatrixXd& m_hat, const Eigen::MatrixXd& m_star);

// Fraction of test entries where sign(M_hat_ij) equals Y_ij. A zero
// prediction is counted as wrong.
double sign_accuracy(const Eigen::MatrixXd& m_hat, const BinaryObservations& test);

}  // namespace onebit

#endif  // ONEBIT_METRICS_HPP_
