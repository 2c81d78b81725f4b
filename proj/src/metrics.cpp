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

#include "onebit/metrics.hpp"

#include "onebit/error.hpp"

namespace onebit {

double relative_mse(const Eigen::MatrixXd& m_hat, const Eigen::MatrixXd& m_star) {
  if (m_hat.rows() != m_star.rows() || m_hat.cols() != m_star.cols())
    throw InvalidArgument("relative_mse: shapes differ");
  const double denom = m_star.squaredNorm();
  if (!(denom > 0.0)) throw InvalidArgument("relative_mse: zero ground truth");
  return (m_hat - m_star).squaredNorm() / denom;
}

double sign_accuracy(const Eigen::MatrixXd& m_hat, const BinaryObservations& test) {
  if (test.empty()) throw InvalidArgument("sign_accuracy: empty test set");
  if (m_hat.rows() != test.rows() || m_hat.cols() != test.cols())
    throw InvalidArgument("sign_accuracy: shapes differ");
  const auto entries = test.mask().entries();
  const auto values = test.values();
  long long correct = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const double x = m_hat(entries[k].row, entries[k].col);
    if ((x > 0.0 && values[k] > 0) || (x < 0.0 && values[k] < 0)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(entries.size());
}

}  // namespace onebit
