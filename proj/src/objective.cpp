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

#include "onebit/objective.hpp"

#include <cmath>

#include "onebit/error.hpp"

namespace onebit {
namespace {

void check_shape(const BinaryObservations& obs, const Eigen::MatrixXd& m) {
  if (m.rows() != obs.rows() || m.cols() != obs.cols())
    throw InvalidArgument("matrix shape does not match observations");
}

void check_alpha(double alpha, double lambda) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw InvalidArgument("alpha must be finite and positive");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw InvalidArgument("lambda must be finite and nonnegative");
}

// Applies fn(entry, loss terms at y*M_ij, y) over the mask.
template <typename Fn>
void for_each_observation(const BinaryObservations& obs, const LinkModel& link,
                          const Eigen::MatrixXd& m, Fn fn) {
  const auto entries = obs.mask().entries();
  const auto values = obs.values();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const double y = values[k];
    fn(entries[k], neg_log_cdf_terms(link, y * m(entries[k].row, entries[k].col)),
       y);
  }
}

// -sum log((1 - r)(1 + r)) over r = x / alpha for a feasible block. A
// feasible factor is at least about 1e-16, so a product of 16 of them stays
// far from underflow and one log per group replaces sixteen.
double barrier_sum(const double* x, Eigen::Index size, double inv_alpha) {
  constexpr Eigen::Index kGroup = 16;
  auto slack = [inv_alpha](double v) {
    const double r = v * inv_alpha;
    return (1.0 - r) * (1.0 + r);
  };
  double total = 0.0;
  Eigen::Index i = 0;
  for (; i + kGroup <= size; i += kGroup) {
    double p[4] = {1.0, 1.0, 1.0, 1.0};
    for (int j = 0; j < kGroup; j += 4) {
      p[0] *= slack(x[i + j]);
      p[1] *= slack(x[i + j + 1]);
      p[2] *= slack(x[i + j + 2]);
      p[3] *= slack(x[i + j + 3]);
    }
    total -= std::log((p[0] * p[1]) * (p[2] * p[3]));
  }
  for (; i < size; ++i) total -= std::log(slack(x[i]));
  return total;
}

}  // namespace

double nll(const BinaryObservations& obs, const LinkModel& link,
           const Eigen::MatrixXd& m_hat) {
  validate(link);
  check_shape(obs, m_hat);
  double total = 0.0;
  const auto entries = obs.mask().entries();
  const auto values = obs.values();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    total += neg_log_cdf(link, values[k] * m_hat(entries[k].row, entries[k].col));
  }
  return total;
}

Eigen::MatrixXd nll_grad(const BinaryObservations& obs, const LinkModel& link,
                         const Eigen::MatrixXd& m_hat) {
  validate(link);
  check_shape(obs, m_hat);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m_hat.rows(), m_hat.cols());
  for_each_observation(obs, link, m_hat,
                       [&](const Entry& e, const LossTerms& t, double y) {
                         g(e.row, e.col) = y * t.d1;
                       });
  return g;
}

Eigen::MatrixXd nll_hess_diag(const BinaryObservations& obs,
                              const LinkModel& link,
                              const Eigen::MatrixXd& m_hat) {
  validate(link);
  check_shape(obs, m_hat);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m_hat.rows(), m_hat.cols());
  for_each_observation(obs, link, m_hat,
                       [&](const Entry& e, const LossTerms& t, double) {
                         h(e.row, e.col) = t.d2;
                       });
  return h;
}

ObjectiveValue barrier_objective(const BinaryObservations& obs,
                                 const LinkModel& link,
                                 const Eigen::MatrixXd& m_hat, double alpha,
                                 double lambda) {
  check_alpha(alpha, lambda);
  check_shape(obs, m_hat);
  validate(link);
  auto value = BarrierObjective(obs, link, alpha).value_at(m_hat, lambda);
  if (!value) throw InfeasiblePoint("|M_ij| >= alpha for some entry");
  return *value;
}

FactoredGradient factored_objective_and_grad(const BinaryObservations& obs,
                                             const LinkModel& link,
                                             const FactorPair& fp, double alpha,
                                             double lambda) {
  check_alpha(alpha, lambda);
  if (fp.u.rows() != obs.rows() || fp.v.rows() != obs.cols() ||
      fp.u.cols() != fp.v.cols())
    throw InvalidArgument("factor shapes do not match observations");
  BarrierObjective objective(obs, link, alpha);
  if (!objective.value(fp, lambda))
    throw InfeasiblePoint("|(U V^T)_ij| >= alpha for some entry");
  FactoredGradient out;
  out.value = objective.value_and_grad(fp, lambda, out.grad_u, out.grad_v);
  return out;
}

BarrierObjective::BarrierObjective(const BinaryObservations& obs,
                                   const LinkModel& link, double alpha)
    : link_(link), alpha_(alpha), rows_(obs.rows()), cols_(obs.cols()) {
  validate(link);
  check_alpha(alpha, 0.0);
  index_.reserve(obs.size());
  sign_.reserve(obs.size());
  const auto entries = obs.mask().entries();
  const auto values = obs.values();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    index_.push_back(static_cast<Eigen::Index>(entries[k].col) * rows_ +
                     entries[k].row);
    sign_.push_back(values[k]);
  }
}

double BarrierObjective::nll_at(const Eigen::MatrixXd& m) const {
  const double* data = m.data();
  double total = 0.0;
  for (std::size_t k = 0; k < index_.size(); ++k)
    total += neg_log_cdf(link_, sign_[k] * data[index_[k]]);
  return total;
}

std::optional<double> BarrierObjective::barrier_at(
    const Eigen::MatrixXd& m) const {
  const auto r = m.array() * (1.0 / alpha_);
  // Negated test so NaN entries also count as infeasible.
  if (!(r.abs() < 1.0).all()) return std::nullopt;
  return barrier_sum(m.data(), m.size(), 1.0 / alpha_);
}

std::optional<ObjectiveValue> BarrierObjective::value_at(
    const Eigen::MatrixXd& m, double lambda) const {
  const auto barrier = barrier_at(m);
  if (!barrier) return std::nullopt;
  ObjectiveValue v;
  v.nll = nll_at(m);
  v.barrier = *barrier;
  v.lambda = lambda;
  v.total = v.nll + lambda * v.barrier;
  return v;
}

std::optional<ObjectiveValue> BarrierObjective::value(const FactorPair& fp,
                                                      double lambda) {
  m_.noalias() = fp.u * fp.v.transpose();
  return value_at(m_, lambda);
}

ObjectiveValue BarrierObjective::value_and_grad(const FactorPair& fp,
                                                double lambda,
                                                Eigen::MatrixXd& grad_u,
                                                Eigen::MatrixXd& grad_v) {
  m_.noalias() = fp.u * fp.v.transpose();
  const double inv_alpha = 1.0 / alpha_;
  const auto r = m_.array() * inv_alpha;
  if (!(r.abs() < 1.0).all()) throw InfeasiblePoint("|(U V^T)_ij| >= alpha");
  const double barrier = barrier_sum(m_.data(), m_.size(), inv_alpha);
  w_ = ((2.0 * lambda * inv_alpha) * r / ((1.0 - r) * (1.0 + r))).matrix();
  const double* mdata = m_.data();
  double* wdata = w_.data();
  double loss = 0.0;
  for (std::size_t k = 0; k < index_.size(); ++k) {
    const double y = sign_[k];
    const LossTerms t = neg_log_cdf_terms(link_, y * mdata[index_[k]]);
    loss += t.value;
    wdata[index_[k]] += y * t.d1;
  }
  grad_u.noalias() = w_ * fp.v;
  grad_v.noalias() = w_.transpose() * fp.u;
  ObjectiveValue v;
  v.nll = loss;
  v.barrier = barrier;
  v.lambda = lambda;
  v.total = loss + lambda * barrier;
  return v;
}

}  // namespace onebit
