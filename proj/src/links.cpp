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

#include "onebit/links.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "onebit/error.hpp"

namespace onebit {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
// Below this standardized value Phi(t) is evaluated through the Mills ratio
// instead of erfc, which underflows shortly after.
constexpr double kProbitTail = -37.0;

const double kMaxLoss = -std::log(kProbFloor);

double normal_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

// Phi(t) and 1 - Phi(t) = Phi(-t), both with full relative accuracy.
double normal_cdf(double t) { return 0.5 * std::erfc(-t * kInvSqrt2); }

// Mills ratio R(u) = (1 - Phi(u)) / phi(u) for large u, by the Laplace
// continued fraction 1/(u + 1/(u + 2/(u + 3/(u + ...)))).
double mills_ratio_tail(double u) {
  double acc = u;
  for (int k = 40; k >= 1; --k) acc = u + k / acc;
  return 1.0 / acc;
}

// -log Phi(t).
double probit_loss(double t) {
  if (t >= 0.0) return -std::log1p(-0.5 * std::erfc(t * kInvSqrt2));
  if (t > kProbitTail) return -std::log(normal_cdf(t));
  // log Phi(t) = log phi(t) + log R(-t)
  return 0.5 * t * t + kLogSqrt2Pi - std::log(mills_ratio_tail(-t));
}

// phi(t) / Phi(t), the inverse Mills ratio.
double probit_hazard(double t) {
  if (t > kProbitTail) return normal_pdf(t) / normal_cdf(t);
  return 1.0 / mills_ratio_tail(-t);
}

// log(1 + exp(-u)) without overflow.
double softplus_neg(double u) {
  if (u > 0.0) return std::log1p(std::exp(-u));
  return -u + std::log1p(std::exp(u));
}

// 1 / (1 + exp(-u)).
double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

void check_finite(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("link argument must be finite");
}

}  // namespace

std::string to_string(LinkKind kind) {
  return kind == LinkKind::kLogit ? "logit" : "probit";
}

LinkKind parse_link_kind(std::string_view name) {
  if (name == "logit") return LinkKind::kLogit;
  if (name == "probit") return LinkKind::kProbit;
  throw InvalidArgument("unknown link '" + std::string(name) +
                        "' (expected logit or probit)");
}

void validate(const LinkModel& model) {
  if (!std::isfinite(model.sigma) || model.sigma <= 0.0)
    throw InvalidArgument("link sigma must be finite and positive");
}

LinkValue eval_link(const LinkModel& model, double x) {
  validate(model);
  check_finite(x);
  const double s = model.sigma;
  const double t = x / s;
  LinkValue out{};
  if (model.kind == LinkKind::kLogit) {
    out.f = sigmoid(t);
    out.one_minus_f = sigmoid(-t);
    const double w = out.f * out.one_minus_f;
    out.fdot = w / s;
    out.fddot = w * (out.one_minus_f - out.f) / (s * s);
  } else {
    out.f = normal_cdf(t);
    out.one_minus_f = normal_cdf(-t);
    const double pdf = normal_pdf(t);
    out.fdot = pdf / s;
    out.fddot = -t * pdf / (s * s);
  }
  out.f = std::max(out.f, kProbFloor);
  out.one_minus_f = std::max(out.one_minus_f, kProbFloor);
  return out;
}

double neg_log_cdf(const LinkModel& model, double z) {
  const double t = z / model.sigma;
  const double v =
      model.kind == LinkKind::kLogit ? softplus_neg(t) : probit_loss(t);
  return std::min(v, kMaxLoss);
}

LossTerms neg_log_cdf_terms(const LinkModel& model, double z) {
  const double s = model.sigma;
  const double t = z / s;
  LossTerms out{};
  if (model.kind == LinkKind::kLogit) {
    out.value = softplus_neg(t);
    const double q = sigmoid(-t);  // 1 - f
    out.d1 = -q / s;
    out.d2 = q * (1.0 - q) / (s * s);
  } else {
    out.value = probit_loss(t);
    const double rho = probit_hazard(t);
    out.d1 = -rho / s;
    out.d2 = rho * (rho + t) / (s * s);
  }
  out.value = std::min(out.value, kMaxLoss);
  return out;
}

LinkConstants link_constants(const LinkModel& model, double alpha) {
  validate(model);
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw InvalidArgument("alpha must be finite and positive");
  const double s = model.sigma;
  const double a = alpha / s;
  LinkConstants out{};
  out.alpha = alpha;
  if (model.kind == LinkKind::kLogit) {
    out.l_alpha = 1.0 / s;
    // e^a / (s^2 (1 + e^a)^2), written in e^-a to stay finite for large a
    const double e = std::exp(-a);
    out.gamma_alpha = e / (s * s * (1.0 + e) * (1.0 + e));
  } else {
    out.l_alpha = 4.0 / s * (a + 1.0);
    out.gamma_alpha = alpha / (std::sqrt(2.0 * std::numbers::pi) * s * s * s) *
                      std::exp(-0.5 * a * a);
  }

  // Both bracketed curvature expressions equal l''(x) and l''(-x); the grid
  // is symmetric so scanning l''(x) covers both.
  double gamma = std::numeric_limits<double>::infinity();
  double lip = 0.0;
  for (int i = 0; i < kConstantsGridPoints; ++i) {
    const double x =
        -alpha + 2.0 * alpha * i / static_cast<double>(kConstantsGridPoints - 1);
    gamma = std::min(gamma, neg_log_cdf_terms(model, x).d2);
    const LinkValue v = eval_link(model, x);
    lip = std::max(lip, std::abs(v.fdot) / (v.f * v.one_minus_f));
  }
  out.gamma_alpha_grid = gamma;
  out.l_alpha_grid = lip;
  return out;
}

}  // namespace onebit
