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

// Link functions for the 1-bit observation model: P(Y = +1) = f(M_ij).

#ifndef ONEBIT_LINKS_HPP_
#define ONEBIT_LINKS_HPP_

#include <string>
#include <string_view>

namespace onebit {

enum class LinkKind { kLogit, kProbit };

std::string to_string(LinkKind kind);
LinkKind parse_link_kind(std::string_view name);

struct LinkModel {
  LinkKind kind = LinkKind::kProbit;
  double sigma = 1.0;  // scale of the logistic / Gaussian noise
};

// Throws InvalidArgument unless sigma is finite and positive.
void validate(const LinkModel& model);

// Smallest probability handed to a logarithm.
inline constexpr double kProbFloor = 1e-300;

struct LinkValue {
  double f;            // clamped to [kProbFloor, 1]
  double one_minus_f;  // 1 - f computed without cancellation, same clamp
  double fdot;
  double fddot;
};

// f, f' and f'' in closed form.
LinkValue eval_link(const LinkModel& model, double x);

// Per-entry loss l(z) = -log f(z) with l'(z) and l''(z). Because both links
// satisfy f(-z) = 1 - f(z), the loss of an observation y in {+1,-1} at entry
// value x is l(y x), with gradient y l'(y x) and curvature l''(y x).
struct LossTerms {
  double value;
  double d1;
  double d2;
};

double neg_log_cdf(const LinkModel& model, double z);
LossTerms neg_log_cdf_terms(const LinkModel& model, double z);

// Curvature lower bound gamma_alpha and gradient bound L_alpha over
// |x| <= alpha. The closed forms are exact for logit; for probit they are
// standard one-sided bounds. The *_grid fields hold the same quantities
// evaluated on kConstantsGridPoints uniform points of [-alpha, alpha].
struct LinkConstants {
  double alpha;
  double gamma_alpha;
  double l_alpha;
  double gamma_alpha_grid;
  double l_alpha_grid;
};

inline constexpr int kConstantsGridPoints = 2001;

LinkConstants link_constants(const LinkModel& model, double alpha);

}  // namespace onebit

#endif  // ONEBIT_LINKS_HPP_
