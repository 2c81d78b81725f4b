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

// Closed-form error bounds and rates for the rank-constrained estimator.
// Rates (corollary_rate, comparison_rates) carry constant 1 and are
// meaningful only up to scale.

#ifndef ONEBIT_BOUNDS_HPP_
#define ONEBIT_BOUNDS_HPP_

#include "onebit/links.hpp"

namespace onebit {

struct BoundInputs {
  int m = 0;
  int n = 0;
  int r = 0;
  double alpha = 0.0;
  LinkConstants constants{};
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  long long omega_size = 0;
  double c_spectral = 3.0;  // the (A2) constant C, user supplied
};

struct TheoremBound {
  // Bounds on ||M_hat - M*||_F / sqrt(m n).
  double spectral_form;  // in terms of sigma1(G), sigma2(G)
  double omega_form;     // in terms of |Omega| and C
  double c1_alpha;       // 4 sqrt(2) alpha
  double c2_alpha;       // 32.16 sqrt(2) L_alpha / gamma_alpha
  bool transposed;       // inputs had m < n and were swapped
};

// Throws BoundUndefined when gamma_alpha <= 0 and InvalidArgument on
// inconsistent inputs.
TheoremBound theorem_bound(const BoundInputs& b);

// (delta / p^2) sqrt(r^3 / n), rate-only.
double corollary_rate(const BoundInputs& b, double p, double delta);

struct ComparisonRates {
  double prior_rate;  // sqrt(r / (p n)), trace-norm squared-error rate
  double ours_rate;   // r^3 / (p^4 n)
};

ComparisonRates comparison_rates(int n, int r, double p);

}  // namespace onebit

#endif  // ONEBIT_BOUNDS_HPP_
