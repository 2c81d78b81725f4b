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

#include "onebit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "onebit/error.hpp"

namespace onebit {
namespace {

void check_rate_inputs(int n, int r, double p) {
  if (n <= 0 || r <= 0) throw InvalidArgument("n and r must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0, 1]");
}

}  // namespace

TheoremBound theorem_bound(const BoundInputs& in) {
  BoundInputs b = in;
  TheoremBound out{};
  if (b.m < b.n) {
    std::swap(b.m, b.n);
    out.transposed = true;
  }
  if (b.n <= 0 || b.r <= 0 || b.omega_size <= 0)
    throw InvalidArgument("m, n, r and |Omega| must be positive");
  if (!(b.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(b.sigma1 > 0.0) || b.sigma2 < 0.0 || b.sigma2 > b.sigma1)
    throw InvalidArgument("need sigma1 >= sigma2 >= 0 and sigma1 > 0");
  if (!(b.constants.gamma_alpha > 0.0))
    throw BoundUndefined("gamma_alpha must be positive for the bound to hold");

  const double m = b.m;
  const double n = b.n;
  const double r = b.r;
  const double omega = static_cast<double>(b.omega_size);
  const double root_r3n = std::sqrt(r * r * r * n);
  out.c1_alpha = 4.0 * std::sqrt(2.0) * b.alpha;
  out.c2_alpha = 32.16 * std::sqrt(2.0) * b.constants.l_alpha / b.constants.gamma_alpha;
  out.spectral_form =
      std::max(out.c1_alpha * r * b.sigma2 / b.sigma1,
               out.c2_alpha * m * root_r3n / (b.sigma1 * b.sigma1));
  out.omega_form =
      std::max(out.c1_alpha * b.c_spectral * r * std::sqrt(m) / std::sqrt(omega),
               out.c2_alpha * m * m * m * root_r3n / (omega * omega));
  return out;
}

double corollary_rate(const BoundInputs& b, double p, double delta) {
  const int n = std::min(b.m, b.n);
  check_rate_inputs(n, b.r, p);
  if (!(delta >= 1.0)) throw InvalidArgument("delta = m / n must be >= 1");
  const double r = b.r;
  return delta / (p * p) * std::sqrt(r * r * r / n);
}

ComparisonRates comparison_rates(int n, int r, double p) {
  check_rate_inputs(n, r, p);
  const double rr = r;
  return {std::sqrt(rr / (p * n)), rr * rr * rr / (p * p * p * p * n)};
}

}  // namespace onebit
