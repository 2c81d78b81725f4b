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

// Ground-truth generation and binary observations Y over a mask.

#ifndef ONEBIT_OBSERVE_HPP_
#define ONEBIT_OBSERVE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "onebit/links.hpp"
#include "onebit/rng.hpp"
#include "onebit/sampling.hpp"

namespace onebit {

// +-1 values aligned with mask.entries().
class BinaryObservations {
 public:
  BinaryObservations() = default;
  // Throws InvalidArgument when sizes differ or a value is not +-1.
  BinaryObservations(Mask mask, std::vector<std::int8_t> values);

  const Mask& mask() const { return mask_; }
  std::span<const std::int8_t> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  int rows() const { return mask_.rows(); }
  int cols() const { return mask_.cols(); }

  // Observations at the given positions of entries() (any order, no repeats).
  BinaryObservations subset(std::span<const std::size_t> positions) const;

  friend bool operator==(const BinaryObservations&,
                         const BinaryObservations&) = default;

 private:
  Mask mask_;
  std::vector<std::int8_t> values_;
};

struct GroundTruth {
  Eigen::MatrixXd m_star;
  int rank_r = 0;
  double alpha = 0.0;
};

// M* = M1 M2^T with Uniform[-0.5, 0.5] factors, then one global rescale to
// ||M*||_inf = alpha.
GroundTruth gen_ground_truth(int m, int n, int r, double alpha,
                             std::uint64_t seed);

// Y_ij = +1 with probability f(M*_ij), independently over the mask.
BinaryObservations sample_observations(const GroundTruth& truth,
                                       const Mask& mask, const LinkModel& link,
                                       std::uint64_t seed);

// Y_ij = sign(M*_ij + Z_ij) with Z_ij drawn from the link's noise law
// (logistic or Gaussian with scale sigma). Exact zeros are redrawn.
BinaryObservations sample_via_noise(const GroundTruth& truth, const Mask& mask,
                                    const LinkModel& link, std::uint64_t seed);

// One noise draw from the link's noise law.
double draw_link_noise(const LinkModel& link, Rng& rng);

// Text format: "m n" header, then one "i j +1" / "i j -1" triple per line.
void write_observations(std::ostream& out, const BinaryObservations& obs);
BinaryObservations read_observations(std::istream& in);
void save_observations(const std::filesystem::path& path,
                       const BinaryObservations& obs);
BinaryObservations load_observations(const std::filesystem::path& path);

}  // namespace onebit

#endif  // ONEBIT_OBSERVE_HPP_
