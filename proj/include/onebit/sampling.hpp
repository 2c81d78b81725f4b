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

// Observation index sets (bipartite sampling graphs), their spectral
// statistics and the sampling operator.

#ifndef ONEBIT_SAMPLING_HPP_
#define ONEBIT_SAMPLING_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace onebit {

struct Entry {
  int row;
  int col;
  auto operator<=>(const Entry&) const = default;
};

// Set of revealed indices, kept sorted lexicographically by (row, col).
class Mask {
 public:
  Mask() = default;
  // Sorts the entries. Throws InvalidArgument on duplicates, out-of-range
  // indices or non-positive dimensions.
  Mask(int rows, int cols, std::vector<Entry> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }
  const std::vector<int>& row_degrees() const { return row_degrees_; }
  const std::vector<int>& col_degrees() const { return col_degrees_; }

  // Orientation convention: the analysis assumes rows >= cols.
  bool is_tall() const { return rows_ >= cols_; }

  bool contains(int row, int col) const;
  Mask transposed() const;
  // 0/1 bi-adjacency matrix G.
  Eigen::MatrixXd adjacency() const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Entry> entries_;
  std::vector<int> row_degrees_;
  std::vector<int> col_degrees_;
};

// Each (i, j) revealed independently with probability p.
Mask gen_bernoulli(int m, int n, double p, std::uint64_t seed);

// Two-by-two stochastic block model: rows and columns are split into equal
// halves, diagonal blocks are sampled with probability p and off-diagonal
// blocks with probability q.
Mask gen_block_model(int m, int n, double p, double q, std::uint64_t seed);

// Bi-regular mask: every row has d entries and every column m*d/n.
Mask gen_regular(int m, int n, int d, std::uint64_t seed);

struct SpectralReport {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double d_mean = 0.0;       // mean row degree |Omega| / m
  double a1_residual = 0.0;  // max sine between top singular vectors and 1/sqrt(dim)
  double a2_ratio = 0.0;     // sigma2 / sqrt(d_mean)
};

// Dense SVD is used up to this min(m, n); power iteration beyond.
inline constexpr int kDenseSvdLimit = 512;

SpectralReport spectral_report(const Mask& mask);
// Forces the power-iteration path regardless of size.
SpectralReport spectral_report_power(const Mask& mask);

// R_Omega: keeps entries on the mask and zeroes the rest.
Eigen::MatrixXd apply_sampling_op(const Mask& mask, const Eigen::MatrixXd& z);

// Text format: "m n" on the first line, then one "i j" pair per line,
// 0-indexed and sorted.
void write_mask(std::ostream& out, const Mask& mask);
Mask read_mask(std::istream& in);
void save_mask(const std::filesystem::path& path, const Mask& mask);
Mask load_mask(const std::filesystem::path& path);

}  // namespace onebit

#endif  // ONEBIT_SAMPLING_HPP_
