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

#include "onebit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "onebit/error.hpp"
#include "onebit/rng.hpp"

namespace onebit {
namespace {

void check_dims(int m, int n) {
  if (m <= 0 || n <= 0) throw InvalidArgument("mask dimensions must be positive");
}

void check_probability(double p, const char* name, bool allow_zero) {
  const bool ok =
      std::isfinite(p) && p <= 1.0 && (allow_zero ? p >= 0.0 : p > 0.0);
  if (!ok) {
    throw InvalidArgument(std::string(name) + " must lie in " +
                          (allow_zero ? "[0, 1]" : "(0, 1]"));
  }
}

// Independent inclusion with a per-entry probability; row-major draw order
// so the output is sorted by construction.
template <typename ProbFn>
Mask sample_independent(int m, int n, std::uint64_t seed, ProbFn prob) {
  Rng rng = make_rng(seed);
  std::vector<Entry> entries;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (uniform01(rng) < prob(i, j)) entries.push_back({i, j});
    }
  }
  return Mask(m, n, std::move(entries));
}

// Orthogonal residual of a unit vector against the normalized all-ones
// direction, i.e. the sine of the angle between the two lines.
double sine_to_ones(const Eigen::VectorXd& v) {
  const double len = std::sqrt(static_cast<double>(v.size()));
  const double proj = v.sum() / len;
  return (v.array() - proj / len).matrix().norm();
}

struct TopPair {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  Eigen::VectorXd u1;
  Eigen::VectorXd v1;
  // sigma2 at or below this is roundoff of an exactly rank-one G.
  double zero_tol = 0.0;
};

TopPair top_pair_dense(const Mask& mask) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(mask.adjacency(),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double eps = std::numeric_limits<double>::epsilon();
  return {s(0), s.size() > 1 ? s(1) : 0.0, svd.matrixU().col(0),
          svd.matrixV().col(0),
          s(0) * std::max(mask.rows(), mask.cols()) * eps};
}

// y = G x and y = G^T x over the entry list.
void mul_g(const Mask& mask, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.setZero(mask.rows());
  for (const Entry& e : mask.entries()) y(e.row) += x(e.col);
}
void mul_gt(const Mask& mask, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.setZero(mask.cols());
  for (const Entry& e : mask.entries()) y(e.col) += x(e.row);
}

constexpr double kPowerTol = 1e-10;
constexpr int kPowerMaxIter = 10000;

// Power iteration on G^T G, restricted to the orthogonal complement of
// `deflate` when given. Returns the singular value; v holds the right vector.
double power_iterate(const Mask& mask, const Eigen::VectorXd* deflate,
                     Eigen::VectorXd& v, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  v.resize(mask.cols());
  for (Eigen::Index j = 0; j < v.size(); ++j)
    v(j) = 1.0 + 0.1 * standard_normal(rng);
  if (deflate != nullptr) v -= deflate->dot(v) * *deflate;
  v.normalize();
  Eigen::VectorXd gv, w;
  double lambda = 0.0;
  for (int it = 0; it < kPowerMaxIter; ++it) {
    mul_g(mask, v, gv);
    mul_gt(mask, gv, w);
    if (deflate != nullptr) w -= deflate->dot(w) * *deflate;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const bool converged =
        it > 0 && std::abs(next - lambda) <= kPowerTol * std::max(next, 1e-300);
    lambda = next;
    if (converged) break;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

TopPair top_pair_power(const Mask& mask) {
  TopPair out;
  out.sigma1 = power_iterate(mask, nullptr, out.v1, 1);
  Eigen::VectorXd gv;
  mul_g(mask, out.v1, gv);
  out.u1 = gv.normalized();
  if (mask.cols() > 1 && mask.rows() > 1) {
    Eigen::VectorXd v2;
    out.sigma2 = power_iterate(mask, &out.v1, v2, 2);
  }
  // The deflated iterate works on sigma^2, so roundoff enters as its root.
  const double eps = std::numeric_limits<double>::epsilon();
  out.zero_tol =
      out.sigma1 * std::sqrt(std::max(mask.rows(), mask.cols()) * eps);
  return out;
}

SpectralReport finish_report(const Mask& mask, const TopPair& top) {
  SpectralReport r;
  r.sigma1 = top.sigma1;
  r.sigma2 = std::min(top.sigma2, top.sigma1);
  if (r.sigma2 <= top.zero_tol) r.sigma2 = 0.0;
  r.d_mean = static_cast<double>(mask.size()) / mask.rows();
  r.a1_residual = std::max(sine_to_ones(top.u1), sine_to_ones(top.v1));
  r.a2_ratio = r.sigma2 / std::sqrt(r.d_mean);
  return r;
}

void check_nonempty(const Mask& mask) {
  if (mask.empty()) throw InvalidArgument("spectral report of an empty mask");
}

// Reads the next non-blank line; returns false at end of input.
bool next_line(std::istream& in, std::string& line, long& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

Mask::Mask(int rows, int cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_dims(rows, cols);
  std::sort(entries_.begin(), entries_.end());
  row_degrees_.assign(rows_, 0);
  col_degrees_.assign(cols_, 0);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Entry& e = entries_[k];
    if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_)
      throw InvalidArgument("mask entry out of range");
    if (k > 0 && entries_[k - 1] == e) {
      throw InvalidArgument("duplicate mask entry (" + std::to_string(e.row) +
                            ", " + std::to_string(e.col) + ")");
    }
    ++row_degrees_[e.row];
    ++col_degrees_[e.col];
  }
}

bool Mask::contains(int row, int col) const {
  return std::binary_search(entries_.begin(), entries_.end(), Entry{row, col});
}

Mask Mask::transposed() const {
  std::vector<Entry> t;
  t.reserve(entries_.size());
  for (const Entry& e : entries_) t.push_back({e.col, e.row});
  return Mask(cols_, rows_, std::move(t));
}

Eigen::MatrixXd Mask::adjacency() const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const Entry& e : entries_) g(e.row, e.col) = 1.0;
  return g;
}

Mask gen_bernoulli(int m, int n, double p, std::uint64_t seed) {
  check_dims(m, n);
  check_probability(p, "p", false);
  if (p * m * n < 1.0)
    throw InvalidArgument("p * m * n must be at least one expected entry");
  return sample_independent(m, n, seed, [p](int, int) { return p; });
}

Mask gen_block_model(int m, int n, double p, double q, std::uint64_t seed) {
  check_dims(m, n);
  check_probability(p, "p", true);
  check_probability(q, "q", true);
  if (m % 2 != 0 || n % 2 != 0)
    throw InvalidArgument("block model needs even m and n");
  const int hm = m / 2;
  const int hn = n / 2;
  return sample_independent(m, n, seed, [=](int i, int j) {
    return ((i < hm) == (j < hn)) ? p : q;
  });
}

Mask gen_regular(int m, int n, int d, std::uint64_t seed) {
  check_dims(m, n);
  if (d <= 0 || d > n) throw InvalidArgument("row degree d must lie in [1, n]");
  const long long total = static_cast<long long>(m) * d;
  if (total % n != 0)
    throw InvalidArgument("m * d must be divisible by n for equal column degrees");
  const int c = static_cast<int>(total / n);

  std::vector<Entry> edges;
  edges.reserve(total);
  if (d == n) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) edges.push_back({i, j});
    return Mask(m, n, std::move(edges));
  }

  // Configuration model: pair row stubs with shuffled column stubs, then
  // remove multi-edges by degree-preserving switches.
  Rng rng = make_rng(seed);
  std::vector<int> col_stubs;
  col_stubs.reserve(total);
  for (int j = 0; j < n; ++j) col_stubs.insert(col_stubs.end(), c, j);
  shuffle(col_stubs, rng);
  for (long long k = 0; k < total; ++k)
    edges.push_back({static_cast<int>(k / d), col_stubs[k]});

  std::vector<int> count(static_cast<std::size_t>(m) * n, 0);
  auto cell = [&](int i, int j) -> int& {
    return count[static_cast<std::size_t>(i) * n + j];
  };
  for (const Entry& e : edges) ++cell(e.row, e.col);

  const long long max_attempts = 1000 * total + 100000;
  long long attempts = 0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    while (cell(edges[k].row, edges[k].col) > 1) {
      if (++attempts > max_attempts)
        throw InvalidArgument("could not realize a simple bi-regular mask");
      Entry& a = edges[k];
      Entry& b = edges[uniform_index(rng, edges.size())];
      if (a.row == b.row || a.col == b.col) continue;
      if (cell(a.row, b.col) > 0 || cell(b.row, a.col) > 0) continue;
      --cell(a.row, a.col);
      --cell(b.row, b.col);
      std::swap(a.col, b.col);
      ++cell(a.row, a.col);
      ++cell(b.row, b.col);
    }
  }
  return Mask(m, n, std::move(edges));
}

SpectralReport spectral_report(const Mask& mask) {
  check_nonempty(mask);
  if (std::min(mask.rows(), mask.cols()) <= kDenseSvdLimit)
    return finish_report(mask, top_pair_dense(mask));
  return finish_report(mask, top_pair_power(mask));
}

SpectralReport spectral_report_power(const Mask& mask) {
  check_nonempty(mask);
  return finish_report(mask, top_pair_power(mask));
}

Eigen::MatrixXd apply_sampling_op(const Mask& mask, const Eigen::MatrixXd& z) {
  if (z.rows() != mask.rows() || z.cols() != mask.cols())
    throw InvalidArgument("sampling operator: matrix shape does not match mask");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  for (const Entry& e : mask.entries()) out(e.row, e.col) = z(e.row, e.col);
  return out;
}

void write_mask(std::ostream& out, const Mask& mask) {
  out << mask.rows() << ' ' << mask.cols() << '\n';
  for (const Entry& e : mask.entries()) out << e.row << ' ' << e.col << '\n';
}

Mask read_mask(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError("missing mask header", 1);
  int m = 0, n = 0;
  {
    std::istringstream hs(line);
    std::string rest;
    if (!(hs >> m >> n) || (hs >> rest) || m <= 0 || n <= 0)
      throw ParseError("mask header must be \"m n\" with positive sizes", line_no);
  }
  std::vector<Entry> entries;
  while (next_line(in, line, line_no)) {
    std::istringstream ls(line);
    Entry e{};
    std::string rest;
    if (!(ls >> e.row >> e.col) || (ls >> rest))
      throw ParseError("expected \"i j\"", line_no);
    if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n)
      throw ParseError("index out of range", line_no);
    entries.push_back(e);
  }
  try {
    return Mask(m, n, std::move(entries));
  } catch (const InvalidArgument& ex) {
    throw ParseError(ex.what(), line_no);
  }
}

void save_mask(const std::filesystem::path& path, const Mask& mask) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_mask(out, mask);
  if (!out) throw IoError("write failed: " + path.string());
}

Mask load_mask(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_mask(in);
}

}  // namespace onebit
