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

#include "onebit/observe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "onebit/error.hpp"

namespace onebit {
namespace {

void check_shape(const GroundTruth& truth, const Mask& mask) {
  if (truth.m_star.rows() != mask.rows() || truth.m_star.cols() != mask.cols())
    throw InvalidArgument("ground truth shape does not match mask");
}

bool next_line(std::istream& in, std::string& line, long& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

BinaryObservations::BinaryObservations(Mask mask,
                                       std::vector<std::int8_t> values)
    : mask_(std::move(mask)), values_(std::move(values)) {
  if (values_.size() != mask_.size())
    throw InvalidArgument("observation count differs from mask size");
  for (std::int8_t v : values_) {
    if (v != 1 && v != -1) throw InvalidArgument("observations must be +1 or -1");
  }
}

BinaryObservations BinaryObservations::subset(
    std::span<const std::size_t> positions) const {
  std::vector<std::size_t> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Entry> entries;
  std::vector<std::int8_t> values;
  entries.reserve(sorted.size());
  values.reserve(sorted.size());
  const auto all = mask_.entries();
  for (std::size_t pos : sorted) {
    if (pos >= all.size()) throw InvalidArgument("subset position out of range");
    entries.push_back(all[pos]);
    values.push_back(values_[pos]);
  }
  // Mask's constructor rejects repeated positions as duplicate entries.
  return BinaryObservations(Mask(rows(), cols(), std::move(entries)),
                            std::move(values));
}

GroundTruth gen_ground_truth(int m, int n, int r, double alpha,
                             std::uint64_t seed) {
  if (m <= 0 || n <= 0 || r <= 0) throw InvalidArgument("sizes must be positive");
  if (r > std::min(m, n)) throw InvalidArgument("rank exceeds min(m, n)");
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw InvalidArgument("alpha must be finite and positive");
  Rng rng = make_rng(seed);
  Eigen::MatrixXd left(m, r), right(n, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < m; ++i) left(i, j) = uniform01(rng) - 0.5;
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < n; ++i) right(i, j) = uniform01(rng) - 0.5;
  GroundTruth truth;
  truth.m_star = left * right.transpose();
  const double peak = truth.m_star.cwiseAbs().maxCoeff();
  if (peak == 0.0) throw InvalidArgument("degenerate ground truth draw");
  truth.m_star *= alpha / peak;
  // The scaling can land one ulp above alpha.
  truth.m_star = truth.m_star.cwiseMin(alpha).cwiseMax(-alpha);
  truth.rank_r = r;
  truth.alpha = alpha;
  return truth;
}

BinaryObservations sample_observations(const GroundTruth& truth,
                                       const Mask& mask, const LinkModel& link,
                                       std::uint64_t seed) {
  validate(link);
  check_shape(truth, mask);
  Rng rng = make_rng(seed);
  std::vector<std::int8_t> values;
  values.reserve(mask.size());
  for (const Entry& e : mask.entries()) {
    const double f = eval_link(link, truth.m_star(e.row, e.col)).f;
    values.push_back(uniform01(rng) < f ? 1 : -1);
  }
  return BinaryObservations(mask, std::move(values));
}

double draw_link_noise(const LinkModel& link, Rng& rng) {
  if (link.kind == LinkKind::kProbit) return link.sigma * standard_normal(rng);
  double u;
  do {
    u = uniform01(rng);
  } while (u == 0.0);
  return link.sigma * std::log(u / (1.0 - u));
}

BinaryObservations sample_via_noise(const GroundTruth& truth, const Mask& mask,
                                    const LinkModel& link, std::uint64_t seed) {
  validate(link);
  check_shape(truth, mask);
  Rng rng = make_rng(seed);
  std::vector<std::int8_t> values;
  values.reserve(mask.size());
  for (const Entry& e : mask.entries()) {
    double y;
    do {
      y = truth.m_star(e.row, e.col) + draw_link_noise(link, rng);
    } while (y == 0.0);
    values.push_back(y > 0.0 ? 1 : -1);
  }
  return BinaryObservations(mask, std::move(values));
}

void write_observations(std::ostream& out, const BinaryObservations& obs) {
  out << obs.rows() << ' ' << obs.cols() << '\n';
  const auto entries = obs.mask().entries();
  const auto values = obs.values();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    out << entries[k].row << ' ' << entries[k].col << ' '
        << (values[k] > 0 ? "+1" : "-1") << '\n';
  }
}

BinaryObservations read_observations(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!next_line(in, line, line_no))
    throw ParseError("missing observation header", 1);
  int m = 0, n = 0;
  {
    std::istringstream hs(line);
    std::string rest;
    if (!(hs >> m >> n) || (hs >> rest) || m <= 0 || n <= 0)
      throw ParseError("header must be \"m n\" with positive sizes", line_no);
  }
  std::vector<Entry> entries;
  std::vector<std::pair<Entry, std::int8_t>> rows;
  while (next_line(in, line, line_no)) {
    std::istringstream ls(line);
    Entry e{};
    std::string y, rest;
    if (!(ls >> e.row >> e.col >> y) || (ls >> rest))
      throw ParseError("expected \"i j +-1\"", line_no);
    if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n)
      throw ParseError("index out of range", line_no);
    std::int8_t v;
    if (y == "+1" || y == "1") {
      v = 1;
    } else if (y == "-1") {
      v = -1;
    } else {
      throw ParseError("observation must be +1 or -1", line_no);
    }
    rows.emplace_back(e, v);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::int8_t> values;
  entries.reserve(rows.size());
  values.reserve(rows.size());
  for (const auto& [e, v] : rows) {
    entries.push_back(e);
    values.push_back(v);
  }
  try {
    return BinaryObservations(Mask(m, n, std::move(entries)), std::move(values));
  } catch (const InvalidArgument& ex) {
    throw ParseError(ex.what(), line_no);
  }
}

void save_observations(const std::filesystem::path& path,
                       const BinaryObservations& obs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_observations(out, obs);
  if (!out) throw IoError("write failed: " + path.string());
}

BinaryObservations load_observations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_observations(in);
}

}  // namespace onebit
