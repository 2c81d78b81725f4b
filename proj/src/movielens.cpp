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

#include "onebit/movielens.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "onebit/error.hpp"
#include "onebit/rng.hpp"

namespace onebit {
namespace {

struct RawRating {
  long long user;
  long long item;
  int rating;
  long long timestamp;
};

// Dense indices in ascending original-id order; keeps the last record of a
// repeated (user, item) pair.
RatingsTable build_table(const std::vector<RawRating>& raw) {
  RatingsTable table;
  std::map<long long, int> users, items;
  for (const RawRating& r : raw) {
    users.emplace(r.user, 0);
    items.emplace(r.item, 0);
  }
  for (auto& [id, index] : users) {
    index = static_cast<int>(table.user_ids.size());
    table.user_ids.push_back(id);
  }
  for (auto& [id, index] : items) {
    index = static_cast<int>(table.item_ids.size());
    table.item_ids.push_back(id);
  }
  table.n_users = static_cast<int>(users.size());
  table.n_items = static_cast<int>(items.size());

  std::map<std::pair<int, int>, std::size_t> seen;
  for (const RawRating& r : raw) {
    const Rating rating{users.at(r.user), items.at(r.item), r.rating, r.timestamp};
    auto [it, inserted] =
        seen.emplace(std::make_pair(rating.user, rating.item), table.triples.size());
    if (inserted) {
      table.triples.push_back(rating);
    } else {
      table.triples[it->second] = rating;
      ++table.duplicates_replaced;
    }
  }
  return table;
}

}  // namespace

RatingsTable read_movielens(std::istream& in) {
  std::vector<RawRating> raw;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    RawRating r{};
    std::string rest;
    if (!(ls >> r.user >> r.item >> r.rating >> r.timestamp) || (ls >> rest))
      throw ParseError("expected \"user item rating timestamp\"", line_no);
    if (r.rating < 1 || r.rating > 5)
      throw ParseError("rating " + std::to_string(r.rating) + " outside 1..5",
                       line_no);
    raw.push_back(r);
  }
  return build_table(raw);
}

RatingsTable load_movielens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string() +
                  "; download and unzip " + kMovielensUrl +
                  " and pass the path to ml-100k/u.data");
  }
  return read_movielens(in);
}

void write_movielens(std::ostream& out, const RatingsTable& table) {
  for (const Rating& r : table.triples) {
    out << table.user_ids[r.user] << '\t' << table.item_ids[r.item] << '\t'
        << r.rating << '\t' << r.timestamp << '\n';
  }
}

RatingsTable subsample(const RatingsTable& table, std::size_t count,
                       std::uint64_t seed) {
  if (count == 0 || count > table.triples.size())
    throw InvalidArgument("subsample size must lie in [1, number of ratings]");
  std::vector<std::size_t> order(table.triples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed);
  shuffle(order, rng);
  order.resize(count);
  std::sort(order.begin(), order.end());
  std::vector<RawRating> raw;
  raw.reserve(count);
  for (std::size_t k : order) {
    const Rating& r = table.triples[k];
    raw.push_back({table.user_ids[r.user], table.item_ids[r.item], r.rating,
                   r.timestamp});
  }
  return build_table(raw);
}

double mean_rating(const RatingsTable& table) {
  if (table.triples.empty()) throw InvalidArgument("empty ratings table");
  double sum = 0.0;
  for (const Rating& r : table.triples) sum += r.rating;
  return sum / static_cast<double>(table.triples.size());
}

BinaryObservations binarize(const RatingsTable& table) {
  const double mu = mean_rating(table);
  std::vector<std::pair<Entry, std::int8_t>> kept;
  kept.reserve(table.triples.size());
  for (const Rating& r : table.triples) {
    if (r.rating > mu) {
      kept.push_back({{r.user, r.item}, 1});
    } else if (r.rating < mu) {
      kept.push_back({{r.user, r.item}, -1});
    }
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Entry> entries;
  std::vector<std::int8_t> values;
  entries.reserve(kept.size());
  values.reserve(kept.size());
  for (const auto& [e, y] : kept) {
    entries.push_back(e);
    values.push_back(y);
  }
  return BinaryObservations(Mask(table.n_users, table.n_items, std::move(entries)),
                            std::move(values));
}

std::pair<BinaryObservations, BinaryObservations> split(
    const BinaryObservations& obs, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InvalidArgument("train fraction must lie in (0, 1)");
  const auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(obs.size()) * train_fraction));
  if (n_train == 0 || n_train >= obs.size())
    throw InvalidArgument("train fraction leaves one side of the split empty");
  std::vector<std::size_t> order(obs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed);
  shuffle(order, rng);
  const std::span<const std::size_t> all(order);
  return {obs.subset(all.first(n_train)), obs.subset(all.subspan(n_train))};
}

RatingsTable synthesize_ratings(int n_users, int n_items, std::size_t count,
                                int rank, std::uint64_t seed) {
  if (n_users <= 0 || n_items <= 0 || rank <= 0)
    throw InvalidArgument("synthetic ratings need positive sizes");
  const auto cells = static_cast<std::size_t>(n_users) * n_items;
  if (count == 0 || count > cells)
    throw InvalidArgument("synthetic rating count must lie in [1, users * items]");
  Rng rng = make_rng(seed);
  Eigen::MatrixXd users(n_users, rank), items(n_items, rank);
  for (Eigen::Index i = 0; i < users.size(); ++i)
    users.data()[i] = standard_normal(rng) / std::sqrt(rank);
  for (Eigen::Index i = 0; i < items.size(); ++i)
    items.data()[i] = standard_normal(rng) / std::sqrt(rank);

  std::vector<std::size_t> cell_order(cells);
  std::iota(cell_order.begin(), cell_order.end(), std::size_t{0});
  shuffle(cell_order, rng);
  cell_order.resize(count);
  std::sort(cell_order.begin(), cell_order.end());

  std::vector<RawRating> raw;
  raw.reserve(count);
  long long timestamp = 874724710;
  for (std::size_t cell : cell_order) {
    const int u = static_cast<int>(cell / n_items);
    const int i = static_cast<int>(cell % n_items);
    const double score =
        3.5 + 1.2 * users.row(u).dot(items.row(i)) + 0.6 * standard_normal(rng);
    const int rating = static_cast<int>(std::clamp(std::lround(score), 1L, 5L));
    raw.push_back({u + 1, i + 1, rating, timestamp++});
  }
  return build_table(raw);
}

}  // namespace onebit
