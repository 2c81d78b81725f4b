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

// MovieLens 100k ingestion (u.data layout), binarization against the global
// mean rating, and seeded train/test splits.

#ifndef ONEBIT_MOVIELENS_HPP_
#define ONEBIT_MOVIELENS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "onebit/observe.hpp"

namespace onebit {

inline constexpr const char* kMovielensUrl =
    "https://files.grouplens.org/datasets/movielens/ml-100k.zip";
inline constexpr int kMovielensUsers = 943;
inline constexpr int kMovielensItems = 1682;
inline constexpr int kMovielensRatings = 100000;

struct Rating {
  int user;  // dense 0-based
  int item;  // dense 0-based
  int rating;
  long long timestamp;
  friend bool operator==(const Rating&, const Rating&) = default;
};

struct RatingsTable {
  int n_users = 0;
  int n_items = 0;
  std::vector<Rating> triples;
  std::vector<long long> user_ids;  // original id of each dense user index
  std::vector<long long> item_ids;
  long long duplicates_replaced = 0;

  friend bool operator==(const RatingsTable& a, const RatingsTable& b) {
    return a.n_users == b.n_users && a.n_items == b.n_items &&
           a.triples == b.triples && a.user_ids == b.user_ids &&
           a.item_ids == b.item_ids;
  }
};

// One "user item rating timestamp" record per line (tab separated upstream,
// any whitespace accepted). Ids are remapped to dense indices in ascending id
// order; a repeated (user, item) pair keeps its last occurrence. Throws
// ParseError with the line number on malformed lines or ratings outside 1..5.
RatingsTable read_movielens(std::istream& in);
RatingsTable load_movielens(const std::filesystem::path& path);

// Writes the table back in u.data layout with the original ids.
void write_movielens(std::ostream& out, const RatingsTable& table);

// Uniformly drawn subset of `count` ratings, re-indexed densely.
RatingsTable subsample(const RatingsTable& table, std::size_t count,
                       std::uint64_t seed);

double mean_rating(const RatingsTable& table);

// Y = +1 above the global mean, -1 below; ratings equal to the mean are
// dropped.
BinaryObservations binarize(const RatingsTable& table);

// Uniform partition of the observations: floor(|Omega| * train_fraction)
// entries go to the training side.
std::pair<BinaryObservations, BinaryObservations> split(
    const BinaryObservations& obs, double train_fraction, std::uint64_t seed);

// Ratings from a random low-rank preference model, in the same layout as the
// real data; used where the dataset is not available.
RatingsTable synthesize_ratings(int n_users, int n_items, std::size_t count,
                                int rank, std::uint64_t seed);

}  // namespace onebit

#endif  // ONEBIT_MOVIELENS_HPP_
