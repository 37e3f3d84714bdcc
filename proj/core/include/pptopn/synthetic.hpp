//
// Copyright 2026 The pptopn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pptopn/dataset.hpp"

namespace pptopn {

// Deterministic synthetic datasets for experiments and fixtures. Every like
// decision is a pure function of (seed, user, item), so generation order and
// thread count never change the result.

/// Builds a dataset over dense ids 0..n-1 (raw ids are the decimal strings).
/// Items beyond any like-set still exist in the universe.
InteractionDataset dataset_from_likes(std::vector<std::vector<ItemId>> likes,
                                      std::uint32_t n_items);

/// Taste-group model: users and items are hashed into groups; a user likes
/// in-group items with `in_group_like_prob` and out-group items with
/// `out_group_like_prob`, both scaled by a per-item popularity factor
/// popularity_min + (popularity_max - popularity_min) * u^popularity_exponent
/// for a per-item uniform u. Exponents above 1 skew mass toward the floor
/// and leave a thin popular tail, mimicking real catalog skew.
struct ClusteredConfig {
    std::uint32_t n_users = 2000;
    std::uint32_t n_items = 3000;
    std::uint32_t n_groups = 30;
    double in_group_like_prob = 0.4;
    double out_group_like_prob = 0.004;
    double popularity_min = 0.5;
    double popularity_max = 1.5;
    double popularity_exponent = 1.0;
    std::uint64_t seed = 1;
};

InteractionDataset synthetic_clustered(const ClusteredConfig& cfg);

/// Flat popularity model: item i is liked with probability interpolated
/// linearly from p_lo (item 0) to p_hi (item n_items-1).
InteractionDataset synthetic_popularity(std::uint32_t n_users, std::uint32_t n_items,
                                        double p_lo, double p_hi, std::uint64_t seed);

/// Writes a lastfm-dat file with exactly the requested user/item/like counts
/// (every user and artist id appears; requires n_users >= n_items and
/// n_likes >= n_users).
void write_lastfm_shaped(const std::string& path, std::uint32_t n_users,
                         std::uint32_t n_items, std::uint64_t n_likes,
                         std::uint64_t seed);

/// Writes a jester-csv file (100 joke columns) with exactly n_users rows and
/// n_likes rated cells; every joke column is rated by someone.
void write_jester_shaped(const std::string& path, std::uint32_t n_users,
                         std::uint64_t n_likes, std::uint64_t seed);

/// Writes a dataset as movielens-csv with synthetic ratings and timestamps.
void write_movielens_csv(const InteractionDataset& ds, const std::string& path,
                         std::uint64_t seed);

}  // namespace pptopn
