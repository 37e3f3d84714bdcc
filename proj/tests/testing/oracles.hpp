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

// Brute-force oracles for cross-checking optimized paths. These deliberately
// recompute everything from raw like-sets with naive enumeration and stay
// independent of the library's matrix/index code.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "pptopn/dataset.hpp"
#include "pptopn/synthetic.hpp"

namespace pptopn::testing {

/// Hash-set membership count; a different route than the library's sorted
/// merge.
inline double oracle_jaccard(const std::vector<UserId>& a, const std::vector<UserId>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::unordered_set<UserId> sa(a.begin(), a.end());
    std::size_t inter = 0;
    for (UserId u : b) {
        if (sa.count(u)) ++inter;
    }
    const std::size_t uni = sa.size() + std::unordered_set<UserId>(b.begin(), b.end()).size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Item user-sets rebuilt from the like lists (not from ds.item_index).
inline std::vector<std::vector<UserId>> oracle_item_users(const InteractionDataset& ds) {
    std::vector<std::vector<UserId>> users(ds.n_items());
    for (UserId u = 0; u < ds.likes.size(); ++u) {
        for (ItemId i : ds.likes[u]) users[i].push_back(u);
    }
    return users;
}

/// Dense all-pairs similarity table via the naive double loop.
inline std::vector<std::vector<double>> oracle_similarity_table(const InteractionDataset& ds) {
    const auto users = oracle_item_users(ds);
    const std::uint32_t m = ds.n_items();
    std::vector<std::vector<double>> table(m, std::vector<double>(m, 0.0));
    for (std::uint32_t i = 0; i < m; ++i) {
        table[i][i] = 1.0;
        for (std::uint32_t j = i + 1; j < m; ++j) {
            const double v = oracle_jaccard(users[i], users[j]);
            table[i][j] = v;
            table[j][i] = v;
        }
    }
    return table;
}

/// Full enumeration ranking: every candidate outside the like-set scored by
/// the ascending-liked-item similarity sum, sorted by (score desc, id asc).
inline std::vector<ItemId> oracle_top_n(const InteractionDataset& ds, UserId user,
                                        std::uint32_t n) {
    const auto users = oracle_item_users(ds);
    const auto& likes = ds.likes[user];
    std::vector<std::pair<double, ItemId>> scored;
    for (ItemId c = 0; c < ds.n_items(); ++c) {
        if (std::binary_search(likes.begin(), likes.end(), c)) continue;
        double score = 0.0;
        for (ItemId j : likes) score += oracle_jaccard(users[c], users[j]);
        scored.emplace_back(score, c);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<ItemId> out;
    for (std::size_t r = 0; r < scored.size() && r < n; ++r) out.push_back(scored[r].second);
    return out;
}

/// Small random dataset for oracle-equivalence runs. Every item and user id
/// exists in the universe even when unliked.
inline InteractionDataset random_dataset(std::uint32_t n_users, std::uint32_t n_items,
                                         double density, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<std::vector<ItemId>> likes(n_users);
    for (std::uint32_t u = 0; u < n_users; ++u) {
        for (std::uint32_t i = 0; i < n_items; ++i) {
            const double draw = static_cast<double>(eng() >> 11) * 0x1.0p-53;
            if (draw < density) likes[u].push_back(i);
        }
    }
    return dataset_from_likes(std::move(likes), n_items);
}

}  // namespace pptopn::testing
