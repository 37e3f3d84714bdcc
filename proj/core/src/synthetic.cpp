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

#include "pptopn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "pptopn/errors.hpp"
#include "pptopn/rng.hpp"

namespace pptopn {
namespace {

constexpr std::uint64_t kGroupUserTag = 0x6777753a;
constexpr std::uint64_t kGroupItemTag = 0x6769743a;
constexpr std::uint64_t kPopularityTag = 0x706f703a;
constexpr std::uint64_t kLikeTag = 0x6c696b65;

std::uint32_t hash_to_bucket(std::uint64_t h, std::uint32_t buckets) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(h) * buckets) >> 64);
}

}  // namespace

InteractionDataset dataset_from_likes(std::vector<std::vector<ItemId>> likes,
                                      std::uint32_t n_items) {
    InteractionDataset ds;
    for (std::uint32_t u = 0; u < likes.size(); ++u) ds.users.add(std::to_string(u));
    for (std::uint32_t i = 0; i < n_items; ++i) ds.items.add(std::to_string(i));
    ds.likes = std::move(likes);
    for (auto& l : ds.likes) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    ds.item_index.resize(n_items);
    for (std::uint32_t u = 0; u < ds.likes.size(); ++u) {
        for (ItemId i : ds.likes[u]) ds.item_index.at(i).push_back(u);
    }
    return ds;
}

InteractionDataset synthetic_clustered(const ClusteredConfig& cfg) {
    if (cfg.n_groups < 1) throw DomainError("synthetic_clustered: n_groups must be >= 1");
    std::vector<std::uint32_t> item_group(cfg.n_items);
    std::vector<double> popularity(cfg.n_items);
    for (std::uint32_t i = 0; i < cfg.n_items; ++i) {
        item_group[i] = hash_to_bucket(keyed_hash(cfg.seed, kGroupItemTag, i), cfg.n_groups);
        const double u = to_unit_double(keyed_hash(cfg.seed, kPopularityTag, i));
        popularity[i] = cfg.popularity_min +
                        (cfg.popularity_max - cfg.popularity_min) *
                            std::pow(u, cfg.popularity_exponent);
    }
    std::vector<std::vector<ItemId>> likes(cfg.n_users);
    for (std::uint32_t u = 0; u < cfg.n_users; ++u) {
        const std::uint32_t group =
            hash_to_bucket(keyed_hash(cfg.seed, kGroupUserTag, u), cfg.n_groups);
        for (std::uint32_t i = 0; i < cfg.n_items; ++i) {
            const double base = item_group[i] == group ? cfg.in_group_like_prob
                                                       : cfg.out_group_like_prob;
            const double p = std::min(0.95, base * popularity[i]);
            if (to_unit_double(keyed_hash(keyed_hash(cfg.seed, kLikeTag), u, i)) < p) {
                likes[u].push_back(i);
            }
        }
    }
    return dataset_from_likes(std::move(likes), cfg.n_items);
}

InteractionDataset synthetic_popularity(std::uint32_t n_users, std::uint32_t n_items,
                                        double p_lo, double p_hi, std::uint64_t seed) {
    std::vector<std::vector<ItemId>> likes(n_users);
    for (std::uint32_t u = 0; u < n_users; ++u) {
        for (std::uint32_t i = 0; i < n_items; ++i) {
            const double t =
                n_items > 1 ? static_cast<double>(i) / static_cast<double>(n_items - 1)
                            : 0.0;
            const double p = p_lo + t * (p_hi - p_lo);
            if (to_unit_double(keyed_hash(keyed_hash(seed, kLikeTag), u, i)) < p) {
                likes[u].push_back(i);
            }
        }
    }
    return dataset_from_likes(std::move(likes), n_items);
}

namespace {

// Distinct item picks for one user: a forced first pick (guarantees global
// id coverage) plus seeded draws without replacement.
std::vector<std::uint32_t> pick_items(std::uint32_t forced, std::uint32_t count,
                                      std::uint32_t universe, RngStream& rng) {
    std::unordered_set<std::uint32_t> chosen;
    chosen.reserve(count * 2);
    std::vector<std::uint32_t> out;
    out.reserve(count);
    chosen.insert(forced);
    out.push_back(forced);
    while (out.size() < count) {
        const auto pick = static_cast<std::uint32_t>(rng.next_below(universe));
        if (chosen.insert(pick).second) out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

void write_lastfm_shaped(const std::string& path, std::uint32_t n_users,
                         std::uint32_t n_items, std::uint64_t n_likes,
                         std::uint64_t seed) {
    if (n_users < n_items) {
        throw DomainError("write_lastfm_shaped: needs n_users >= n_items for coverage");
    }
    if (n_likes < n_users || n_likes > static_cast<std::uint64_t>(n_users) * n_items) {
        throw DomainError("write_lastfm_shaped: n_likes out of range");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << "userID\tartistID\tweight\n";
    const std::uint64_t base = n_likes / n_users;
    const std::uint64_t extra = n_likes - base * n_users;  // first `extra` users get one more
    std::string buffer;
    buffer.reserve(1 << 20);
    for (std::uint32_t u = 0; u < n_users; ++u) {
        const auto count = static_cast<std::uint32_t>(base + (u < extra ? 1 : 0));
        RngStream rng(keyed_hash(seed, u));
        const auto artists = pick_items(u % n_items, count, n_items, rng);
        for (std::uint32_t a : artists) {
            buffer += std::to_string(u + 1);
            buffer += '\t';
            buffer += std::to_string(a + 1);
            buffer += '\t';
            buffer += std::to_string(1 + rng.next_below(10000));
            buffer += '\n';
            if (buffer.size() > (1 << 20) - 64) {
                out << buffer;
                buffer.clear();
            }
        }
    }
    out << buffer;
    if (!out) throw ParseError(path, 0, "write failed");
}

void write_jester_shaped(const std::string& path, std::uint32_t n_users,
                         std::uint64_t n_likes, std::uint64_t seed) {
    constexpr std::uint32_t kJokes = 100;
    if (n_users < kJokes) throw DomainError("write_jester_shaped: needs >= 100 users");
    if (n_likes < n_users || n_likes > static_cast<std::uint64_t>(n_users) * kJokes) {
        throw DomainError("write_jester_shaped: n_likes out of range");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    const std::uint64_t base = n_likes / n_users;
    const std::uint64_t extra = n_likes - base * n_users;
    std::string buffer;
    buffer.reserve(1 << 20);
    char cell[32];
    for (std::uint32_t u = 0; u < n_users; ++u) {
        const auto count = static_cast<std::uint32_t>(base + (u < extra ? 1 : 0));
        RngStream rng(keyed_hash(seed, u));
        const auto rated = pick_items(u % kJokes, count, kJokes, rng);
        std::vector<bool> mask(kJokes, false);
        for (std::uint32_t j : rated) mask[j] = true;
        buffer += std::to_string(count);
        for (std::uint32_t j = 0; j < kJokes; ++j) {
            if (mask[j]) {
                const double rating = -10.0 + 20.0 * rng.next_unit();
                std::snprintf(cell, sizeof(cell), ",%.2f", rating);
                buffer += cell;
            } else {
                buffer += ",99";
            }
        }
        buffer += '\n';
        if (buffer.size() > (1 << 20) - 2048) {
            out << buffer;
            buffer.clear();
        }
    }
    out << buffer;
    if (!out) throw ParseError(path, 0, "write failed");
}

void write_movielens_csv(const InteractionDataset& ds, const std::string& path,
                         std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << "userId,movieId,rating,timestamp\n";
    char cell[32];
    std::string buffer;
    buffer.reserve(1 << 20);
    for (UserId u = 0; u < ds.likes.size(); ++u) {
        RngStream rng(keyed_hash(seed, u));
        for (ItemId i : ds.likes[u]) {
            // Half-step ratings in 0.5..5.0 and an arbitrary epoch timestamp.
            const double rating = 0.5 * static_cast<double>(1 + rng.next_below(10));
            std::snprintf(cell, sizeof(cell), ",%.1f,", rating);
            buffer += ds.users.raw(u);
            buffer += ',';
            buffer += ds.items.raw(i);
            buffer += cell;
            buffer += std::to_string(1000000000 + rng.next_below(400000000));
            buffer += '\n';
            if (buffer.size() > (1 << 20) - 64) {
                out << buffer;
                buffer.clear();
            }
        }
    }
    out << buffer;
    if (!out) throw ParseError(path, 0, "write failed");
}

}  // namespace pptopn
