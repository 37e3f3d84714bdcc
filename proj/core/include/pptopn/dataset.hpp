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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pptopn {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

/// One raw interaction as read from disk, before binarization.
struct RawRecord {
    std::string user;
    std::string item;
    double rating = 1.0;
};

enum class RawFormat {
    kPairsTsv,       // rawUser<TAB>rawItem[<TAB>rating]
    kMovielensCsv,   // header userId,movieId,rating,timestamp
    kLastfmDat,      // header userID<TAB>artistID<TAB>weight
    kJesterCsv,      // one row per user: count, then 100 ratings, 99 = unrated
};

std::optional<RawFormat> parse_format(std::string_view name);
std::string_view format_name(RawFormat fmt);

/// Reads raw rating records. Throws ParseError naming the line on malformed
/// input, and on unreadable paths.
std::vector<RawRecord> load_raw(const std::string& path, RawFormat fmt);

/// Bijection between raw string ids and dense ids assigned in
/// first-appearance order.
class IdMap {
public:
    std::uint32_t add(const std::string& raw);  // returns existing id if known
    std::optional<std::uint32_t> find(std::string_view raw) const;
    const std::string& raw(std::uint32_t dense) const { return to_raw_.at(dense); }
    std::uint32_t size() const { return static_cast<std::uint32_t>(to_raw_.size()); }

    bool operator==(const IdMap& other) const { return to_raw_ == other.to_raw_; }

private:
    std::vector<std::string> to_raw_;
    std::unordered_map<std::string, std::uint32_t> to_dense_;
};

/// Immutable binary like-relation with both orientations materialized:
/// `likes[u]` is the item set I_u, `item_index[i]` is the user set U_i.
/// Both are sorted and exact transposes of each other.
struct InteractionDataset {
    std::vector<std::vector<ItemId>> likes;
    std::vector<std::vector<UserId>> item_index;
    IdMap users;
    IdMap items;

    std::uint32_t n_users() const { return users.size(); }
    std::uint32_t n_items() const { return items.size(); }
    std::uint64_t n_likes() const;

    const std::vector<ItemId>& user_likes(UserId u) const { return likes.at(u); }
    const std::vector<UserId>& item_users(ItemId i) const { return item_index.at(i); }

    bool operator==(const InteractionDataset& other) const = default;
};

struct DatasetStats {
    std::uint64_t n_users = 0;
    std::uint64_t n_items = 0;
    std::uint64_t n_likes = 0;
    double density = 0.0;  // n_likes / (n_users * n_items)
};

/// Collapses records to binary likes. Any rating value counts as a like;
/// duplicates collapse; dense ids follow first appearance. Throws
/// ContractError on an empty record set.
InteractionDataset binarize(const std::vector<RawRecord>& records);

DatasetStats stats(const InteractionDataset& ds);

struct SplitPair {
    InteractionDataset train;
    InteractionDataset test;
    std::uint64_t seed = 0;
    double ratio = 0.0;
};

/// Assigns each like independently to train with probability `ratio`, driven
/// solely by `seed`. Train and test keep the source id space, so users with
/// an empty train set are retained. Throws DomainError unless 0 < ratio < 1.
SplitPair split_train_test(const InteractionDataset& ds, double ratio, std::uint64_t seed);

/// Dataset back to like records (rating 1), in dense-id order.
std::vector<RawRecord> to_records(const InteractionDataset& ds);

/// Deterministic raw-id subsample: keeps the `max_users` distinct users (and
/// then `max_items` items) with the smallest seeded hash of their raw id.
/// 0 means no limit on that axis.
std::vector<RawRecord> subsample_records(const std::vector<RawRecord>& records,
                                         std::uint32_t max_users,
                                         std::uint32_t max_items,
                                         std::uint64_t seed);

/// Canonical interchange export: binarized likes as pairs-tsv, dense order.
void write_pairs_tsv(const InteractionDataset& ds, const std::string& path);

}  // namespace pptopn
