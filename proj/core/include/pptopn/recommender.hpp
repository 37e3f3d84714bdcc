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
#include <utility>
#include <vector>

#include "pptopn/dataset.hpp"
#include "pptopn/similarity.hpp"

namespace pptopn {

// Prediction consumes only the target user's own likes and the published
// similarity matrix, never other users' data, so it can run entirely on the
// client.

struct ScoredItem {
    ItemId item = 0;
    double score = 0.0;

    bool operator==(const ScoredItem&) const = default;
};

/// Ranked output for one user: scores non-increasing, ties broken by
/// ascending item id, no train-set likes included.
struct RecommendationList {
    UserId user = 0;
    std::uint32_t n_requested = 0;
    std::vector<ScoredItem> items;

    bool operator==(const RecommendationList&) const = default;
};

/// Binary-rating prediction: sum of similarities between the candidate and
/// every liked item, accumulated in ascending liked-item order. Throws
/// ContractError when the candidate is already liked.
double predict_binary(const std::vector<ItemId>& user_likes,
                      const SimilarityMatrix& sims, ItemId candidate);

/// Weighted-average prediction over explicit ratings. Returns nullopt when
/// the candidate has zero similarity mass over the rated items (prediction
/// undefined; callers fall back to score 0 and rank last).
std::optional<double> predict_weighted(
    const std::vector<std::pair<ItemId, double>>& user_ratings,
    const SimilarityMatrix& sims, ItemId candidate);

/// Adjacency view of a similarity matrix: per item, its positive-similarity
/// neighbors sorted by id. Buildable once and shared across users; top_n
/// through the index is bit-identical to scoring through the matrix.
class ItemNeighborIndex {
public:
    explicit ItemNeighborIndex(const SimilarityMatrix& sims);

    std::uint32_t n_items() const { return static_cast<std::uint32_t>(neighbors_.size()); }
    const std::vector<ScoredItem>& neighbors(ItemId i) const { return neighbors_.at(i); }

private:
    std::vector<std::vector<ScoredItem>> neighbors_;
};

struct TopNOptions {
    /// Pad the list with zero-score candidates (ordered by id) when fewer
    /// than N candidates score positive.
    bool pad_with_zero_scores = true;
};

/// Scores every candidate outside user_likes with predict_binary and returns
/// the N best by (score desc, id asc). Candidates inside user_likes are
/// skipped. Requires N >= 1.
RecommendationList top_n(UserId user, const std::vector<ItemId>& user_likes,
                         const SimilarityMatrix& sims, std::uint32_t n,
                         const std::vector<ItemId>& candidates,
                         TopNOptions options = {});

RecommendationList top_n(UserId user, const std::vector<ItemId>& user_likes,
                         const ItemNeighborIndex& index, std::uint32_t n,
                         const std::vector<ItemId>& candidates,
                         TopNOptions options = {});

/// The default candidate universe: all items except the user's likes.
std::vector<ItemId> all_items_except(const std::vector<ItemId>& user_likes,
                                     std::uint32_t n_items);

/// CSV export "user,rank,item,score" (rank is 1-based).
void write_recommendations_csv(const std::vector<RecommendationList>& lists,
                               const std::string& path);

}  // namespace pptopn
