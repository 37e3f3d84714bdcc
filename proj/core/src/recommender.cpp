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

#include "pptopn/recommender.hpp"

#include <algorithm>
#include <fstream>

#include "pptopn/errors.hpp"
#include "pptopn/format.hpp"

namespace pptopn {
namespace {

bool contains(const std::vector<ItemId>& sorted_ids, ItemId x) {
    return std::binary_search(sorted_ids.begin(), sorted_ids.end(), x);
}

// (score desc, id asc); scores carry no NaNs by construction.
bool ranked_before(const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
}

RecommendationList select_top(UserId user, std::uint32_t n,
                              std::vector<ScoredItem>&& scored,
                              const TopNOptions& options) {
    if (!options.pad_with_zero_scores) {
        std::erase_if(scored, [](const ScoredItem& s) { return s.score <= 0.0; });
    }
    const std::size_t take = std::min<std::size_t>(n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), ranked_before);
    scored.resize(take);
    return {user, n, std::move(scored)};
}

}  // namespace

double predict_binary(const std::vector<ItemId>& user_likes,
                      const SimilarityMatrix& sims, ItemId candidate) {
    if (contains(user_likes, candidate)) {
        throw ContractError("predict_binary: candidate is already liked");
    }
    double score = 0.0;
    for (ItemId j : user_likes) score += sims.lookup(candidate, j);
    return score;
}

std::optional<double> predict_weighted(
    const std::vector<std::pair<ItemId, double>>& user_ratings,
    const SimilarityMatrix& sims, ItemId candidate) {
    double mass = 0.0;
    double weighted = 0.0;
    for (const auto& [item, rating] : user_ratings) {
        if (item == candidate) {
            throw ContractError("predict_weighted: candidate is already rated");
        }
        const double s = sims.lookup(candidate, item);
        mass += s;
        weighted += rating * s;
    }
    if (mass <= 0.0) return std::nullopt;
    return weighted / mass;
}

ItemNeighborIndex::ItemNeighborIndex(const SimilarityMatrix& sims)
    : neighbors_(sims.n_items()) {
    for (const auto& [i, j, v] : sims.sorted_entries()) {
        if (v <= 0.0) continue;
        neighbors_[i].push_back({j, v});
        neighbors_[j].push_back({i, v});
    }
    for (auto& row : neighbors_) {
        std::sort(row.begin(), row.end(),
                  [](const ScoredItem& a, const ScoredItem& b) { return a.item < b.item; });
    }
}

RecommendationList top_n(UserId user, const std::vector<ItemId>& user_likes,
                         const SimilarityMatrix& sims, std::uint32_t n,
                         const std::vector<ItemId>& candidates, TopNOptions options) {
    if (n < 1) throw DomainError("top_n: N must be >= 1");
    std::vector<ScoredItem> scored;
    scored.reserve(candidates.size());
    for (ItemId c : candidates) {
        if (contains(user_likes, c)) continue;
        scored.push_back({c, predict_binary(user_likes, sims, c)});
    }
    return select_top(user, n, std::move(scored), options);
}

RecommendationList top_n(UserId user, const std::vector<ItemId>& user_likes,
                         const ItemNeighborIndex& index, std::uint32_t n,
                         const std::vector<ItemId>& candidates, TopNOptions options) {
    if (n < 1) throw DomainError("top_n: N must be >= 1");
    // Accumulate per candidate in ascending liked-item order: each score cell
    // receives exactly the additions of the definitional sum, in the same
    // order, so results are bit-identical to the matrix overload.
    std::vector<double> score(index.n_items(), 0.0);
    for (ItemId j : user_likes) {
        for (const ScoredItem& nb : index.neighbors(j)) score[nb.item] += nb.score;
    }
    std::vector<ScoredItem> scored;
    scored.reserve(candidates.size());
    for (ItemId c : candidates) {
        if (contains(user_likes, c)) continue;
        scored.push_back({c, score.at(c)});
    }
    return select_top(user, n, std::move(scored), options);
}

std::vector<ItemId> all_items_except(const std::vector<ItemId>& user_likes,
                                     std::uint32_t n_items) {
    std::vector<ItemId> out;
    out.reserve(n_items - std::min<std::size_t>(user_likes.size(), n_items));
    std::size_t next_liked = 0;
    for (ItemId i = 0; i < n_items; ++i) {
        if (next_liked < user_likes.size() && user_likes[next_liked] == i) {
            ++next_liked;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

void write_recommendations_csv(const std::vector<RecommendationList>& lists,
                               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << "user,rank,item,score\n";
    for (const auto& list : lists) {
        for (std::size_t r = 0; r < list.items.size(); ++r) {
            out << list.user << ',' << (r + 1) << ',' << list.items[r].item << ','
                << format_double(list.items[r].score) << '\n';
        }
    }
    if (!out) throw ParseError(path, 0, "write failed");
}

}  // namespace pptopn
