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
#include <random>

#include "gtest/gtest.h"
#include "pptopn/errors.hpp"
#include "testing/oracles.hpp"
#include "testing/tempfile.hpp"

namespace pptopn {
namespace {

using testing::oracle_top_n;
using testing::random_dataset;

SimilarityMatrix tiny_matrix() {
    SimilarityMatrix m(4);
    m.set(3, 1, 0.2);
    m.set(3, 2, 0.5);
    return m;
}

TEST(PredictBinary, SumsSimilaritiesOverLikes) {
    const auto m = tiny_matrix();
    EXPECT_DOUBLE_EQ(predict_binary({1, 2}, m, 3), 0.7);
}

TEST(PredictBinary, EmptyLikesScoreZero) {
    const auto m = tiny_matrix();
    EXPECT_DOUBLE_EQ(predict_binary({}, m, 3), 0.0);
}

TEST(PredictBinary, LikedCandidateRejected) {
    const auto m = tiny_matrix();
    EXPECT_THROW(predict_binary({1, 3}, m, 3), ContractError);
}

TEST(PredictBinary, MatchesBruteForceRecomputationFromRawSets) {
    const auto ds = random_dataset(30, 15, 0.3, 9);
    const auto sims = exact_similarity_matrix(ds);
    const auto users = pptopn::testing::oracle_item_users(ds);
    for (UserId u = 0; u < 10; ++u) {
        const auto& likes = ds.likes[u];
        for (ItemId c = 0; c < ds.n_items(); ++c) {
            if (std::binary_search(likes.begin(), likes.end(), c)) continue;
            double expected = 0.0;
            for (ItemId j : likes) {
                expected += pptopn::testing::oracle_jaccard(users[c], users[j]);
            }
            EXPECT_NEAR(predict_binary(likes, sims, c), expected, 1e-12);
        }
    }
}

TEST(PredictWeighted, ConstantRatingsGiveConstantPrediction) {
    const auto m = tiny_matrix();
    const auto p = predict_weighted({{1, 1.0}, {2, 1.0}}, m, 3);
    ASSERT_TRUE(p.has_value());
    EXPECT_DOUBLE_EQ(*p, 1.0);
}

TEST(PredictWeighted, WeightedAverage) {
    SimilarityMatrix m(4);
    m.set(3, 1, 0.5);
    m.set(3, 2, 0.5);
    const auto p = predict_weighted({{1, 2.0}, {2, 4.0}}, m, 3);
    ASSERT_TRUE(p.has_value());
    EXPECT_DOUBLE_EQ(*p, 3.0);
}

TEST(PredictWeighted, ZeroSimilarityMassIsUndefined) {
    SimilarityMatrix m(4);
    EXPECT_FALSE(predict_weighted({{1, 2.0}, {2, 4.0}}, m, 3).has_value());
}

TEST(TopN, TiesBrokenByAscendingItemId) {
    SimilarityMatrix m(4);
    m.set(0, 1, 0.7);
    m.set(0, 2, 0.7);
    m.set(0, 3, 0.1);
    const auto rec = top_n(0, {0}, m, 2, {1, 2, 3});
    ASSERT_EQ(rec.items.size(), 2u);
    EXPECT_EQ(rec.items[0].item, 1u);
    EXPECT_EQ(rec.items[1].item, 2u);
    EXPECT_DOUBLE_EQ(rec.items[0].score, 0.7);
}

TEST(TopN, TruncationWhenFewerCandidatesThanN) {
    SimilarityMatrix m(3);
    m.set(0, 1, 0.4);
    const auto rec = top_n(0, {0}, m, 10, {1, 2});
    EXPECT_EQ(rec.items.size(), 2u);
    EXPECT_EQ(rec.n_requested, 10u);
    EXPECT_EQ(rec.items[0].item, 1u);
    EXPECT_EQ(rec.items[1].item, 2u);
    EXPECT_DOUBLE_EQ(rec.items[1].score, 0.0);
}

TEST(TopN, PaddingFlagOffDropsZeroScores) {
    SimilarityMatrix m(3);
    m.set(0, 1, 0.4);
    const auto rec = top_n(0, {0}, m, 10, {1, 2}, {.pad_with_zero_scores = false});
    ASSERT_EQ(rec.items.size(), 1u);
    EXPECT_EQ(rec.items[0].item, 1u);
}

TEST(TopN, LikedCandidatesAreSkippedNotScored) {
    SimilarityMatrix m(3);
    m.set(0, 1, 0.4);
    const auto rec = top_n(0, {0}, m, 3, {0, 1, 2});
    ASSERT_EQ(rec.items.size(), 2u);
    EXPECT_EQ(rec.items[0].item, 1u);
}

TEST(TopN, MatchesBruteForceEnumerationOnSmallInstances) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto ds = random_dataset(25, 18, 0.25, 100 + seed);
        const auto sims = exact_similarity_matrix(ds);
        const ItemNeighborIndex index(sims);
        for (UserId u = 0; u < 6; ++u) {
            const auto candidates = all_items_except(ds.likes[u], ds.n_items());
            const auto rec = top_n(u, ds.likes[u], index, 5, candidates);
            const auto expected = oracle_top_n(ds, u, 5);
            std::vector<ItemId> got;
            for (const auto& s : rec.items) got.push_back(s.item);
            EXPECT_EQ(got, expected) << "seed " << seed << " user " << u;
        }
    }
}

TEST(TopN, OutputIndependentOfCandidateOrder) {
    const auto ds = random_dataset(20, 12, 0.3, 55);
    const auto sims = exact_similarity_matrix(ds);
    auto candidates = all_items_except(ds.likes[2], ds.n_items());
    const auto a = top_n(2, ds.likes[2], sims, 4, candidates);
    std::mt19937_64 eng(1);
    std::shuffle(candidates.begin(), candidates.end(), eng);
    const auto b = top_n(2, ds.likes[2], sims, 4, candidates);
    EXPECT_EQ(a, b);
}

TEST(TopN, IndexPathBitIdenticalToMatrixPath) {
    const auto ds = random_dataset(40, 25, 0.2, 77);
    const auto sims = exact_similarity_matrix(ds);
    const ItemNeighborIndex index(sims);
    for (UserId u = 0; u < 12; ++u) {
        const auto candidates = all_items_except(ds.likes[u], ds.n_items());
        const auto direct = top_n(u, ds.likes[u], sims, 7, candidates);
        const auto indexed = top_n(u, ds.likes[u], index, 7, candidates);
        ASSERT_EQ(direct.items.size(), indexed.items.size());
        for (std::size_t r = 0; r < direct.items.size(); ++r) {
            EXPECT_EQ(direct.items[r].item, indexed.items[r].item);
            EXPECT_EQ(direct.items[r].score, indexed.items[r].score);  // bitwise
        }
    }
}

TEST(TopN, AddingPositiveLikeNeverDecreasesScore) {
    const auto ds = random_dataset(30, 15, 0.3, 31);
    const auto sims = exact_similarity_matrix(ds);
    const std::vector<ItemId> likes{1, 4};
    for (ItemId extra : {ItemId{7}, ItemId{9}}) {
        std::vector<ItemId> more = likes;
        more.push_back(extra);
        std::sort(more.begin(), more.end());
        for (ItemId c = 0; c < ds.n_items(); ++c) {
            if (std::binary_search(more.begin(), more.end(), c)) continue;
            EXPECT_GE(predict_binary(more, sims, c) + 1e-15,
                      predict_binary(likes, sims, c));
        }
    }
}

TEST(TopN, RankingInvariantUnderPositiveScaling) {
    const auto ds = random_dataset(30, 15, 0.3, 13);
    const auto sims = exact_similarity_matrix(ds);
    // Power-of-two scaling is exact, so ordering must match bit for bit.
    SimilarityMatrix scaled(sims.n_items());
    for (const auto& [i, j, v] : sims.sorted_entries()) scaled.set(i, j, v / 4.0);
    for (UserId u = 0; u < 8; ++u) {
        const auto candidates = all_items_except(ds.likes[u], ds.n_items());
        const auto a = top_n(u, ds.likes[u], sims, 6, candidates);
        const auto b = top_n(u, ds.likes[u], scaled, 6, candidates);
        ASSERT_EQ(a.items.size(), b.items.size());
        for (std::size_t r = 0; r < a.items.size(); ++r) {
            EXPECT_EQ(a.items[r].item, b.items[r].item);
        }
    }
}

TEST(TopN, NMustBePositive) {
    SimilarityMatrix m(2);
    EXPECT_THROW(top_n(0, {}, m, 0, {0, 1}), DomainError);
}

TEST(AllItemsExcept, ExcludesExactlyTheLikes) {
    const auto out = all_items_except({1, 3}, 5);
    EXPECT_EQ(out, (std::vector<ItemId>{0, 2, 4}));
    EXPECT_EQ(all_items_except({}, 3), (std::vector<ItemId>{0, 1, 2}));
    EXPECT_TRUE(all_items_except({0, 1}, 2).empty());
}

TEST(RecommendationExport, CsvSchemaAndRanks) {
    RecommendationList list;
    list.user = 3;
    list.n_requested = 2;
    list.items = {{7, 0.25}, {1, 0.125}};
    const auto path = pptopn::testing::temp_path("recs.csv");
    write_recommendations_csv({list}, path);
    EXPECT_EQ(pptopn::testing::read_file(path),
              "user,rank,item,score\n3,1,7,0.25\n3,2,1,0.125\n");
}

}  // namespace
}  // namespace pptopn
