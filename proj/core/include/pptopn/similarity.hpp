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
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pptopn/dataset.hpp"

namespace pptopn {

/// Sparse symmetric item-pair similarity store. Entries are keyed on the
/// unordered pair (min id, max id); absent pairs read as 0 and the diagonal
/// reads as 1. All stored values are in [0, 1].
class SimilarityMatrix {
public:
    explicit SimilarityMatrix(std::uint32_t n_items) : n_items_(n_items) {}

    static std::uint64_t pair_key(ItemId i, ItemId j);

    std::uint32_t n_items() const { return n_items_; }
    std::size_t n_entries() const { return entries_.size(); }

    void set(ItemId i, ItemId j, double value);
    double lookup(ItemId i, ItemId j) const;

    const std::unordered_map<std::uint64_t, double>& entries() const { return entries_; }

    /// Entries as (i, j, value) with i < j, sorted by (i, j).
    std::vector<std::tuple<ItemId, ItemId, double>> sorted_entries() const;

    /// CSV export "item_i,item_j,similarity", sorted, 10 significant digits.
    /// This file is the contract between the similarity stage and the
    /// recommender stage.
    void write_csv(const std::string& path) const;
    static SimilarityMatrix read_csv(const std::string& path, std::uint32_t n_items);

private:
    std::uint32_t n_items_;
    std::unordered_map<std::uint64_t, double> entries_;
};

/// |a ∩ b| / |a ∪ b| over sorted id sets; 0 when both are empty.
double exact_jaccard(std::span<const UserId> a, std::span<const UserId> b);

/// Exact Jaccard similarity for every item pair with non-empty intersection.
/// Work may be partitioned across `threads`; the result is identical to the
/// single-threaded computation.
SimilarityMatrix exact_similarity_matrix(const InteractionDataset& ds,
                                         unsigned threads = 1);

/// A family of k seeded hash functions over user ids. Function l is the
/// keyed avalanche mix under a seed derived from (master_seed, l).
struct HashFamily {
    std::uint32_t k = 0;
    std::uint64_t master_seed = 0;

    std::uint64_t function_seed(std::uint32_t l) const;
    std::uint64_t hash(std::uint32_t l, UserId u) const;
};

/// Per-item MinHash signatures: signature[i][l] = min over u in U_i of
/// hash_l(u). Items with an empty user set carry an empty signature.
struct ItemSignatures {
    std::uint32_t k = 0;
    std::vector<std::vector<std::uint64_t>> rows;

    bool empty_item(ItemId i) const { return rows.at(i).empty(); }
};

ItemSignatures minhash_signatures(const InteractionDataset& ds,
                                  const HashFamily& family,
                                  unsigned threads = 1);

/// Fraction of positions where the two signatures collide. Throws
/// EstimationError when either signature is empty (similarity undefined) and
/// ContractError on length mismatch.
double estimate_from_signatures(std::span<const std::uint64_t> sig_i,
                                std::span<const std::uint64_t> sig_j);

/// Hash-count sizing k = ceil((2/alpha^2) ln(2/delta)), valid for
/// alpha in (0, 1/2) and delta in (0, 1).
std::uint64_t chernoff_k(double alpha, double delta);

/// Round co-occurrence state: pair_counts[(i,j)] is the number of delivered
/// rounds whose contributed set contained both i and j, item_counts[i] the
/// number containing i, k_rounds the number of delivered rounds.
struct CoocCounts {
    std::uint64_t k_rounds = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
    std::vector<std::uint64_t> item_counts;

    explicit CoocCounts(std::uint32_t n_items = 0) : item_counts(n_items, 0) {}

    std::uint32_t n_items() const { return static_cast<std::uint32_t>(item_counts.size()); }

    /// Applies one delivered round's contributed set (sorted, unique ids).
    void add_round(const std::vector<ItemId>& contributed);

    /// Associative, commutative merge of counts from disjoint round subsets.
    void merge(const CoocCounts& other);

    std::uint64_t pair_count(ItemId i, ItemId j) const;

    /// CSV exports: pair counts "item_i,item_j,count" (sorted) and item
    /// occurrence counts "item,count".
    void write_csv(const std::string& pairs_path, const std::string& items_path) const;
};

enum class EstimatorMode {
    kPaperLiteral,      // n_{i,j} / k_rounds
    kUnionNormalized,   // n_{i,j} / (c_i + c_j - n_{i,j})
};

const char* estimator_mode_name(EstimatorMode mode);

/// Similarity matrix from protocol round counts. Paper-literal divides pair
/// counts by the number of rounds; union-normalized divides by the number of
/// rounds that touched either item, which is the MinHash collision view of
/// the round log. Throws DomainError when no rounds completed.
SimilarityMatrix estimate_matrix_from_rounds(const CoocCounts& counts, EstimatorMode mode);

}  // namespace pptopn
