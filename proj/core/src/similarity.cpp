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

#include "pptopn/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "pptopn/errors.hpp"
#include "pptopn/format.hpp"
#include "pptopn/parallel.hpp"
#include "pptopn/rng.hpp"

namespace pptopn {

std::uint64_t SimilarityMatrix::pair_key(ItemId i, ItemId j) {
    const ItemId lo = std::min(i, j);
    const ItemId hi = std::max(i, j);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

void SimilarityMatrix::set(ItemId i, ItemId j, double value) {
    if (i == j) throw ContractError("SimilarityMatrix::set: diagonal is fixed at 1");
    if (i >= n_items_ || j >= n_items_) {
        throw ContractError("SimilarityMatrix::set: item id out of range");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError("SimilarityMatrix::set: value outside [0, 1]");
    }
    entries_[pair_key(i, j)] = value;
}

double SimilarityMatrix::lookup(ItemId i, ItemId j) const {
    if (i >= n_items_ || j >= n_items_) {
        throw ContractError("SimilarityMatrix::lookup: item id out of range");
    }
    if (i == j) return 1.0;
    auto it = entries_.find(pair_key(i, j));
    return it == entries_.end() ? 0.0 : it->second;
}

std::vector<std::tuple<ItemId, ItemId, double>> SimilarityMatrix::sorted_entries() const {
    std::vector<std::pair<std::uint64_t, double>> flat(entries_.begin(), entries_.end());
    std::sort(flat.begin(), flat.end());
    std::vector<std::tuple<ItemId, ItemId, double>> out;
    out.reserve(flat.size());
    for (const auto& [key, v] : flat) {
        out.emplace_back(static_cast<ItemId>(key >> 32),
                         static_cast<ItemId>(key & 0xffffffffULL), v);
    }
    return out;
}

void SimilarityMatrix::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << "item_i,item_j,similarity\n";
    for (const auto& [i, j, v] : sorted_entries()) {
        out << i << ',' << j << ',' << format_double(v) << '\n';
    }
    if (!out) throw ParseError(path, 0, "write failed");
}

SimilarityMatrix SimilarityMatrix::read_csv(const std::string& path, std::uint32_t n_items) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    SimilarityMatrix m(n_items);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path, 0, "empty file");
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::uint32_t i, j;
        double v;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(p, end, i);
        if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',') {
            throw ParseError(path, line_no, "bad item_i column");
        }
        auto r2 = std::from_chars(r1.ptr + 1, end, j);
        if (r2.ec != std::errc() || r2.ptr == end || *r2.ptr != ',') {
            throw ParseError(path, line_no, "bad item_j column");
        }
        auto r3 = std::from_chars(r2.ptr + 1, end, v);
        if (r3.ec != std::errc() || r3.ptr != end) {
            throw ParseError(path, line_no, "bad similarity column");
        }
        m.set(i, j, v);
    }
    return m;
}

double exact_jaccard(std::span<const UserId> a, std::span<const UserId> b) {
    std::size_t inter = 0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++inter;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

SimilarityMatrix exact_similarity_matrix(const InteractionDataset& ds, unsigned threads) {
    // Intersections via per-user pair counting: for sparse data this is
    // O(sum_u |I_u|^2) instead of O(m^2 n).
    const std::size_t n = ds.n_users();
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> partials(
        std::max<unsigned>(1, threads));
    run_partitioned(n, threads, [&](std::size_t begin, std::size_t end, unsigned w) {
        auto& counts = partials[w];
        for (std::size_t u = begin; u < end; ++u) {
            const auto& l = ds.likes[u];
            for (std::size_t x = 0; x < l.size(); ++x) {
                const std::uint64_t base = static_cast<std::uint64_t>(l[x]) << 32;
                for (std::size_t y = x + 1; y < l.size(); ++y) {
                    ++counts[base | l[y]];
                }
            }
        }
    });
    auto& counts = partials[0];
    for (std::size_t w = 1; w < partials.size(); ++w) {
        for (const auto& [key, c] : partials[w]) counts[key] += c;
        partials[w].clear();
    }

    SimilarityMatrix m(ds.n_items());
    for (const auto& [key, c] : counts) {
        const auto i = static_cast<ItemId>(key >> 32);
        const auto j = static_cast<ItemId>(key & 0xffffffffULL);
        const std::size_t uni = ds.item_index[i].size() + ds.item_index[j].size() - c;
        m.set(i, j, static_cast<double>(c) / static_cast<double>(uni));
    }
    return m;
}

std::uint64_t HashFamily::function_seed(std::uint32_t l) const {
    return keyed_hash(master_seed, l);
}

std::uint64_t HashFamily::hash(std::uint32_t l, UserId u) const {
    return mix64(function_seed(l) ^ mix64(u));
}

ItemSignatures minhash_signatures(const InteractionDataset& ds,
                                  const HashFamily& family,
                                  unsigned threads) {
    if (family.k < 1) throw DomainError("minhash_signatures: k must be >= 1");
    std::vector<std::uint64_t> seeds(family.k);
    for (std::uint32_t l = 0; l < family.k; ++l) seeds[l] = family.function_seed(l);

    ItemSignatures sigs;
    sigs.k = family.k;
    sigs.rows.resize(ds.n_items());
    run_partitioned(ds.n_items(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& users = ds.item_index[i];
            if (users.empty()) continue;
            auto& row = sigs.rows[i];
            row.assign(family.k, std::numeric_limits<std::uint64_t>::max());
            for (UserId u : users) {
                const std::uint64_t mu = mix64(u);
                for (std::uint32_t l = 0; l < family.k; ++l) {
                    const std::uint64_t h = mix64(seeds[l] ^ mu);
                    if (h < row[l]) row[l] = h;
                }
            }
        }
    });
    return sigs;
}

double estimate_from_signatures(std::span<const std::uint64_t> sig_i,
                                std::span<const std::uint64_t> sig_j) {
    if (sig_i.empty() || sig_j.empty()) {
        throw EstimationError("similarity undefined for an item with no users");
    }
    if (sig_i.size() != sig_j.size()) {
        throw ContractError("estimate_from_signatures: signature length mismatch");
    }
    std::size_t equal = 0;
    for (std::size_t l = 0; l < sig_i.size(); ++l) {
        if (sig_i[l] == sig_j[l]) ++equal;
    }
    return static_cast<double>(equal) / static_cast<double>(sig_i.size());
}

std::uint64_t chernoff_k(double alpha, double delta) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw DomainError("chernoff_k: alpha must be in (0, 1/2)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw DomainError("chernoff_k: delta must be in (0, 1)");
    }
    return static_cast<std::uint64_t>(
        std::ceil((2.0 / (alpha * alpha)) * std::log(2.0 / delta)));
}

void CoocCounts::add_round(const std::vector<ItemId>& contributed) {
    ++k_rounds;
    for (std::size_t x = 0; x < contributed.size(); ++x) {
        ++item_counts.at(contributed[x]);
        const std::uint64_t base = static_cast<std::uint64_t>(contributed[x]) << 32;
        for (std::size_t y = x + 1; y < contributed.size(); ++y) {
            ++pair_counts[base | contributed[y]];
        }
    }
}

void CoocCounts::merge(const CoocCounts& other) {
    if (other.item_counts.size() != item_counts.size()) {
        throw ContractError("CoocCounts::merge: item universe mismatch");
    }
    k_rounds += other.k_rounds;
    for (std::size_t i = 0; i < item_counts.size(); ++i) {
        item_counts[i] += other.item_counts[i];
    }
    for (const auto& [key, c] : other.pair_counts) pair_counts[key] += c;
}

std::uint64_t CoocCounts::pair_count(ItemId i, ItemId j) const {
    auto it = pair_counts.find(SimilarityMatrix::pair_key(i, j));
    return it == pair_counts.end() ? 0 : it->second;
}

void CoocCounts::write_csv(const std::string& pairs_path,
                           const std::string& items_path) const {
    {
        std::ofstream out(pairs_path, std::ios::binary);
        if (!out) throw ParseError(pairs_path, 0, "cannot open file for writing");
        out << "item_i,item_j,count\n";
        std::vector<std::pair<std::uint64_t, std::uint64_t>> flat(pair_counts.begin(),
                                                                  pair_counts.end());
        std::sort(flat.begin(), flat.end());
        for (const auto& [key, c] : flat) {
            out << (key >> 32) << ',' << (key & 0xffffffffULL) << ',' << c << '\n';
        }
    }
    std::ofstream out(items_path, std::ios::binary);
    if (!out) throw ParseError(items_path, 0, "cannot open file for writing");
    out << "item,count\n";
    for (std::size_t i = 0; i < item_counts.size(); ++i) {
        out << i << ',' << item_counts[i] << '\n';
    }
}

const char* estimator_mode_name(EstimatorMode mode) {
    switch (mode) {
        case EstimatorMode::kPaperLiteral: return "paper-literal";
        case EstimatorMode::kUnionNormalized: return "union-normalized";
    }
    return "unknown";
}

SimilarityMatrix estimate_matrix_from_rounds(const CoocCounts& counts, EstimatorMode mode) {
    if (counts.k_rounds < 1) {
        throw DomainError("estimate_matrix_from_rounds: needs at least one round");
    }
    SimilarityMatrix m(counts.n_items());
    for (const auto& [key, n_ij] : counts.pair_counts) {
        const auto i = static_cast<ItemId>(key >> 32);
        const auto j = static_cast<ItemId>(key & 0xffffffffULL);
        if (mode == EstimatorMode::kPaperLiteral) {
            m.set(i, j, static_cast<double>(n_ij) / static_cast<double>(counts.k_rounds));
        } else {
            const std::uint64_t touched =
                counts.item_counts[i] + counts.item_counts[j] - n_ij;
            m.set(i, j, static_cast<double>(n_ij) / static_cast<double>(touched));
        }
    }
    return m;
}

}  // namespace pptopn
