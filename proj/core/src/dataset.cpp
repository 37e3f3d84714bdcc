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

#include "pptopn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <tuple>

#include "pptopn/errors.hpp"
#include "pptopn/rng.hpp"

namespace pptopn {
namespace {

constexpr std::uint64_t kUserSampleTag = 0x75736572;  // disjoint subsample hash keys
constexpr std::uint64_t kItemSampleTag = 0x6974656d;

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !s.empty();
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !s.empty();
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

void parse_pairs_tsv(const std::string& path, std::ifstream& in,
                     std::vector<RawRecord>& out) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;
        auto fields = split_fields(sv, '\t');
        if (fields.size() != 2 && fields.size() != 3) {
            throw ParseError(path, line_no, "expected 2 or 3 tab-separated fields");
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw ParseError(path, line_no, "empty user or item field");
        }
        double rating = 1.0;
        if (fields.size() == 3 && !parse_double(fields[2], rating)) {
            throw ParseError(path, line_no, "unparseable rating value");
        }
        out.push_back({std::string(fields[0]), std::string(fields[1]), rating});
    }
}

void parse_movielens_csv(const std::string& path, std::ifstream& in,
                         std::vector<RawRecord>& out) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path, 0, "empty file");
    ++line_no;
    auto header = split_fields(strip_cr(line), ',');
    if (header.size() < 3 || !iequals(header[0], "userId") ||
        !iequals(header[1], "movieId") || !iequals(header[2], "rating")) {
        throw ParseError(path, 1, "expected header userId,movieId,rating,timestamp");
    }
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;
        auto fields = split_fields(sv, ',');
        if (fields.size() != 4) {
            throw ParseError(path, line_no, "expected 4 comma-separated fields");
        }
        double rating;
        if (fields[0].empty() || fields[1].empty() || !parse_double(fields[2], rating)) {
            throw ParseError(path, line_no, "unparseable userId/movieId/rating");
        }
        out.push_back({std::string(fields[0]), std::string(fields[1]), rating});
    }
}

void parse_lastfm_dat(const std::string& path, std::ifstream& in,
                      std::vector<RawRecord>& out) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path, 0, "empty file");
    ++line_no;
    auto header = split_fields(strip_cr(line), '\t');
    if (header.size() != 3 || !iequals(header[0], "userID") ||
        !iequals(header[1], "artistID") || !iequals(header[2], "weight")) {
        throw ParseError(path, 1, "expected header userID<TAB>artistID<TAB>weight");
    }
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;
        auto fields = split_fields(sv, '\t');
        double weight;
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
            !parse_double(fields[2], weight)) {
            throw ParseError(path, line_no, "expected userID<TAB>artistID<TAB>weight");
        }
        out.push_back({std::string(fields[0]), std::string(fields[1]), weight});
    }
}

// One row per user: first column is the number of rated jokes, then 100
// rating columns where 99 marks "not rated". The row number is the user id
// and the column number (1-based) is the item id.
void parse_jester_csv(const std::string& path, std::ifstream& in,
                      std::vector<RawRecord>& out) {
    constexpr std::size_t kJokes = 100;
    constexpr double kUnrated = 99.0;
    std::string line;
    std::size_t line_no = 0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;
        ++row;
        auto fields = split_fields(sv, ',');
        if (fields.size() != kJokes + 1) {
            throw ParseError(path, line_no, "expected 101 comma-separated fields");
        }
        std::uint64_t rated_count;
        if (!parse_u64(fields[0], rated_count)) {
            throw ParseError(path, line_no, "unparseable rated-count column");
        }
        const std::string user = std::to_string(row);
        for (std::size_t c = 1; c <= kJokes; ++c) {
            double v;
            if (!parse_double(fields[c], v)) {
                throw ParseError(path, line_no,
                                 "unparseable rating in column " + std::to_string(c + 1));
            }
            if (v == kUnrated) continue;
            out.push_back({user, std::to_string(c), v});
        }
    }
}

}  // namespace

std::optional<RawFormat> parse_format(std::string_view name) {
    if (name == "pairs-tsv") return RawFormat::kPairsTsv;
    if (name == "movielens-csv") return RawFormat::kMovielensCsv;
    if (name == "lastfm-dat") return RawFormat::kLastfmDat;
    if (name == "jester-csv") return RawFormat::kJesterCsv;
    return std::nullopt;
}

std::string_view format_name(RawFormat fmt) {
    switch (fmt) {
        case RawFormat::kPairsTsv: return "pairs-tsv";
        case RawFormat::kMovielensCsv: return "movielens-csv";
        case RawFormat::kLastfmDat: return "lastfm-dat";
        case RawFormat::kJesterCsv: return "jester-csv";
    }
    return "unknown";
}

std::vector<RawRecord> load_raw(const std::string& path, RawFormat fmt) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::vector<RawRecord> records;
    switch (fmt) {
        case RawFormat::kPairsTsv: parse_pairs_tsv(path, in, records); break;
        case RawFormat::kMovielensCsv: parse_movielens_csv(path, in, records); break;
        case RawFormat::kLastfmDat: parse_lastfm_dat(path, in, records); break;
        case RawFormat::kJesterCsv: parse_jester_csv(path, in, records); break;
    }
    return records;
}

std::uint32_t IdMap::add(const std::string& raw) {
    auto [it, inserted] = to_dense_.try_emplace(raw, size());
    if (inserted) to_raw_.push_back(raw);
    return it->second;
}

std::optional<std::uint32_t> IdMap::find(std::string_view raw) const {
    auto it = to_dense_.find(std::string(raw));
    if (it == to_dense_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t InteractionDataset::n_likes() const {
    std::uint64_t total = 0;
    for (const auto& l : likes) total += l.size();
    return total;
}

InteractionDataset binarize(const std::vector<RawRecord>& records) {
    if (records.empty()) throw ContractError("binarize: empty record set");
    InteractionDataset ds;
    for (const auto& rec : records) {
        UserId u = ds.users.add(rec.user);
        ItemId i = ds.items.add(rec.item);
        if (u >= ds.likes.size()) ds.likes.resize(u + 1);
        ds.likes[u].push_back(i);
    }
    for (auto& l : ds.likes) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    ds.item_index.resize(ds.n_items());
    for (UserId u = 0; u < ds.likes.size(); ++u) {
        for (ItemId i : ds.likes[u]) ds.item_index[i].push_back(u);
    }
    return ds;
}

DatasetStats stats(const InteractionDataset& ds) {
    DatasetStats s;
    s.n_users = ds.n_users();
    s.n_items = ds.n_items();
    s.n_likes = ds.n_likes();
    const double cells = static_cast<double>(s.n_users) * static_cast<double>(s.n_items);
    s.density = cells > 0 ? static_cast<double>(s.n_likes) / cells : 0.0;
    return s;
}

SplitPair split_train_test(const InteractionDataset& ds, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw DomainError("split_train_test: ratio must be in (0, 1)");
    }
    SplitPair out;
    out.seed = seed;
    out.ratio = ratio;
    for (InteractionDataset* side : {&out.train, &out.test}) {
        side->users = ds.users;
        side->items = ds.items;
        side->likes.resize(ds.n_users());
        side->item_index.resize(ds.n_items());
    }
    for (UserId u = 0; u < ds.likes.size(); ++u) {
        for (ItemId i : ds.likes[u]) {
            const bool to_train = to_unit_double(keyed_hash(seed, u, i)) < ratio;
            InteractionDataset& side = to_train ? out.train : out.test;
            side.likes[u].push_back(i);
            side.item_index[i].push_back(u);
        }
    }
    return out;
}

std::vector<RawRecord> to_records(const InteractionDataset& ds) {
    std::vector<RawRecord> out;
    out.reserve(ds.n_likes());
    for (UserId u = 0; u < ds.likes.size(); ++u) {
        for (ItemId i : ds.likes[u]) {
            out.push_back({ds.users.raw(u), ds.items.raw(i), 1.0});
        }
    }
    return out;
}

namespace {

// Keeps the `limit` keys with the smallest seeded hash; first appearance
// breaks hash ties.
std::unordered_map<std::string, bool> select_keys(
    const std::vector<RawRecord>& records, bool by_user, std::uint32_t limit,
    std::uint64_t sample_key) {
    std::vector<std::string> order;
    std::unordered_map<std::string, bool> keep;
    for (const auto& rec : records) {
        const std::string& key = by_user ? rec.user : rec.item;
        if (keep.try_emplace(key, true).second) order.push_back(key);
    }
    if (limit == 0 || keep.size() <= limit) return keep;
    std::vector<std::tuple<std::uint64_t, std::size_t>> ranked(order.size());
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        ranked[idx] = {keyed_string_hash(sample_key, order[idx]), idx};
    }
    std::sort(ranked.begin(), ranked.end());
    for (auto& [key, flag] : keep) flag = false;
    for (std::size_t r = 0; r < limit; ++r) {
        keep[order[std::get<1>(ranked[r])]] = true;
    }
    return keep;
}

}  // namespace

std::vector<RawRecord> subsample_records(const std::vector<RawRecord>& records,
                                         std::uint32_t max_users,
                                         std::uint32_t max_items,
                                         std::uint64_t seed) {
    std::vector<RawRecord> current = records;
    if (max_users > 0) {
        auto keep = select_keys(current, /*by_user=*/true, max_users,
                                keyed_hash(seed, kUserSampleTag));
        std::vector<RawRecord> filtered;
        filtered.reserve(current.size());
        for (auto& rec : current) {
            if (keep.at(rec.user)) filtered.push_back(std::move(rec));
        }
        current = std::move(filtered);
    }
    if (max_items > 0) {
        auto keep = select_keys(current, /*by_user=*/false, max_items,
                                keyed_hash(seed, kItemSampleTag));
        std::vector<RawRecord> filtered;
        filtered.reserve(current.size());
        for (auto& rec : current) {
            if (keep.at(rec.item)) filtered.push_back(std::move(rec));
        }
        current = std::move(filtered);
    }
    return current;
}

void write_pairs_tsv(const InteractionDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    for (UserId u = 0; u < ds.likes.size(); ++u) {
        for (ItemId i : ds.likes[u]) {
            out << ds.users.raw(u) << '\t' << ds.items.raw(i) << '\n';
        }
    }
    if (!out) throw ParseError(path, 0, "write failed");
}

}  // namespace pptopn
