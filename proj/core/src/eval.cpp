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

#include "pptopn/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pptopn/errors.hpp"
#include "pptopn/format.hpp"
#include "pptopn/parallel.hpp"
#include "pptopn/recommender.hpp"
#include "pptopn/rng.hpp"
#include "pptopn/stats.hpp"

namespace pptopn {
namespace {

constexpr std::uint64_t kWalkSeedTag = 0x70726f746f636f6cULL;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0, Clock::time_point t1) {
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

// Keeps a computed result alive so timed calls are not elided.
template <typename T>
void escape(const T& value) {
    asm volatile("" : : "g"(&value) : "memory");
}

struct PrecisionOutcome {
    double mean = 0.0;
    std::uint64_t evaluated = 0;
    std::uint64_t skipped = 0;
    std::uint64_t cold_start = 0;
};

PrecisionOutcome evaluate_precision(const SplitPair& split, const ItemNeighborIndex& index,
                                    std::uint32_t n, bool exclude_cold_start,
                                    unsigned threads) {
    const std::uint32_t n_users = split.train.n_users();
    const std::uint32_t n_items = split.train.n_items();
    // Per-user slots keep the reduction independent of scheduling.
    std::vector<double> precision(n_users, 0.0);
    std::vector<std::uint8_t> state(n_users, 0);   // 0 skipped, 1 evaluated
    std::vector<std::uint8_t> cold(n_users, 0);    // empty train set
    run_partitioned(n_users, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t u = begin; u < end; ++u) {
            const auto& train_likes = split.train.likes[u];
            if (train_likes.empty()) cold[u] = 1;
            if (exclude_cold_start && train_likes.empty()) continue;
            const auto candidates = all_items_except(train_likes, n_items);
            if (candidates.empty()) continue;
            const auto rec =
                top_n(static_cast<UserId>(u), train_likes, index, n, candidates);
            std::vector<ItemId> rec_items;
            rec_items.reserve(rec.items.size());
            for (const auto& s : rec.items) rec_items.push_back(s.item);
            const auto p = precision_at_n(rec_items, split.test.likes[u]);
            if (!p) continue;
            precision[u] = *p;
            state[u] = 1;
        }
    });
    PrecisionOutcome out;
    double sum = 0.0;
    for (std::uint32_t u = 0; u < n_users; ++u) {
        if (cold[u]) ++out.cold_start;
        if (state[u]) {
            sum += precision[u];
            ++out.evaluated;
        } else {
            ++out.skipped;
        }
    }
    out.mean = out.evaluated ? sum / static_cast<double>(out.evaluated) : 0.0;
    return out;
}

}  // namespace

std::optional<double> precision_at_n(const std::vector<ItemId>& recommended,
                                     const std::vector<ItemId>& test_likes) {
    if (recommended.empty()) return std::nullopt;
    std::size_t hits = 0;
    for (ItemId i : recommended) {
        if (std::binary_search(test_likes.begin(), test_likes.end(), i)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(recommended.size());
}

std::optional<double> precision_loss_pct(double pp_precision, double baseline_precision) {
    if (baseline_precision <= 0.0) return std::nullopt;
    return 100.0 * (baseline_precision - pp_precision) / baseline_precision;
}

AEStats::AEStats(std::vector<double> alphas)
    : alphas_(std::move(alphas)), alpha_counts_(alphas_.size(), 0), bins_(kBins, 0) {}

void AEStats::add(double ae) {
    ae = std::clamp(ae, 0.0, 1.0);
    ++samples_;
    sum_ += ae;
    max_ = std::max(max_, ae);
    for (std::size_t a = 0; a < alphas_.size(); ++a) {
        if (ae <= alphas_[a]) ++alpha_counts_[a];
    }
    const auto bin = std::min<std::size_t>(
        kBins - 1, static_cast<std::size_t>(ae * static_cast<double>(kBins)));
    ++bins_[bin];
}

void AEStats::merge(const AEStats& other) {
    if (other.alphas_ != alphas_) throw ContractError("AEStats::merge: alpha mismatch");
    samples_ += other.samples_;
    sum_ += other.sum_;
    max_ = std::max(max_, other.max_);
    for (std::size_t a = 0; a < alpha_counts_.size(); ++a) {
        alpha_counts_[a] += other.alpha_counts_[a];
    }
    for (std::size_t b = 0; b < kBins; ++b) bins_[b] += other.bins_[b];
}

double AEStats::mean() const {
    return samples_ ? sum_ / static_cast<double>(samples_) : 0.0;
}

double AEStats::quantile(double q) const {
    if (samples_ == 0) return 0.0;
    const double target = q * static_cast<double>(samples_);
    std::uint64_t cum = 0;
    for (std::size_t b = 0; b < kBins; ++b) {
        cum += bins_[b];
        if (static_cast<double>(cum) >= target) {
            return static_cast<double>(b + 1) / static_cast<double>(kBins);
        }
    }
    return 1.0;
}

double AEStats::coverage(double alpha) const {
    for (std::size_t a = 0; a < alphas_.size(); ++a) {
        if (alphas_[a] == alpha) {
            return samples_ ? static_cast<double>(alpha_counts_[a]) /
                                  static_cast<double>(samples_)
                            : 0.0;
        }
    }
    throw ContractError("AEStats::coverage: alpha was not tracked");
}

void AEStats::write_histogram_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << "bin_low,bin_high,count\n";
    for (std::size_t b = 0; b < kBins; ++b) {
        if (bins_[b] == 0) continue;
        out << format_double(static_cast<double>(b) / kBins) << ','
            << format_double(static_cast<double>(b + 1) / kBins) << ',' << bins_[b]
            << '\n';
    }
}

AEStats ae_statistics(const SimilarityMatrix& estimated, const SimilarityMatrix& exact,
                      const std::vector<double>& alphas) {
    if (estimated.n_items() != exact.n_items()) {
        throw ContractError("ae_statistics: item universes differ");
    }
    std::vector<std::uint64_t> keys;
    keys.reserve(estimated.n_entries() + exact.n_entries());
    for (const auto& [key, v] : estimated.entries()) keys.push_back(key);
    for (const auto& [key, v] : exact.entries()) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    AEStats stats(alphas);
    const auto& est = estimated.entries();
    const auto& exa = exact.entries();
    for (std::uint64_t key : keys) {
        auto ei = est.find(key);
        auto xi = exa.find(key);
        const double e = ei == est.end() ? 0.0 : ei->second;
        const double x = xi == exa.end() ? 0.0 : xi->second;
        stats.add(std::abs(e - x));
    }
    return stats;
}

double theorem2_delta(std::uint64_t k, double alpha) {
    return 2.0 * std::exp(-static_cast<double>(k) * alpha * alpha / 2.0);
}

double theorem2_bound(std::uint64_t k, double alpha) {
    return std::max(0.0, 1.0 - theorem2_delta(k, alpha));
}

double time_ibtn_similarity_stage(const InteractionDataset& train, unsigned threads,
                                  int reps) {
    if (reps < 3) throw ContractError("time_ibtn_similarity_stage: reps must be >= 3");
    escape(exact_similarity_matrix(train, threads));  // warm-up
    std::vector<double> ms;
    ms.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        const auto m = exact_similarity_matrix(train, threads);
        const auto t1 = Clock::now();
        escape(m);
        ms.push_back(elapsed_ms(t0, t1));
    }
    return median(std::move(ms));
}

double time_ppibtn_similarity_stage(const Population& pop, const WalkConfig& cfg,
                                    EstimatorMode mode, int reps) {
    if (reps < 3) throw ContractError("time_ppibtn_similarity_stage: reps must be >= 3");
    {
        const auto [log, counts] = run_protocol(pop, cfg);
        escape(estimate_matrix_from_rounds(counts, mode));  // warm-up
    }
    std::vector<double> ms;
    ms.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        const auto [log, counts] = run_protocol(pop, cfg);
        const auto m = estimate_matrix_from_rounds(counts, mode);
        const auto t1 = Clock::now();
        escape(m);
        ms.push_back(elapsed_ms(t0, t1));
    }
    return median(std::move(ms));
}

TimingComparison compare_similarity_stage_time(const InteractionDataset& train,
                                               const WalkConfig& cfg, EstimatorMode mode,
                                               int reps, unsigned threads,
                                               std::uint64_t interleave_seed) {
    if (reps < 3) throw ContractError("compare_similarity_stage_time: reps must be >= 3");
    const Population pop = Population::from_dataset(train, 0.5);

    // Warm both paths once, then interleave the measured repetitions in
    // seeded-random order so neither method benefits from running last.
    escape(exact_similarity_matrix(train, threads));
    {
        const auto [log, counts] = run_protocol(pop, cfg);
        escape(estimate_matrix_from_rounds(counts, mode));
    }
    std::vector<int> schedule;
    schedule.insert(schedule.end(), reps, 0);
    schedule.insert(schedule.end(), reps, 1);
    RngStream rng(interleave_seed);
    for (std::size_t i = schedule.size(); i > 1; --i) {
        std::swap(schedule[i - 1], schedule[rng.next_below(i)]);
    }

    std::vector<double> ibtn_ms, pp_ms;
    for (int which : schedule) {
        const auto t0 = Clock::now();
        if (which == 0) {
            escape(exact_similarity_matrix(train, threads));
        } else {
            const auto [log, counts] = run_protocol(pop, cfg);
            escape(estimate_matrix_from_rounds(counts, mode));
        }
        const auto t1 = Clock::now();
        (which == 0 ? ibtn_ms : pp_ms).push_back(elapsed_ms(t0, t1));
    }
    return {median(std::move(ibtn_ms)), median(std::move(pp_ms))};
}

std::uint64_t KSpec::resolve(std::uint32_t n_users) const {
    if (is_fraction) {
        if (!(frac > 0.0 && frac <= 1.0)) {
            throw DomainError("KSpec: fraction must be in (0, 1]");
        }
        return std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::ceil(frac * static_cast<double>(n_users))));
    }
    if (abs < 1) throw DomainError("KSpec: absolute k must be >= 1");
    return abs;
}

std::uint64_t derive_walk_seed(std::uint64_t split_seed, std::uint64_t k) {
    return keyed_hash(keyed_hash(split_seed, kWalkSeedTag), k);
}

EvalReport sweep_k(const InteractionDataset& ds, const SweepConfig& cfg,
                   ArtifactSink* sink) {
    if (cfg.seeds.empty()) throw DomainError("sweep_k: needs at least one seed");
    if (cfg.k_specs.empty()) throw DomainError("sweep_k: needs at least one k");
    if (cfg.modes.empty()) throw DomainError("sweep_k: needs at least one mode");

    const std::uint32_t n_users = ds.n_users();
    const std::uint32_t n_items = ds.n_items();
    const auto n_seeds = static_cast<double>(cfg.seeds.size());

    std::string seeds_label;
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        if (s) seeds_label += ';';
        seeds_label += std::to_string(cfg.seeds[s]);
    }

    struct CellAcc {
        double precision_sum = 0.0;
        double time_sum = 0.0;
        std::uint64_t evaluated = 0;
        std::uint64_t skipped = 0;
        std::uint64_t cold_start = 0;
        std::optional<AEStats> ae;
    };
    CellAcc baseline;
    std::vector<std::vector<CellAcc>> cells(
        cfg.k_specs.size(), std::vector<CellAcc>(cfg.modes.size()));

    for (std::uint64_t seed : cfg.seeds) {
        const SplitPair split = split_train_test(ds, cfg.split_ratio, seed);
        if (sink) sink->on_split(seed, split);

        const auto t0 = Clock::now();
        const SimilarityMatrix exact = exact_similarity_matrix(split.train, cfg.threads);
        const auto t1 = Clock::now();
        if (sink) sink->on_exact_matrix(seed, exact);
        {
            const ItemNeighborIndex index(exact);
            const auto outcome = evaluate_precision(split, index, cfg.top_n,
                                                    cfg.exclude_cold_start, cfg.threads);
            baseline.precision_sum += outcome.mean;
            baseline.evaluated += outcome.evaluated;
            baseline.skipped += outcome.skipped;
            baseline.cold_start += outcome.cold_start;
            baseline.time_sum += elapsed_ms(t0, t1);
        }

        Population pop = Population::from_dataset(split.train, cfg.default_rho);
        for (const auto& [user, r] : cfg.rho_overrides) pop.set_rho(user, r);
        for (std::size_t ks = 0; ks < cfg.k_specs.size(); ++ks) {
            const std::uint64_t k = cfg.k_specs[ks].resolve(n_users);
            WalkConfig wcfg;
            wcfg.k_rounds = k;
            wcfg.seed = derive_walk_seed(seed, k);
            wcfg.max_hops = cfg.max_hops;
            wcfg.allow_self_forward = cfg.allow_self_forward;
            wcfg.threads = cfg.threads;

            const auto p0 = Clock::now();
            const auto [log, counts] = run_protocol(pop, wcfg);
            const auto p1 = Clock::now();
            if (sink) {
                sink->on_round_log(seed, k, log);
                sink->on_cooc_counts(seed, k, counts);
            }
            const double protocol_ms = elapsed_ms(p0, p1);

            for (std::size_t mi = 0; mi < cfg.modes.size(); ++mi) {
                const auto e0 = Clock::now();
                const SimilarityMatrix est =
                    estimate_matrix_from_rounds(counts, cfg.modes[mi]);
                const auto e1 = Clock::now();
                if (sink) sink->on_estimated_matrix(seed, k, cfg.modes[mi], est);

                const ItemNeighborIndex index(est);
                const auto outcome = evaluate_precision(
                    split, index, cfg.top_n, cfg.exclude_cold_start, cfg.threads);
                auto& cell = cells[ks][mi];
                cell.precision_sum += outcome.mean;
                cell.evaluated += outcome.evaluated;
                cell.skipped += outcome.skipped;
                cell.cold_start += outcome.cold_start;
                cell.time_sum += protocol_ms + elapsed_ms(e0, e1);

                AEStats ae = ae_statistics(est, exact, cfg.alphas);
                if (cell.ae) {
                    cell.ae->merge(ae);
                } else {
                    cell.ae = std::move(ae);
                }
            }
        }
    }

    EvalReport report;
    report.alphas = cfg.alphas;
    const double baseline_mean = baseline.precision_sum / n_seeds;

    if (cfg.include_baseline) {
        ReportRow row;
        row.dataset = cfg.dataset_name;
        row.method = "IBTN";
        row.mode = "exact";
        row.k = 0;
        row.k_frac = 0.0;
        row.n_users = n_users;
        row.n_items = n_items;
        row.split_ratio = cfg.split_ratio;
        row.top_n = cfg.top_n;
        row.seeds = seeds_label;
        row.mean_precision = baseline_mean;
        row.sim_stage_ms = cfg.measure_time ? baseline.time_sum / n_seeds : 0.0;
        row.users_evaluated = baseline.evaluated;
        row.users_skipped = baseline.skipped;
        row.users_cold_start = baseline.cold_start;
        report.rows.push_back(std::move(row));
    }

    for (std::size_t ks = 0; ks < cfg.k_specs.size(); ++ks) {
        const std::uint64_t k = cfg.k_specs[ks].resolve(n_users);
        for (std::size_t mi = 0; mi < cfg.modes.size(); ++mi) {
            const auto& cell = cells[ks][mi];
            ReportRow row;
            row.dataset = cfg.dataset_name;
            row.method = "PP-IBTN";
            row.mode = estimator_mode_name(cfg.modes[mi]);
            row.k = k;
            row.k_frac = static_cast<double>(k) / static_cast<double>(n_users);
            row.n_users = n_users;
            row.n_items = n_items;
            row.split_ratio = cfg.split_ratio;
            row.top_n = cfg.top_n;
            row.seeds = seeds_label;
            row.mean_precision = cell.precision_sum / n_seeds;
            row.precision_loss_pct = precision_loss_pct(row.mean_precision, baseline_mean);
            row.sim_stage_ms = cfg.measure_time ? cell.time_sum / n_seeds : 0.0;
            row.users_evaluated = cell.evaluated;
            row.users_skipped = cell.skipped;
            row.users_cold_start = cell.cold_start;
            row.ae = cell.ae;
            row.theory_bounds.reserve(cfg.alphas.size());
            for (double alpha : cfg.alphas) {
                row.theory_bounds.push_back(theorem2_bound(k, alpha));
            }
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

namespace {

std::string alpha_label(double alpha) {
    return format_double(alpha);
}

}  // namespace

void EvalReport::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << "dataset,method,mode,k,k_frac,n_users,n_items,split_ratio,top_n,seeds,"
           "mean_precision,precision_loss_pct,sim_stage_ms,users_evaluated,"
           "users_skipped,users_cold_start,ae_samples,ae_mean,ae_p50,ae_p90,"
           "ae_p99,ae_max";
    for (double a : alphas) out << ",cov_" << alpha_label(a);
    for (double a : alphas) out << ",bound_" << alpha_label(a);
    out << '\n';
    for (const auto& row : rows) {
        out << row.dataset << ',' << row.method << ',' << row.mode << ',' << row.k << ','
            << format_double(row.k_frac) << ',' << row.n_users << ',' << row.n_items
            << ',' << format_double(row.split_ratio) << ',' << row.top_n << ','
            << row.seeds << ',' << format_double(row.mean_precision) << ',';
        if (row.precision_loss_pct) out << format_double(*row.precision_loss_pct);
        out << ',' << format_double(row.sim_stage_ms) << ',' << row.users_evaluated << ','
            << row.users_skipped << ',' << row.users_cold_start << ',';
        if (row.ae) {
            out << row.ae->samples() << ',' << format_double(row.ae->mean()) << ','
                << format_double(row.ae->quantile(0.5)) << ','
                << format_double(row.ae->quantile(0.9)) << ','
                << format_double(row.ae->quantile(0.99)) << ','
                << format_double(row.ae->max());
            for (double a : alphas) out << ',' << format_double(row.ae->coverage(a));
        } else {
            out << "0,,,,,";
            for (std::size_t a = 0; a < alphas.size(); ++a) out << ',';
        }
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            out << ',';
            if (a < row.theory_bounds.size()) out << format_double(row.theory_bounds[a]);
        }
        out << '\n';
    }
    if (!out) throw ParseError(path, 0, "write failed");
}

void EvalReport::write_json(const std::string& path) const {
    nlohmann::json doc;
    doc["alphas"] = alphas;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["dataset"] = row.dataset;
        r["method"] = row.method;
        r["mode"] = row.mode;
        r["k"] = row.k;
        r["k_frac"] = row.k_frac;
        r["n_users"] = row.n_users;
        r["n_items"] = row.n_items;
        r["split_ratio"] = row.split_ratio;
        r["top_n"] = row.top_n;
        r["seeds"] = row.seeds;
        r["mean_precision"] = row.mean_precision;
        if (row.precision_loss_pct) {
            r["precision_loss_pct"] = *row.precision_loss_pct;
        } else {
            r["precision_loss_pct"] = nullptr;
        }
        r["sim_stage_ms"] = row.sim_stage_ms;
        r["users_evaluated"] = row.users_evaluated;
        r["users_skipped"] = row.users_skipped;
        r["users_cold_start"] = row.users_cold_start;
        if (row.ae) {
            nlohmann::json ae;
            ae["samples"] = row.ae->samples();
            ae["mean"] = row.ae->mean();
            ae["p50"] = row.ae->quantile(0.5);
            ae["p90"] = row.ae->quantile(0.9);
            ae["p99"] = row.ae->quantile(0.99);
            ae["max"] = row.ae->max();
            nlohmann::json cov = nlohmann::json::object();
            for (double a : alphas) cov[alpha_label(a)] = row.ae->coverage(a);
            ae["coverage"] = cov;
            r["ae"] = ae;
        } else {
            r["ae"] = nullptr;
        }
        if (!row.theory_bounds.empty()) {
            nlohmann::json bounds = nlohmann::json::object();
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                bounds[alpha_label(alphas[a])] = row.theory_bounds[a];
            }
            r["theory_bounds"] = bounds;
        } else {
            r["theory_bounds"] = nullptr;
        }
        doc["rows"].push_back(std::move(r));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw ParseError(path, 0, "write failed");
}

}  // namespace pptopn
