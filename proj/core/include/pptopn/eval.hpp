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
#include <vector>

#include "pptopn/dataset.hpp"
#include "pptopn/similarity.hpp"
#include "pptopn/walksim.hpp"

namespace pptopn {

/// Fraction of the recommended items found in the user's held-out likes.
/// Returns nullopt on an empty recommendation list (undefined; the caller
/// skips the user and counts it in report metadata).
std::optional<double> precision_at_n(const std::vector<ItemId>& recommended,
                                     const std::vector<ItemId>& test_likes);

/// 100 * (baseline - pp) / baseline. Negative when the privacy-preserving
/// method outperforms. Returns nullopt when the baseline is zero.
std::optional<double> precision_loss_pct(double pp_precision, double baseline_precision);

/// Streaming absolute-error summary: exact per-alpha coverage counts, exact
/// mean and max, quantiles from a fixed 2000-bin histogram over [0, 1].
class AEStats {
public:
    static constexpr std::size_t kBins = 2000;

    explicit AEStats(std::vector<double> alphas);

    void add(double ae);
    void merge(const AEStats& other);  // alphas must match

    std::uint64_t samples() const { return samples_; }
    double mean() const;
    double max() const { return max_; }
    /// Upper edge of the histogram bin holding the q-th sample.
    double quantile(double q) const;
    /// Empirical Pr[AE <= alpha]. Coverage is non-increasing as alpha shrinks.
    double coverage(double alpha) const;
    const std::vector<double>& alphas() const { return alphas_; }

    /// CSV export "bin_low,bin_high,count" (non-empty bins only).
    void write_histogram_csv(const std::string& path) const;

private:
    std::vector<double> alphas_;
    std::vector<std::uint64_t> alpha_counts_;
    std::vector<std::uint64_t> bins_;
    std::uint64_t samples_ = 0;
    double sum_ = 0.0;
    double max_ = 0.0;
};

/// Per-pair |estimated - exact| over the union of pairs stored in either
/// matrix (absent pairs read as 0). Throws ContractError when the item
/// universes differ.
AEStats ae_statistics(const SimilarityMatrix& estimated, const SimilarityMatrix& exact,
                      const std::vector<double>& alphas);

/// Failure probability delta = 2 exp(-k alpha^2 / 2), the inverse of the
/// hash-count sizing rule.
double theorem2_delta(std::uint64_t k, double alpha);
/// Theoretical coverage bound 1 - delta, clamped at 0.
double theorem2_bound(std::uint64_t k, double alpha);

/// Median wall time (ms) of the exact similarity stage over `reps`
/// measured repetitions after one warm-up. Requires reps >= 3.
double time_ibtn_similarity_stage(const InteractionDataset& train, unsigned threads,
                                  int reps = 5);

/// Median wall time (ms) of protocol execution plus round-count estimation.
double time_ppibtn_similarity_stage(const Population& pop, const WalkConfig& cfg,
                                    EstimatorMode mode, int reps = 5);

struct TimingComparison {
    double ibtn_ms = 0.0;
    double ppibtn_ms = 0.0;
};

/// Runs both similarity stages in this process with the measured repetitions
/// interleaved in seeded-random order, and reports per-method medians.
TimingComparison compare_similarity_stage_time(const InteractionDataset& train,
                                               const WalkConfig& cfg, EstimatorMode mode,
                                               int reps, unsigned threads,
                                               std::uint64_t interleave_seed);

/// Round-count specification: a fraction of the user count or an absolute
/// value.
struct KSpec {
    static KSpec fraction(double f) { return {true, f, 0}; }
    static KSpec absolute(std::uint64_t k) { return {false, 0.0, k}; }

    std::uint64_t resolve(std::uint32_t n_users) const;

    bool is_fraction = true;
    double frac = 0.0;
    std::uint64_t abs = 0;
};

struct SweepConfig {
    std::string dataset_name;
    std::vector<KSpec> k_specs;
    std::vector<std::uint64_t> seeds;                 // one train/test split per seed
    std::vector<EstimatorMode> modes = {EstimatorMode::kUnionNormalized};
    std::uint32_t top_n = 10;
    double split_ratio = 0.8;
    double default_rho = 0.5;
    std::vector<std::pair<UserId, double>> rho_overrides;  // per-user acceptance
    std::vector<double> alphas = {0.03, 0.04, 0.05};
    std::uint32_t max_hops = 1000;
    bool allow_self_forward = true;
    bool include_baseline = true;
    bool exclude_cold_start = false;  // sensitivity flag; default keeps them
    bool measure_time = true;
    unsigned threads = 1;
};

/// One report row: a (method, mode, k) configuration averaged over seeds.
struct ReportRow {
    std::string dataset;
    std::string method;  // IBTN or PP-IBTN
    std::string mode;    // exact, paper-literal, or union-normalized
    std::uint64_t k = 0;
    double k_frac = 0.0;
    std::uint32_t n_users = 0;
    std::uint32_t n_items = 0;
    double split_ratio = 0.0;
    std::uint32_t top_n = 0;
    std::string seeds;
    double mean_precision = 0.0;
    std::optional<double> precision_loss_pct;
    double sim_stage_ms = 0.0;
    std::uint64_t users_evaluated = 0;
    std::uint64_t users_skipped = 0;
    std::uint64_t users_cold_start = 0;  // empty train set; included unless excluded
    std::optional<AEStats> ae;  // absent on baseline rows
    std::vector<double> theory_bounds;  // per alpha, for PP rows
};

struct EvalReport {
    std::vector<double> alphas;
    std::vector<ReportRow> rows;

    /// Fixed-schema CSV, one row per configuration, floats at 10 significant
    /// digits; coverage/bound columns expand per configured alpha.
    void write_csv(const std::string& path) const;
    void write_json(const std::string& path) const;
};

/// Optional receiver for intermediate artifacts produced during a sweep.
class ArtifactSink {
public:
    virtual ~ArtifactSink() = default;
    virtual void on_split(std::uint64_t /*seed*/, const SplitPair& /*split*/) {}
    virtual void on_exact_matrix(std::uint64_t /*seed*/, const SimilarityMatrix& /*m*/) {}
    virtual void on_round_log(std::uint64_t /*seed*/, std::uint64_t /*k*/,
                              const RoundLog& /*log*/) {}
    virtual void on_cooc_counts(std::uint64_t /*seed*/, std::uint64_t /*k*/,
                                const CoocCounts& /*c*/) {}
    virtual void on_estimated_matrix(std::uint64_t /*seed*/, std::uint64_t /*k*/,
                                     EstimatorMode /*mode*/,
                                     const SimilarityMatrix& /*m*/) {}
};

/// Walk seed for round execution within a sweep cell, derived so that every
/// (split seed, round count) cell is independent and reproducible.
std::uint64_t derive_walk_seed(std::uint64_t split_seed, std::uint64_t k);

/// Full experiment grid: for each (seed, k, mode), split, run the protocol
/// with k rounds, estimate, recommend, and score; plus the exact baseline per
/// seed on identical splits. Rows are averaged over seeds.
EvalReport sweep_k(const InteractionDataset& ds, const SweepConfig& cfg,
                   ArtifactSink* sink = nullptr);

}  // namespace pptopn
