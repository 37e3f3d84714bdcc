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

// Command-line driver: ingestion, single-configuration runs, k-sweeps, and
// synthetic data generation. Exit codes: 0 success, 1 internal error,
// 2 usage/input error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pptopn/dataset.hpp"
#include "pptopn/errors.hpp"
#include "pptopn/eval.hpp"
#include "pptopn/format.hpp"
#include "pptopn/recommender.hpp"
#include "pptopn/similarity.hpp"
#include "pptopn/synthetic.hpp"
#include "pptopn/walksim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::uint64_t parse_u64_or_throw(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UsageError("cannot parse " + what + ": '" + s + "'");
    }
    return v;
}

// Seed lists accept "1..10" ranges or comma-separated values.
std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
    const auto range_pos = spec.find("..");
    if (range_pos != std::string::npos) {
        const auto lo = parse_u64_or_throw(spec.substr(0, range_pos), "seed range start");
        const auto hi = parse_u64_or_throw(spec.substr(range_pos + 2), "seed range end");
        if (hi < lo) throw UsageError("seed range end below start: " + spec);
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::vector<std::uint64_t> seeds;
    for (const auto& part : split_list(spec, ',')) {
        if (!part.empty()) seeds.push_back(parse_u64_or_throw(part, "seed"));
    }
    if (seeds.empty()) throw UsageError("empty seed list: '" + spec + "'");
    return seeds;
}

std::vector<double> parse_double_list(const std::string& spec, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split_list(spec, ',')) {
        if (part.empty()) continue;
        try {
            out.push_back(std::stod(part));
        } catch (const std::exception&) {
            throw UsageError("cannot parse " + what + ": '" + part + "'");
        }
    }
    if (out.empty()) throw UsageError("empty " + what + " list: '" + spec + "'");
    return out;
}

std::vector<pptopn::EstimatorMode> parse_modes(const std::string& spec) {
    std::vector<pptopn::EstimatorMode> modes;
    for (const auto& part : split_list(spec, ',')) {
        if (part.empty()) continue;
        if (part == "union-normalized") {
            modes.push_back(pptopn::EstimatorMode::kUnionNormalized);
        } else if (part == "paper-literal") {
            modes.push_back(pptopn::EstimatorMode::kPaperLiteral);
        } else {
            throw UsageError("unknown estimator mode: '" + part +
                             "' (expected union-normalized or paper-literal)");
        }
    }
    if (modes.empty()) throw UsageError("empty mode list");
    return modes;
}

pptopn::RawFormat parse_format_or_throw(const std::string& name) {
    const auto fmt = pptopn::parse_format(name);
    if (!fmt) throw UsageError("unknown format: '" + name + "'");
    return *fmt;
}

void write_json_file(const json& doc, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw pptopn::ParseError(path.string(), 0, "cannot open file for writing");
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
    std::string in;
    std::string format = "pairs-tsv";
    std::string out;
    std::uint32_t max_users = 0;
    std::uint32_t max_items = 0;
    std::uint64_t sample_seed = 0;
};

int run_ingest(const IngestArgs& args) {
    const auto fmt = parse_format_or_throw(args.format);
    auto records = pptopn::load_raw(args.in, fmt);
    if (args.max_users || args.max_items) {
        records = pptopn::subsample_records(records, args.max_users, args.max_items,
                                            args.sample_seed);
    }
    const auto ds = pptopn::binarize(records);
    pptopn::write_pairs_tsv(ds, args.out);
    const auto s = pptopn::stats(ds);

    json echo;
    echo["command"] = "ingest";
    echo["in"] = args.in;
    echo["format"] = args.format;
    echo["out"] = args.out;
    echo["max_users"] = args.max_users;
    echo["max_items"] = args.max_items;
    echo["sample_seed"] = args.sample_seed;
    write_json_file(echo, args.out + ".config.json");

    json line;
    line["users"] = s.n_users;
    line["items"] = s.n_items;
    line["likes"] = s.n_likes;
    line["density"] = s.density;
    std::cout << line.dump() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// run / sweep

struct ExperimentArgs {
    std::string in;
    std::string format = "pairs-tsv";
    std::string name;
    std::string out_dir = "out";
    double ratio = 0.8;
    std::string seeds = "1..10";
    double k_frac = -1.0;
    std::int64_t k_abs = -1;
    std::string k_fracs;  // sweep only
    std::string modes = "union-normalized";
    double rho = 0.5;
    std::string rho_file;
    std::uint32_t top_n = 10;
    std::string alphas = "0.03,0.04,0.05";
    std::uint32_t max_users = 0;
    std::uint32_t max_items = 0;
    std::uint64_t sample_seed = 0;
    std::uint32_t max_hops = 1000;
    bool no_self_forward = false;
    bool exclude_cold_start = false;
    bool no_baseline = false;
    bool no_timing = false;
    bool emit_roundlog = false;
    bool emit_similarity = false;
    bool emit_cooc = false;
    bool emit_splits = false;
    bool emit_recommendations = false;
    unsigned threads = 1;
};

// Writes requested per-stage artifacts into the output directory and records
// them in the manifest.
class FileSink : public pptopn::ArtifactSink {
public:
    FileSink(const ExperimentArgs& args, const fs::path& dir, json& manifest)
        : args_(args), dir_(dir), manifest_(manifest) {}

    void on_split(std::uint64_t seed, const pptopn::SplitPair& split) override {
        if (args_.emit_splits) {
            const auto train = name("split_train", seed);
            const auto test = name("split_test", seed);
            pptopn::write_pairs_tsv(split.train, (dir_ / train).string());
            pptopn::write_pairs_tsv(split.test, (dir_ / test).string());
            record(train, "split-train", seed);
            record(test, "split-test", seed);
        }
        if (args_.emit_recommendations) current_split_ = split;
    }

    void on_exact_matrix(std::uint64_t seed, const pptopn::SimilarityMatrix& m) override {
        if (args_.emit_similarity) {
            const auto file = name("exact_sims", seed, ".csv");
            m.write_csv((dir_ / file).string());
            record(file, "similarity-exact", seed);
        }
        if (args_.emit_recommendations) {
            emit_recommendations(m, name_base("recommendations_exact", seed), seed);
        }
    }

    void on_round_log(std::uint64_t seed, std::uint64_t k,
                      const pptopn::RoundLog& log) override {
        if (!args_.emit_roundlog) return;
        const auto full = name_k("roundlog", seed, k, ".jsonl");
        const auto redacted = name_k("roundlog_redacted", seed, k, ".jsonl");
        log.write_jsonl((dir_ / full).string(), false);
        log.write_jsonl((dir_ / redacted).string(), true);
        record(full, "roundlog", seed, k);
        record(redacted, "roundlog-redacted", seed, k);
    }

    void on_cooc_counts(std::uint64_t seed, std::uint64_t k,
                        const pptopn::CoocCounts& counts) override {
        if (!args_.emit_cooc) return;
        const auto pairs = name_k("cooc_pairs", seed, k, ".csv");
        const auto items = name_k("cooc_items", seed, k, ".csv");
        counts.write_csv((dir_ / pairs).string(), (dir_ / items).string());
        record(pairs, "cooc-pairs", seed, k);
        record(items, "cooc-items", seed, k);
    }

    void on_estimated_matrix(std::uint64_t seed, std::uint64_t k,
                             pptopn::EstimatorMode mode,
                             const pptopn::SimilarityMatrix& m) override {
        const std::string mode_name = pptopn::estimator_mode_name(mode);
        if (args_.emit_similarity) {
            const auto file = name_k("est_sims_" + mode_name, seed, k, ".csv");
            m.write_csv((dir_ / file).string());
            record(file, "similarity-estimated", seed, k, mode_name);
        }
        if (args_.emit_recommendations) {
            emit_recommendations(
                m, name_base("recommendations_" + mode_name + "_k" + std::to_string(k), seed),
                seed, k, mode_name);
        }
    }

private:
    static std::string name_base(const std::string& stem, std::uint64_t seed) {
        return stem + "_seed" + std::to_string(seed);
    }
    std::string name(const std::string& stem, std::uint64_t seed,
                     const std::string& ext = ".tsv") {
        return name_base(stem, seed) + ext;
    }
    std::string name_k(const std::string& stem, std::uint64_t seed, std::uint64_t k,
                       const std::string& ext) {
        return stem + "_k" + std::to_string(k) + "_seed" + std::to_string(seed) + ext;
    }

    void emit_recommendations(const pptopn::SimilarityMatrix& m, const std::string& base,
                              std::uint64_t seed, std::uint64_t k = 0,
                              const std::string& mode = "exact") {
        if (!current_split_) return;
        const auto& train = current_split_->train;
        const pptopn::ItemNeighborIndex index(m);
        std::vector<pptopn::RecommendationList> lists;
        lists.reserve(train.n_users());
        for (pptopn::UserId u = 0; u < train.n_users(); ++u) {
            const auto candidates =
                pptopn::all_items_except(train.likes[u], train.n_items());
            if (candidates.empty()) continue;
            lists.push_back(
                pptopn::top_n(u, train.likes[u], index, args_.top_n, candidates));
        }
        const auto file = base + ".csv";
        pptopn::write_recommendations_csv(lists, (dir_ / file).string());
        record(file, "recommendations", seed, k, mode);
    }

    void record(const std::string& file, const std::string& kind, std::uint64_t seed,
                std::uint64_t k = 0, const std::string& mode = "") {
        json entry;
        entry["file"] = file;
        entry["kind"] = kind;
        entry["seed"] = seed;
        if (k) entry["k"] = k;
        if (!mode.empty()) entry["mode"] = mode;
        manifest_["artifacts"].push_back(entry);
    }

    const ExperimentArgs& args_;
    fs::path dir_;
    json& manifest_;
    std::optional<pptopn::SplitPair> current_split_;
};

json echo_config(const ExperimentArgs& args, const std::string& command) {
    json echo;
    echo["command"] = command;
    echo["in"] = args.in;
    echo["format"] = args.format;
    echo["name"] = args.name;
    echo["out_dir"] = args.out_dir;
    echo["ratio"] = args.ratio;
    echo["seeds"] = args.seeds;
    echo["k_frac"] = args.k_frac;
    echo["k"] = args.k_abs;
    echo["k_fracs"] = args.k_fracs;
    echo["modes"] = args.modes;
    echo["rho"] = args.rho;
    echo["rho_file"] = args.rho_file;
    echo["top_n"] = args.top_n;
    echo["alphas"] = args.alphas;
    echo["max_users"] = args.max_users;
    echo["max_items"] = args.max_items;
    echo["sample_seed"] = args.sample_seed;
    echo["max_hops"] = args.max_hops;
    echo["allow_self_forward"] = !args.no_self_forward;
    echo["exclude_cold_start"] = args.exclude_cold_start;
    echo["include_baseline"] = !args.no_baseline;
    echo["measure_time"] = !args.no_timing;
    echo["threads"] = args.threads;
    return echo;
}

int run_experiment(ExperimentArgs& args, bool is_sweep) {
    std::vector<pptopn::KSpec> k_specs;
    if (is_sweep) {
        if (args.k_fracs.empty()) throw UsageError("sweep requires --k-fracs");
        for (double f : parse_double_list(args.k_fracs, "k fraction")) {
            k_specs.push_back(pptopn::KSpec::fraction(f));
        }
    } else {
        const bool has_frac = args.k_frac >= 0.0;
        const bool has_abs = args.k_abs >= 0;
        if (has_frac == has_abs) {
            throw UsageError("run requires exactly one of --k or --k-frac");
        }
        k_specs.push_back(has_frac
                              ? pptopn::KSpec::fraction(args.k_frac)
                              : pptopn::KSpec::absolute(static_cast<std::uint64_t>(args.k_abs)));
    }

    const auto fmt = parse_format_or_throw(args.format);
    auto records = pptopn::load_raw(args.in, fmt);
    if (args.max_users || args.max_items) {
        records = pptopn::subsample_records(records, args.max_users, args.max_items,
                                            args.sample_seed);
    }
    const auto ds = pptopn::binarize(records);
    if (args.name.empty()) args.name = fs::path(args.in).stem().string();

    pptopn::SweepConfig cfg;
    cfg.dataset_name = args.name;
    cfg.k_specs = k_specs;
    cfg.seeds = parse_seed_list(args.seeds);
    cfg.modes = parse_modes(args.modes);
    cfg.top_n = args.top_n;
    cfg.split_ratio = args.ratio;
    cfg.default_rho = args.rho;
    cfg.alphas = parse_double_list(args.alphas, "alpha");
    cfg.max_hops = args.max_hops;
    cfg.allow_self_forward = !args.no_self_forward;
    cfg.include_baseline = !args.no_baseline;
    cfg.exclude_cold_start = args.exclude_cold_start;
    cfg.measure_time = !args.no_timing;
    cfg.threads = args.threads;

    if (!args.rho_file.empty()) {
        // Two tab-separated columns: raw user id, acceptance probability.
        std::ifstream in(args.rho_file);
        if (!in) throw UsageError("cannot open --rho-file: " + args.rho_file);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) {
                throw UsageError(args.rho_file + ":" + std::to_string(line_no) +
                                 ": expected rawUser<TAB>rho");
            }
            const auto user = ds.users.find(line.substr(0, tab));
            if (!user) {
                throw UsageError(args.rho_file + ":" + std::to_string(line_no) +
                                 ": unknown user '" + line.substr(0, tab) + "'");
            }
            try {
                cfg.rho_overrides.emplace_back(*user, std::stod(line.substr(tab + 1)));
            } catch (const std::exception&) {
                throw UsageError(args.rho_file + ":" + std::to_string(line_no) +
                                 ": unparseable rho value");
            }
        }
    }

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);

    json manifest;
    manifest["artifacts"] = json::array();
    FileSink sink(args, dir, manifest);

    const auto report = pptopn::sweep_k(ds, cfg, &sink);

    report.write_csv((dir / "report.csv").string());
    report.write_json((dir / "report.json").string());
    manifest["artifacts"].push_back({{"file", "report.csv"}, {"kind", "report-csv"}});
    manifest["artifacts"].push_back({{"file", "report.json"}, {"kind", "report-json"}});

    for (const auto& row : report.rows) {
        if (!row.ae) continue;
        const std::string file = "ae_hist_" + row.mode + "_k" + std::to_string(row.k) + ".csv";
        row.ae->write_histogram_csv((dir / file).string());
        manifest["artifacts"].push_back(
            {{"file", file}, {"kind", "ae-histogram"}, {"k", row.k}, {"mode", row.mode}});
    }

    write_json_file(echo_config(args, is_sweep ? "sweep" : "run"), dir / "config.json");
    manifest["artifacts"].push_back({{"file", "config.json"}, {"kind", "config-echo"}});
    write_json_file(manifest, dir / "manifest.json");

    // Summary table.
    std::printf("%-8s %-16s %6s %7s %10s %9s %12s\n", "method", "mode", "k", "k_frac",
                "precision", "loss_pct", "stage_ms");
    for (const auto& row : report.rows) {
        std::printf("%-8s %-16s %6llu %7.3f %10.6f %9s %12.3f\n", row.method.c_str(),
                    row.mode.c_str(), static_cast<unsigned long long>(row.k), row.k_frac,
                    row.mean_precision,
                    row.precision_loss_pct
                        ? pptopn::format_double(*row.precision_loss_pct).c_str()
                        : "-",
                    row.sim_stage_ms);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    std::string kind;
    std::string out;
    std::uint64_t seed = 1;
    std::uint32_t users = 0;
    std::uint32_t items = 0;
    std::uint64_t likes = 0;
    std::uint32_t groups = 30;
    double in_prob = 0.4;
    double out_prob = 0.004;
    double pop_min = 0.5;
    double pop_max = 1.5;
    double pop_exp = 1.0;
};

int run_gen(const GenArgs& args) {
    if (args.kind == "lastfm-shape") {
        const std::uint32_t users = args.users ? args.users : 17976;
        const std::uint32_t items = args.items ? args.items : 8007;
        const std::uint64_t likes = args.likes ? args.likes : 935570;
        pptopn::write_lastfm_shaped(args.out, users, items, likes, args.seed);
    } else if (args.kind == "jester-shape") {
        const std::uint32_t users = args.users ? args.users : 24983;
        const std::uint64_t likes = args.likes ? args.likes : 1048537;
        pptopn::write_jester_shaped(args.out, users, likes, args.seed);
    } else if (args.kind == "movielens-class" || args.kind == "clustered") {
        pptopn::ClusteredConfig cfg;
        cfg.n_users = args.users ? args.users : 6000;
        cfg.n_items = args.items ? args.items : 3000;
        cfg.n_groups = args.groups;
        cfg.in_group_like_prob = args.in_prob;
        cfg.out_group_like_prob = args.out_prob;
        cfg.popularity_min = args.pop_min;
        cfg.popularity_max = args.pop_max;
        cfg.popularity_exponent = args.pop_exp;
        cfg.seed = args.seed;
        const auto ds = pptopn::synthetic_clustered(cfg);
        if (args.kind == "movielens-class") {
            pptopn::write_movielens_csv(ds, args.out, args.seed + 1);
        } else {
            pptopn::write_pairs_tsv(ds, args.out);
        }
    } else {
        throw UsageError("unknown --kind '" + args.kind +
                         "' (expected lastfm-shape, jester-shape, movielens-class, "
                         "or clustered)");
    }
    std::cout << "wrote " << args.out << "\n";
    return kExitOk;
}

void add_experiment_options(CLI::App* cmd, ExperimentArgs& args, bool is_sweep) {
    cmd->add_option("--in", args.in, "Input ratings file")->required();
    cmd->add_option("--format", args.format,
                    "Input format: pairs-tsv, movielens-csv, lastfm-dat, jester-csv");
    cmd->add_option("--name", args.name, "Dataset name for report rows");
    cmd->add_option("--out-dir", args.out_dir, "Output directory");
    cmd->add_option("--ratio", args.ratio, "Train fraction of the split");
    cmd->add_option("--seeds", args.seeds, "Split seeds: comma list or a..b range");
    if (is_sweep) {
        cmd->add_option("--k-fracs", args.k_fracs, "Comma list of round-count fractions")
            ->required();
    } else {
        cmd->add_option("--k-frac", args.k_frac, "Rounds as a fraction of n");
        cmd->add_option("--k", args.k_abs, "Absolute number of rounds");
    }
    cmd->add_option("--mode", args.modes,
                    "Estimator modes (comma list): union-normalized, paper-literal");
    cmd->add_option("--rho", args.rho, "Acceptance probability for every user");
    cmd->add_option("--rho-file", args.rho_file,
                    "Per-user rho overrides: rawUser<TAB>rho lines");
    cmd->add_option("--n", args.top_n, "Recommendation list length N");
    cmd->add_option("--alphas", args.alphas, "AE thresholds (comma list)");
    cmd->add_option("--max-users", args.max_users, "Deterministic user subsample cap");
    cmd->add_option("--max-items", args.max_items, "Deterministic item subsample cap");
    cmd->add_option("--sample-seed", args.sample_seed, "Seed for the subsample");
    cmd->add_option("--max-hops", args.max_hops, "Per-round hop budget");
    cmd->add_option("--threads", args.threads, "Worker threads for stage kernels");
    cmd->add_flag("--no-self-forward", args.no_self_forward,
                  "Exclude the current holder from forwarding targets");
    cmd->add_flag("--exclude-cold-start", args.exclude_cold_start,
                  "Skip users with an empty train set in precision averages");
    cmd->add_flag("--no-baseline", args.no_baseline, "Omit the IBTN baseline row");
    cmd->add_flag("--no-timing", args.no_timing, "Report zeros in timing columns");
    cmd->add_flag("--emit-roundlog", args.emit_roundlog,
                  "Write JSON-lines round logs (full and redacted)");
    cmd->add_flag("--emit-similarity", args.emit_similarity,
                  "Write exact and estimated similarity CSVs");
    cmd->add_flag("--emit-cooc", args.emit_cooc, "Write co-occurrence count CSVs");
    cmd->add_flag("--emit-splits", args.emit_splits, "Write train/test splits as pairs-tsv");
    cmd->add_flag("--emit-recommendations", args.emit_recommendations,
                  "Write per-user top-N CSVs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Privacy-preserving item-based top-N recommendation toolkit"};
    app.require_subcommand(1);
    // Key=value config file; keys live under a [subcommand] section and lose
    // to explicit command-line flags.
    app.set_config("--config", "", "Read options from a key=value file");

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Binarize a ratings file to pairs-tsv");
    ingest->add_option("--in", ingest_args.in, "Input ratings file")->required();
    ingest->add_option("--format", ingest_args.format, "Input format")->required();
    ingest->add_option("--out", ingest_args.out, "Canonical pairs-tsv output")->required();
    ingest->add_option("--max-users", ingest_args.max_users, "User subsample cap");
    ingest->add_option("--max-items", ingest_args.max_items, "Item subsample cap");
    ingest->add_option("--sample-seed", ingest_args.sample_seed, "Subsample seed");

    ExperimentArgs run_args;
    auto* run = app.add_subcommand("run", "Evaluate one configuration");
    add_experiment_options(run, run_args, /*is_sweep=*/false);

    ExperimentArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Evaluate a grid of k fractions");
    add_experiment_options(sweep, sweep_args, /*is_sweep=*/true);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate synthetic datasets");
    gen->add_option("--kind", gen_args.kind,
                    "lastfm-shape, jester-shape, movielens-class, or clustered")
        ->required();
    gen->add_option("--out", gen_args.out, "Output file")->required();
    gen->add_option("--seed", gen_args.seed, "Generator seed");
    gen->add_option("--users", gen_args.users, "User count (0 = kind default)");
    gen->add_option("--items", gen_args.items, "Item count (0 = kind default)");
    gen->add_option("--likes", gen_args.likes, "Like count (0 = kind default)");
    gen->add_option("--groups", gen_args.groups, "Taste groups (clustered kinds)");
    gen->add_option("--in-prob", gen_args.in_prob, "In-group like probability");
    gen->add_option("--out-prob", gen_args.out_prob, "Out-of-group like probability");
    gen->add_option("--pop-min", gen_args.pop_min, "Popularity factor floor");
    gen->add_option("--pop-max", gen_args.pop_max, "Popularity factor ceiling");
    gen->add_option("--pop-exp", gen_args.pop_exp, "Popularity skew exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ingest) return run_ingest(ingest_args);
        if (*run) return run_experiment(run_args, /*is_sweep=*/false);
        if (*sweep) return run_experiment(sweep_args, /*is_sweep=*/true);
        if (*gen) return run_gen(gen_args);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pptopn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pptopn::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pptopn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
