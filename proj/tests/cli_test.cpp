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

// Drives the installed binary end to end: exit codes, artifact layout, and
// rerun determinism of the non-timing outputs.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "pptopn/dataset.hpp"
#include "pptopn/synthetic.hpp"
#include "testing/tempfile.hpp"

namespace pptopn {
namespace {

namespace fs = std::filesystem;
using pptopn::testing::read_file;
using pptopn::testing::temp_path;
using pptopn::testing::write_temp_file;

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    const std::string out_path = temp_path("stdout.txt");
    const std::string err_path = temp_path("stderr.txt");
    const std::string cmd = std::string(PPTOPN_CLI_PATH) + " " + args + " >" + out_path +
                            " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WEXITSTATUS(status);
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

std::string make_tiny_dataset(const std::string& name) {
    const auto ds = synthetic_clustered({.n_users = 120,
                                         .n_items = 40,
                                         .n_groups = 5,
                                         .in_group_like_prob = 0.5,
                                         .out_group_like_prob = 0.02,
                                         .seed = 11});
    const auto path = temp_path(name);
    write_pairs_tsv(ds, path);
    return path;
}

TEST(CliIngest, WritesCanonicalFileAndStatsLine) {
    const auto in = write_temp_file(
        "ratings.csv",
        "userId,movieId,rating,timestamp\n1,31,2.5,100\n1,32,3.0,101\n2,31,4.0,102\n");
    const auto out = temp_path("likes.tsv");
    const auto r = run_cli("ingest --format movielens-csv --in " + in + " --out " + out);
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(read_file(out), "1\t31\n1\t32\n2\t31\n");
    EXPECT_NE(r.out.find("\"users\":2"), std::string::npos);
    EXPECT_NE(r.out.find("\"items\":2"), std::string::npos);
    EXPECT_NE(r.out.find("\"likes\":3"), std::string::npos);
    EXPECT_TRUE(fs::exists(out + ".config.json"));
}

TEST(CliIngest, MissingFileExitsTwoAndNamesPath) {
    const auto r = run_cli("ingest --format pairs-tsv --in /definitely/missing.tsv --out " +
                           temp_path("x.tsv"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("/definitely/missing.tsv"), std::string::npos);
}

TEST(CliIngest, UnknownFormatExitsTwo) {
    const auto in = write_temp_file("a.tsv", "u\ti\n");
    const auto r =
        run_cli("ingest --format netflix --in " + in + " --out " + temp_path("x.tsv"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("netflix"), std::string::npos);
}

TEST(CliIngest, SubsampleIsDeterministic) {
    const auto in = make_tiny_dataset("full.tsv");
    const auto out_a = temp_path("a.tsv");
    const auto out_b = temp_path("b.tsv");
    ASSERT_EQ(run_cli("ingest --format pairs-tsv --in " + in + " --out " + out_a +
                      " --max-users 40 --sample-seed 7")
                  .exit_code,
              0);
    ASSERT_EQ(run_cli("ingest --format pairs-tsv --in " + in + " --out " + out_b +
                      " --max-users 40 --sample-seed 7")
                  .exit_code,
              0);
    EXPECT_EQ(read_file(out_a), read_file(out_b));
    EXPECT_NE(read_file(out_a), read_file(in));
}

TEST(CliRun, ProducesReportConfigEchoAndManifest) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto dir = temp_path("out");
    const auto r = run_cli("run --in " + in + " --k-frac 0.5 --seeds 1..2 --n 5 --out-dir " +
                           dir + " --emit-roundlog --emit-similarity --emit-cooc "
                           "--emit-splits --emit-recommendations");
    EXPECT_EQ(r.exit_code, 0) << r.err;
    for (const char* file :
         {"report.csv", "report.json", "config.json", "manifest.json",
          "roundlog_k60_seed1.jsonl", "roundlog_redacted_k60_seed2.jsonl",
          "exact_sims_seed1.csv", "est_sims_union-normalized_k60_seed2.csv",
          "cooc_pairs_k60_seed1.csv", "cooc_items_k60_seed1.csv", "split_train_seed1.tsv",
          "split_test_seed2.tsv", "recommendations_exact_seed1.csv",
          "recommendations_union-normalized_k60_seed2.csv",
          "ae_hist_union-normalized_k60.csv"}) {
        EXPECT_TRUE(fs::exists(fs::path(dir) / file)) << file;
    }
    const auto manifest = read_file((fs::path(dir) / "manifest.json").string());
    EXPECT_NE(manifest.find("report.csv"), std::string::npos);
    EXPECT_NE(manifest.find("roundlog_k60_seed1.jsonl"), std::string::npos);
    const auto config = read_file((fs::path(dir) / "config.json").string());
    EXPECT_NE(config.find("\"k_frac\": 0.5"), std::string::npos);
    // Summary table reaches stdout.
    EXPECT_NE(r.out.find("PP-IBTN"), std::string::npos);
}

TEST(CliRun, RequiresExactlyOneKForm) {
    const auto in = make_tiny_dataset("ds.tsv");
    EXPECT_EQ(run_cli("run --in " + in + " --out-dir " + temp_path("o1")).exit_code, 2);
    EXPECT_EQ(run_cli("run --in " + in + " --k 10 --k-frac 0.5 --out-dir " +
                      temp_path("o2"))
                  .exit_code,
              2);
}

TEST(CliRun, RerunsAreByteIdenticalWithoutTiming) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto dir_a = temp_path("a");
    const auto dir_b = temp_path("b");
    const std::string flags = " --k 40 --seeds 3,4 --n 5 --no-timing --emit-roundlog "
                              "--emit-similarity --emit-splits ";
    ASSERT_EQ(run_cli("run --in " + in + flags + "--out-dir " + dir_a).exit_code, 0);
    ASSERT_EQ(run_cli("run --in " + in + flags + "--out-dir " + dir_b).exit_code, 0);
    for (const char* file : {"report.csv", "report.json", "roundlog_k40_seed3.jsonl",
                             "est_sims_union-normalized_k40_seed4.csv",
                             "split_train_seed3.tsv"}) {
        EXPECT_EQ(read_file((fs::path(dir_a) / file).string()),
                  read_file((fs::path(dir_b) / file).string()))
            << file;
    }
}

TEST(CliRun, TwoModesShareOneBaselineRow) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto dir = temp_path("out");
    const auto r = run_cli("run --in " + in +
                           " --k-frac 1.0 --seeds 1 --n 5 "
                           "--mode paper-literal,union-normalized --out-dir " +
                           dir);
    EXPECT_EQ(r.exit_code, 0) << r.err;
    const auto report = read_file((fs::path(dir) / "report.csv").string());
    EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 4);  // header + 3 rows
    EXPECT_NE(report.find("IBTN,exact"), std::string::npos);
    EXPECT_NE(report.find("PP-IBTN,paper-literal"), std::string::npos);
    EXPECT_NE(report.find("PP-IBTN,union-normalized"), std::string::npos);
}

TEST(CliRun, RhoFileOverridesApply) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto rho = write_temp_file("rho.tsv", "0\t0.9\n1\t0.1\n");
    EXPECT_EQ(run_cli("run --in " + in + " --k 20 --seeds 1 --n 5 --rho-file " + rho +
                      " --out-dir " + temp_path("o"))
                  .exit_code,
              0);
    const auto bad = write_temp_file("bad_rho.tsv", "no-such-user\t0.9\n");
    EXPECT_EQ(run_cli("run --in " + in + " --k 20 --seeds 1 --n 5 --rho-file " + bad +
                      " --out-dir " + temp_path("o2"))
                  .exit_code,
              2);
}

TEST(CliSweep, EmitsOneRowPerFractionPerMode) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto dir = temp_path("out");
    const auto r = run_cli("sweep --in " + in +
                           " --k-fracs 0.25,0.5 --seeds 1,2 --n 5 --out-dir " + dir);
    EXPECT_EQ(r.exit_code, 0) << r.err;
    const auto report = read_file((fs::path(dir) / "report.csv").string());
    EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 4);  // header + baseline + 2
    EXPECT_NE(report.find("dataset,method,mode,k,"), std::string::npos);
}

TEST(CliSweep, RepeatedInvocationIdenticalNonTimingColumns) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto dir_a = temp_path("a");
    const auto dir_b = temp_path("b");
    const std::string flags = " --k-fracs 0.5,1.0 --seeds 5 --n 5 --no-timing ";
    ASSERT_EQ(run_cli("sweep --in " + in + flags + "--out-dir " + dir_a).exit_code, 0);
    ASSERT_EQ(run_cli("sweep --in " + in + flags + "--out-dir " + dir_b).exit_code, 0);
    EXPECT_EQ(read_file((fs::path(dir_a) / "report.csv").string()),
              read_file((fs::path(dir_b) / "report.csv").string()));
}

TEST(CliSweep, AlphaColumnsFollowRequestedAlphas) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto dir = temp_path("out");
    const auto r = run_cli("sweep --in " + in +
                           " --k-fracs 1.0 --seeds 1 --n 5 --alphas 0.03,0.04,0.05 "
                           "--out-dir " +
                           dir);
    EXPECT_EQ(r.exit_code, 0) << r.err;
    const auto report = read_file((fs::path(dir) / "report.csv").string());
    EXPECT_NE(report.find("cov_0.03,cov_0.04,cov_0.05"), std::string::npos);
    EXPECT_NE(report.find("bound_0.03,bound_0.04,bound_0.05"), std::string::npos);
}

TEST(CliConfigFile, FlagsOverrideConfigFileOverridesDefaults) {
    const auto in = make_tiny_dataset("ds.tsv");
    const auto config =
        write_temp_file("run.ini", "[run]\nk-frac=0.5\nn=5\nseeds=1\nno-timing=true\n");
    const auto dir = temp_path("out");
    // --n on the command line wins over the file's n=5; k-frac comes from the
    // file; everything else from defaults.
    const auto r = run_cli("--config " + config + " run --in " + in + " --n 7 --out-dir " +
                           dir);
    EXPECT_EQ(r.exit_code, 0) << r.err;
    const auto echo = read_file((fs::path(dir) / "config.json").string());
    EXPECT_NE(echo.find("\"top_n\": 7"), std::string::npos);
    EXPECT_NE(echo.find("\"k_frac\": 0.5"), std::string::npos);
}

TEST(CliGen, KindsProduceLoadableFiles) {
    const auto lastfm = temp_path("lf.dat");
    ASSERT_EQ(run_cli("gen --kind lastfm-shape --users 300 --items 50 --likes 2000 "
                      "--out " +
                      lastfm)
                  .exit_code,
              0);
    EXPECT_EQ(stats(binarize(load_raw(lastfm, RawFormat::kLastfmDat))).n_users, 300u);

    const auto jester = temp_path("je.csv");
    ASSERT_EQ(run_cli("gen --kind jester-shape --users 150 --likes 6000 --out " + jester)
                  .exit_code,
              0);
    EXPECT_EQ(stats(binarize(load_raw(jester, RawFormat::kJesterCsv))).n_likes, 6000u);

    const auto ml = temp_path("ml.csv");
    ASSERT_EQ(run_cli("gen --kind movielens-class --users 100 --items 50 --groups 5 "
                      "--out " +
                      ml)
                  .exit_code,
              0);
    EXPECT_GT(stats(binarize(load_raw(ml, RawFormat::kMovielensCsv))).n_likes, 0u);

    EXPECT_EQ(run_cli("gen --kind nonsense --out " + temp_path("x")).exit_code, 2);
}

}  // namespace
}  // namespace pptopn
