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

#include <benchmark/benchmark.h>

#include "pptopn/similarity.hpp"
#include "pptopn/synthetic.hpp"

namespace {

pptopn::InteractionDataset bench_dataset(std::uint32_t n_users) {
    pptopn::ClusteredConfig cfg;
    cfg.n_users = n_users;
    cfg.n_items = 1500;
    cfg.n_groups = 20;
    cfg.seed = 17;
    return synthetic_clustered(cfg);
}

void BM_ExactSimilarityMatrix(benchmark::State& state) {
    const auto ds = bench_dataset(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pptopn::exact_similarity_matrix(ds));
    }
    state.SetItemsProcessed(state.iterations() * ds.n_likes());
}
BENCHMARK(BM_ExactSimilarityMatrix)->Arg(500)->Arg(1000)->Arg(2000);

void BM_MinhashSignatures(benchmark::State& state) {
    const auto ds = bench_dataset(1000);
    const pptopn::HashFamily family{static_cast<std::uint32_t>(state.range(0)), 3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(pptopn::minhash_signatures(ds, family));
    }
}
BENCHMARK(BM_MinhashSignatures)->Arg(64)->Arg(256)->Arg(1024);

void BM_EstimateMatrixFromRounds(benchmark::State& state) {
    const auto ds = bench_dataset(1000);
    pptopn::CoocCounts counts(ds.n_items());
    // Uniform contributors stand in for protocol rounds; the estimator cost
    // is what is being measured.
    for (std::uint32_t r = 0; r < state.range(0); ++r) {
        counts.add_round(ds.likes[r % ds.n_users()]);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(pptopn::estimate_matrix_from_rounds(
            counts, pptopn::EstimatorMode::kUnionNormalized));
    }
}
BENCHMARK(BM_EstimateMatrixFromRounds)->Arg(100)->Arg(300)->Arg(1000);

}  // namespace
