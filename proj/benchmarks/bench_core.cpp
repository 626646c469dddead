// Microbenchmarks for the hot paths: reduced-word arithmetic, simplicial
// normalization, braid actions, truncated series, Lyndon bases, and exact
// Smith forms. All inputs are seeded, so runs are comparable.

#include "braidwork/braid.hpp"
#include "braidwork/exactla.hpp"
#include "braidwork/lie.hpp"
#include "braidwork/magnus.hpp"
#include "braidwork/milnor.hpp"
#include "braidwork/rng.hpp"
#include "braidwork/words.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

namespace {

using namespace braidwork;

words::Word seeded_word(std::uint64_t seed, int num_gens, int letters) {
    SplitMix64 rng(seed);
    std::vector<words::Syllable> raw;
    raw.reserve(static_cast<std::size_t>(letters));
    for (int i = 0; i < letters; ++i)
        raw.push_back(words::Syllable{static_cast<int>(rng.below(static_cast<std::uint64_t>(num_gens))),
                                      rng.coin() ? 1 : -1});
    return words::from_syllables(raw);
}

magnus::Series seeded_series(std::uint64_t seed, int q, int deg) {
    return magnus::magnus_embed(seeded_word(seed, q, 16), q, deg, 0);
}

exactla::IntMatrix seeded_matrix(std::uint64_t seed, int rows, int cols, int per_row) {
    SplitMix64 rng(seed);
    auto m = exactla::IntMatrix::zero(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < per_row; ++k) {
            int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(cols)));
            long v = static_cast<long>(rng.below(5)) - 2;
            if (v != 0) m.add(i, j, v);
        }
    return m;
}

void BM_WordMultiply(benchmark::State& state) {
    auto a = seeded_word(11, 5, 128);
    auto b = seeded_word(12, 5, 128);
    for (auto _ : state) benchmark::DoNotOptimize(words::mul(a, b));
}
BENCHMARK(BM_WordMultiply);

void BM_MooreNormalize(benchmark::State& state) {
    milnor::SimplicialElement e{5, seeded_word(13, 5, 96)};
    for (auto _ : state) benchmark::DoNotOptimize(milnor::moore_normalize(e));
}
BENCHMARK(BM_MooreNormalize);

void BM_BraidAct(benchmark::State& state) {
    milnor::SimplicialElement e{5, seeded_word(14, 5, 64)};
    braid::BraidWord b{4, {}};
    SplitMix64 rng(15);
    for (int i = 0; i < 8; ++i)
        b.letters.push_back(braid::BraidLetter{static_cast<int>(rng.below(5)) - 1,
                                               rng.coin() ? 1 : -1});
    for (auto _ : state) benchmark::DoNotOptimize(braid::act(b, e));
}
BENCHMARK(BM_BraidAct);

void BM_SeriesMul(benchmark::State& state) {
    auto f = seeded_series(21, 3, 6);
    auto g = seeded_series(22, 3, 6);
    for (auto _ : state) benchmark::DoNotOptimize(magnus::mul(f, g));
}
BENCHMARK(BM_SeriesMul);

void BM_MagnusEmbed(benchmark::State& state) {
    auto w = seeded_word(23, 4, 24);
    for (auto _ : state) benchmark::DoNotOptimize(magnus::magnus_embed(w, 4, 6, 0));
}
BENCHMARK(BM_MagnusEmbed);

void BM_Dbar0(benchmark::State& state) {
    auto f = seeded_series(24, 3, 6);
    for (auto _ : state) benchmark::DoNotOptimize(magnus::dbar0(f));
}
BENCHMARK(BM_Dbar0);

void BM_NondegenerateBasis(benchmark::State& state) {
    auto t = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lie::nondegenerate_basis(t, 4, 0));
}
BENCHMARK(BM_NondegenerateBasis)->Arg(6)->Arg(8);

void BM_TensorExpand(benchmark::State& state) {
    auto basis = lie::nondegenerate_basis(6, 3, 0);
    auto z = lie::lie_zero(3, 0);
    for (std::size_t i = 0; i < basis.size(); ++i)
        lie_add_term(z, basis[i], static_cast<long>(i % 3) - 1);
    for (auto _ : state) benchmark::DoNotOptimize(lie::tensor_expand(z, 6));
}
BENCHMARK(BM_TensorExpand);

void BM_MooreBoundaryMatrix(benchmark::State& state) {
    auto t = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lie::moore_boundary_matrix(t, 4, 0));
}
BENCHMARK(BM_MooreBoundaryMatrix)->Arg(5)->Arg(6);

void BM_SmithNormalForm(benchmark::State& state) {
    auto m = seeded_matrix(31, 120, 180, 6);
    for (auto _ : state) benchmark::DoNotOptimize(exactla::smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm);

void BM_ModpRank(benchmark::State& state) {
    auto m = seeded_matrix(32, 300, 450, 8);
    for (auto _ : state) benchmark::DoNotOptimize(exactla::modp_rank(m, 2));
}
BENCHMARK(BM_ModpRank);

void BM_CycleCriterionScan(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(braid::cycle_criterion_scan(3, 50, 41));
}
BENCHMARK(BM_CycleCriterionScan);

} // namespace

BENCHMARK_MAIN();
