// Microbenchmarks for the hot paths: the all-roots solver, residue
// extraction, single tracer steps, and whole-locus construction.
#include <benchmark/benchmark.h>

#include "rloci/bench.hpp"
#include "rloci/tracer.hpp"

using namespace rloci;

namespace {

const BenchCase& corpus_case(const char* name) {
    static const std::vector<BenchCase> cases = corpus();
    for (const auto& bc : cases)
        if (bc.name == name) return bc;
    throw std::logic_error("unknown corpus case");
}

void BM_FindRoots(benchmark::State& state, const char* name) {
    const Polynomial den = corpus_case(name).plant.den();
    for (auto _ : state) {
        auto rs = find_roots(den);
        benchmark::DoNotOptimize(rs.roots.data());
    }
}

void BM_ClosedLoopResidues(benchmark::State& state) {
    const RationalTF plant = corpus_case("g2").plant;
    double k = 0.0;
    for (auto _ : state) {
        auto set = closed_loop_residues(plant, k);
        benchmark::DoNotOptimize(set.entries.data());
        k += 0.01;
    }
}

void BM_StepUpdate(benchmark::State& state) {
    const RationalTF plant = corpus_case("g10").plant;
    auto est = find_roots(plant.den()).roots;
    for (auto _ : state) {
        auto upd = step_update(est, plant, 1.0, 0.01, true);
        benchmark::DoNotOptimize(upd.data());
    }
}

void BM_TraceLocus(benchmark::State& state, bool stabilizer) {
    const BenchCase& bc = corpus_case("g10");
    TraceConfig cfg;
    cfg.k_start = bc.k_start;
    cfg.k_end = bc.k_end;
    cfg.dk = bc.dk;
    cfg.stabilizer_on = stabilizer;
    for (auto _ : state) {
        Locus locus = trace_locus(bc.plant, cfg);
        benchmark::DoNotOptimize(locus.branches.data());
    }
}

void BM_ExactLocus(benchmark::State& state) {
    const BenchCase& bc = corpus_case("g10");
    TraceConfig cfg;
    cfg.k_start = bc.k_start;
    cfg.k_end = bc.k_end;
    cfg.dk = bc.dk;
    for (auto _ : state) {
        Locus locus = exact_locus(bc.plant, cfg);
        benchmark::DoNotOptimize(locus.branches.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_FindRoots, g1_degree2, "g1");
BENCHMARK_CAPTURE(BM_FindRoots, g2_degree3, "g2");
BENCHMARK_CAPTURE(BM_FindRoots, g10_degree4, "g10");
BENCHMARK(BM_ClosedLoopResidues);
BENCHMARK(BM_StepUpdate);
BENCHMARK_CAPTURE(BM_TraceLocus, stabilized, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TraceLocus, unstabilized, false)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactLocus)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
