// Serial reference kernels against their OpenMP twins on the two exhaustive searches.

#include "covercomm/amalgam.hpp"
#include "covercomm/covering.hpp"

#include <benchmark/benchmark.h>

using namespace covercomm;

namespace {

GraphPtr complete_graph(int n, const std::string& name)
{
    Graph::Builder b(name);
    for (int i = 0; i < n; ++i)
        b.add_vertex("v" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            b.add_edge("e" + std::to_string(i) + std::to_string(j), "v" + std::to_string(i), "v" + std::to_string(j));
    return b.build_shared();
}

GraphPtr k33()
{
    Graph::Builder b("K33");
    for (int i = 0; i < 3; ++i) {
        b.add_vertex("u" + std::to_string(i));
        b.add_vertex("w" + std::to_string(i));
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            b.add_edge("e" + std::to_string(i) + std::to_string(j), "u" + std::to_string(i), "w" + std::to_string(j));
    return b.build_shared();
}

SearchOptions options_for(const benchmark::State& state)
{
    SearchOptions o;
    o.kernel = state.range(0) == 0 ? Kernel::Serial : Kernel::Parallel;
    o.threads = state.range(0) == 0 ? 1 : static_cast<int>(state.range(0));
    return o;
}

void label(benchmark::State& state)
{
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(state.range(0)));
}

void BM_CommonCover(benchmark::State& state)
{
    const GraphPtr a = complete_graph(4, "K4"), b = k33();
    const SearchOptions o = options_for(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(find_common_cover(a, b, 96, o));
    label(state);
}

// Sym(4) *_{C2} D4, faithful on both factors.
FiniteAmalgam sym4_d4()
{
    const PermGroup s4{4, {parse_perm("(1 2)", 4), parse_perm("(1 2 3 4)", 4)}};
    const PermGroup d4{4, {parse_perm("(1 3)", 4), parse_perm("(1 2 3 4)", 4)}};
    const PermGroup c2{2, {parse_perm("(1 2)", 2)}};
    return {s4, d4, c2, {parse_perm("(1 2)", 4)}, {parse_perm("(1 3)", 4)}, 24, 8, 2};
}

void BM_FiniteQuotient(benchmark::State& state)
{
    const FiniteAmalgam fa = sym4_d4();
    const SearchOptions o = options_for(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(find_finite_quotient(fa, 6, true, o));
    label(state);
}

} // namespace

BENCHMARK(BM_CommonCover)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FiniteQuotient)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
