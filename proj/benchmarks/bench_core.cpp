#include <benchmark/benchmark.h>

#include "cnc/cdcl.hpp"
#include "cnc/cube_codec.hpp"
#include "cnc/drat.hpp"
#include "cnc/encoder.hpp"
#include "cnc/lookahead.hpp"
#include "cnc/transform.hpp"

using namespace cnc;

static void BM_Encode(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(encode(static_cast<std::uint64_t>(st.range(0))));
}
BENCHMARK(BM_Encode)->Arg(1000)->Arg(7825)->Unit(benchmark::kMillisecond);

static void BM_Bce(benchmark::State& st) {
  auto f = encode(static_cast<std::uint64_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bce(f));
}
BENCHMARK(BM_Bce)->Arg(1000)->Arg(7825)->Unit(benchmark::kMillisecond);

static void BM_ComputeH(benchmark::State& st) {
  auto f = symmetry_break(bce(encode(static_cast<std::uint64_t>(st.range(0)))).reduced).formula;
  LookaheadSolver s(f);
  for (auto _ : st) benchmark::DoNotOptimize(s.compute_h(HeuristicParams::pythagorean()));
}
BENCHMARK(BM_ComputeH)->Arg(2000)->Arg(7825)->Unit(benchmark::kMillisecond);

static void BM_Select(benchmark::State& st) {
  auto f = symmetry_break(bce(encode(static_cast<std::uint64_t>(st.range(0)))).reduced).formula;
  SplitOptions o;
  o.mode = static_cast<BranchMode>(st.range(1));
  for (auto _ : st) {
    LookaheadSolver s(f);
    benchmark::DoNotOptimize(s.select(o));
  }
}
BENCHMARK(BM_Select)
    ->ArgsProduct({{2000}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

static void BM_Solve(benchmark::State& st) {
  auto f = symmetry_break(bce(encode(static_cast<std::uint64_t>(st.range(0)))).reduced).formula;
  for (auto _ : st) {
    ProofRecorder rec;
    auto r = solve(f, &rec);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Solve)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_CodecRoundTrip(benchmark::State& st) {
  auto f = symmetry_break(bce(encode(1500)).reduced).formula;
  SplitOptions o;
  o.cutoff = CutoffPolicy::parse("depth:8");
  auto tree = split(f, o).tree;
  for (auto _ : st) benchmark::DoNotOptimize(decode_tree(encode_tree(tree)));
  st.counters["nodes"] = static_cast<double>(tree.size());
}
BENCHMARK(BM_CodecRoundTrip);
BENCHMARK_MAIN();
