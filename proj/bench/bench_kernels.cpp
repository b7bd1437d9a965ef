// Serial reference vs OpenMP for the three data-parallel kernels.

#include <benchmark/benchmark.h>

#include "adelic/kernels.hpp"
#include "adelic/parse.hpp"

using namespace adelic;

namespace {

const Formula& sentence() {
  static const Formula f = parse_formula("forall x. exists y. x*y*x = x", ring_signature());
  return f;
}

void BM_zmod_sweep(benchmark::State& st) {
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(zmod_sweep(sentence(), 150, {}, parallel));
}
BENCHMARK(BM_zmod_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_batch_product_eval(benchmark::State& st) {
  const bool parallel = st.range(0) != 0;
  std::vector<ProductStructure> ps;
  for (int a = 2; a <= 9; ++a)
    for (int b = 2; b <= 9; ++b) ps.push_back(parse_product_spec("zmod:" + std::to_string(a) + ",zmod:" + std::to_string(b)));
  for (auto _ : st) benchmark::DoNotOptimize(batch_product_eval(sentence(), ps, parallel));
}
BENCHMARK(BM_batch_product_eval)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_hilbert_sweep(benchmark::State& st) {
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(hilbert_sweep(30, parallel));
}
BENCHMARK(BM_hilbert_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
