#include <benchmark/benchmark.h>

#include "obseq/coarse_grain.hpp"
#include "obseq/equivalence.hpp"
#include "obseq/shiftspace.hpp"

using namespace obseq;

static void BM_StreamingBakerStep(benchmark::State& state) {
  StreamingBakerOrbit orb(1);
  for (auto _ : state) {
    orb.step();
    benchmark::DoNotOptimize(orb.x_digits());
  }
}
BENCHMARK(BM_StreamingBakerStep);

static void BM_CoarseGrainDyadic(benchmark::State& state) {
  const Partition part = dyadic_partition(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coarse_grain(System::baker(), part, 100000, 3));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_CoarseGrainDyadic)->Arg(1)->Arg(4);

static void BM_TransitionEstimate(benchmark::State& state) {
  const SymbolSequence seq = coarse_grain(System::baker(), dyadic_partition(2), 1000000, 5);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_transition_matrix(seq));
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_TransitionEstimate);

static void BM_MarkovPropertyTest(benchmark::State& state) {
  const SymbolSequence seq = coarse_grain(System::baker(), dyadic_partition(2), 1000000, 6);
  for (auto _ : state) benchmark::DoNotOptimize(markov_property_test(seq));
}
BENCHMARK(BM_MarkovPropertyTest);

static void BM_ConjugacyCheck(benchmark::State& state) {
  const auto pts = sample_invariant_exact(64, 7);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(conjugacy_check(pts[i++ % pts.size()], 50));
}
BENCHMARK(BM_ConjugacyCheck);

static void BM_MixingCorrelation(benchmark::State& state) {
  const Box a = Box::square(0, 0, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mixing_correlation(System::baker(), a, a, 5, 100000, 8));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_MixingCorrelation);
BENCHMARK_MAIN();
