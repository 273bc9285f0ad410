#include <benchmark/benchmark.h>

#include "obddlab/fingerprint.hpp"
#include "obddlab/qobdd.hpp"
#include "obddlab/reorder.hpp"
#include "obddlab/subfunctions.hpp"
#include "obddlab/zoo.hpp"

using namespace obddlab;

static void BM_SubfunctionCount(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const BoolFn f = eq(n);
  const Partition cut(VarOrder::identity(n), n / 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(subfunction_count(f, cut));
}
BENCHMARK(BM_SubfunctionCount)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

static void BM_NMinDp(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const BoolFn f = mod_p(3, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(n_min(f).value);
}
BENCHMARK(BM_NMinDp)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

static void BM_NMinReq(benchmark::State &state) {
  const BoolFn f = req(BlockLayout(4));
  for (auto _ : state)
    benchmark::DoNotOptimize(n_min(f).value);
}
BENCHMARK(BM_NMinReq);

static void BM_FingerprintTable(benchmark::State &state) {
  const int q = static_cast<int>(state.range(0));
  const QuantumProgram p = fingerprint_eq_qobdd(q, {1, 3, 5, 7});
  for (auto _ : state)
    benchmark::DoNotOptimize(acceptance_table(p));
}
BENCHMARK(BM_FingerprintTable)->Arg(4)->Arg(8)->Arg(12);

static void BM_LiftedSimulation(benchmark::State &state) {
  const QuantumProgram p = xor_reorder_qobdd(fingerprint_eq_qobdd(4, {1, 1, 2}), BlockLayout(4));
  const Simulator sim(p);
  const Bits x(static_cast<std::size_t>(p.n), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(sim.accept_probability(x));
}
BENCHMARK(BM_LiftedSimulation);
BENCHMARK_MAIN();
