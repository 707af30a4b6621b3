// Serial reference vs OpenMP kernels. Pairs share arguments so the ratio of
// their times is the parallel speedup; set MDISC_WORKERS to vary threads.

#include "mdisc/coloring.hpp"
#include "mdisc/cover.hpp"
#include "mdisc/entropy_net.hpp"
#include "mdisc/measure.hpp"
#include "mdisc/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace mdisc;

namespace {

const Exponent kInf = Exponent::infinity();

Instance random_family(std::size_t n, Index m, std::uint64_t seed) {
  return gen_random({n, m, Exponent(2), kInf, {}, {}, seed});
}

template <bool Serial>
void bm_brute_force(benchmark::State& state) {
  const Instance inst = random_family(static_cast<std::size_t>(state.range(0)), 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize((Serial ? serial::brute_force_min(inst, kInf) : brute_force_min(inst, kInf)).value);
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (state.range(0) - 1)));
}

template <bool Serial>
void bm_measure_draws(benchmark::State& state) {
  const EvaluationMap map(gen_diagonal_spencer(32, 32, 2));
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize((Serial ? serial::measure_draws(map, kInf, samples, 3) : measure_draws(map, kInf, samples, 3)).values.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Serial>
void bm_enumerate_cover(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Index m = 4;
  const EvaluationMap map(gen_random({n, m, kInf, kInf, {}, {}, 4}));
  const std::vector<SymMatrix> starts = {(1.0 / m) * SymMatrix::identity(m)};
  for (auto _ : state)
    benchmark::DoNotOptimize((Serial ? serial::enumerate_cover(map, starts, MirrorSetup::spectraplex(), std::log(double(m)))
                                    : enumerate_cover(map, starts, MirrorSetup::spectraplex(), std::log(double(m))))
                                 .distinct);
}

template <bool Serial>
void bm_verify_cover(benchmark::State& state) {
  const Index m = static_cast<Index>(state.range(0));
  const EvaluationMap map(gen_random({2 * static_cast<std::size_t>(m), m, kInf, kInf, {}, {}, 5}));
  const MirrorSetup setup = MirrorSetup::spectraplex();
  const auto select = nearest_start(setup, {(1.0 / m) * SymMatrix::identity(m)});
  const auto us = sample_feasible(setup, m, 64, 6);
  for (auto _ : state) benchmark::DoNotOptimize((Serial ? serial::verify_cover(map, select, setup, us) : verify_cover(map, select, setup, us)).successes);
  state.SetItemsProcessed(state.iterations() * 64);
}

template <bool Serial>
void bm_net_error(benchmark::State& state) {
  const EntropyNet net = build_entropy_net(8, 2, 8);
  Rng rng(7);
  std::vector<SymMatrix> xs;
  for (int i = 0; i < 32; ++i) xs.push_back(random_block_density(rng, 8, 2));
  for (auto _ : state) benchmark::DoNotOptimize((Serial ? serial::net_error(net, xs) : net_error(net, xs)).max_entropy);
  state.SetItemsProcessed(state.iterations() * 32);
}


}  // namespace

BENCHMARK(bm_brute_force<false>)->Name("brute_force/omp")->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_brute_force<true>)->Name("brute_force/serial")->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_measure_draws<false>)->Name("measure_draws/omp")->Arg(1 << 15)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_measure_draws<true>)->Name("measure_draws/serial")->Arg(1 << 15)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_enumerate_cover<false>)->Name("enumerate_cover/omp")->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_enumerate_cover<true>)->Name("enumerate_cover/serial")->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_verify_cover<false>)->Name("verify_cover/omp")->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_verify_cover<true>)->Name("verify_cover/serial")->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_net_error<false>)->Name("net_error/omp_dp")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_net_error<true>)->Name("net_error/serial_materialized")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
