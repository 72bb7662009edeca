#include <benchmark/benchmark.h>

#include "qlnet/catalog.hpp"
#include "qlnet/dynamics.hpp"
#include "qlnet/equilibria.hpp"
#include "qlnet/rng.hpp"
#include "qlnet/spectral.hpp"

namespace {

using namespace qlnet;

NetworkGame bench_game(std::int64_t n, bool full) {
  return shapley_game(0.2, {full ? Topology::kFull : Topology::kRing, static_cast<std::size_t>(n)});
}

void BM_QStep(benchmark::State& state) {
  const NetworkGame g = bench_game(state.range(0), state.range(1) != 0);
  LearnerConfig cfg = LearnerConfig::uniform(g.num_agents(), 1.0);
  const JointStrategy x = random_strategy(g, 1);
  LearnerState s{warm_start_q(g, x), x};
  for (auto _ : state) {
    s = q_step(g, s, cfg);
    benchmark::DoNotOptimize(s.q.values.data());
  }
}
BENCHMARK(BM_QStep)->ArgsProduct({{3, 15, 60}, {0, 1}});

void BM_Rewards(benchmark::State& state) {
  const NetworkGame g = bench_game(state.range(0), true);
  const JointStrategy x = random_strategy(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rewards(g, x));
}
BENCHMARK(BM_Rewards)->Arg(15)->Arg(60);

void BM_QLearningRun(benchmark::State& state) {
  const NetworkGame g = bench_game(15, false);
  LearnerConfig cfg = LearnerConfig::uniform(15, 0.5);
  cfg.horizon = 2000;
  cfg.window = 500;
  for (auto _ : state) benchmark::DoNotOptimize(run_q_learning(g, cfg).steps_run());
}
BENCHMARK(BM_QLearningRun)->Unit(benchmark::kMillisecond);

void BM_OpNormTwo(benchmark::State& state) {
  CounterRng rng(3);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(op_norm_two(m));
}
BENCHMARK(BM_OpNormTwo)->Arg(3)->Arg(45)->Arg(180);

void BM_StabilityReport(benchmark::State& state) {
  const NetworkGame g = bench_game(state.range(0), true);
  for (auto _ : state) benchmark::DoNotOptimize(stability_report(g).c2);
}
BENCHMARK(BM_StabilityReport)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_LambertW(benchmark::State& state) {
  double z = -0.36;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w(z));
    z = z > 9.0 ? -0.36 : z + 0.37;
  }
}
BENCHMARK(BM_LambertW);

}  // namespace
BENCHMARK_MAIN();
