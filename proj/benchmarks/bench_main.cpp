#include <benchmark/benchmark.h>

#include "dtswarm/assignment.hpp"
#include "dtswarm/cvt.hpp"
#include "dtswarm/rng.hpp"
#include "dtswarm/runtime.hpp"
#include "dtswarm/scenario.hpp"
#include "dtswarm/snn.hpp"

namespace {

dtswarm::Scenario preset(const char* name) {
  return dtswarm::load_scenario(std::string(DTSWARM_BENCH_PRESET_DIR) + "/" + name + ".yaml");
}

void BM_StepNetwork(benchmark::State& state) {
  auto s = preset("case1");
  s.snn.n_neurons = static_cast<int>(state.range(0));
  auto net = dtswarm::snn::init_network(s.snn, 1);
  Eigen::VectorXd e(3);
  e << 0.3, -0.2, 0.1;
  for (auto _ : state) {
    dtswarm::snn::update_slow_weights(net, s.snn, e);
    benchmark::DoNotOptimize(dtswarm::snn::step_network(net, s.snn, e));
  }
}
BENCHMARK(BM_StepNetwork)->Arg(100)->Arg(150)->Arg(400);

void BM_RunCvt(benchmark::State& state) {
  const auto s = preset("case1");
  for (auto _ : state) {
    dtswarm::Rng rng(7);
    benchmark::DoNotOptimize(dtswarm::cvt::run_cvt(s.region, s.lloyd, rng));
  }
}
BENCHMARK(BM_RunCvt)->Unit(benchmark::kMillisecond);

void BM_Hungarian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  dtswarm::Rng rng(3);
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform(0.0, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(dtswarm::assignment::solve(cost));
}
BENCHMARK(BM_Hungarian)->Arg(15)->Arg(64)->Arg(256);

void BM_Episode(benchmark::State& state) {
  const auto s = preset(state.range(0) == 1 ? "case1" : "case2");
  for (auto _ : state) benchmark::DoNotOptimize(dtswarm::runtime::run_episode(s));
}
BENCHMARK(BM_Episode)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
