#include "vass/sim.hpp"

#include <benchmark/benchmark.h>

using namespace vass;

namespace {

ProbModel ring(int n) {
  std::vector<std::string> names;
  std::vector<Transition> ts;
  std::vector<Rational> p;
  for (int s = 0; s < n; ++s) {
    names.push_back("q" + std::to_string(s));
    ts.push_back({s, (s + 1) % n, {1, -1}});
    ts.push_back({s, (s + n - 1) % n, {-1, 1}});
    p.push_back(Rational(1, 2));
    p.push_back(Rational(1, 2));
  }
  return ProbModel(Model(2, Domain::Z, names, {0}, ts), p, {Rational(1)});
}

SimConfig config(benchmark::State& st) {
  SimConfig c;
  c.horizon = 10000;
  c.episodes = st.range(0);
  c.seed = 3;
  return c;
}

void BM_SimulateSerial(benchmark::State& st) {
  auto pm = ring(8);
  const std::vector<StateSet> S{{0, 2, 4}, {1, 3}};
  auto cfg = config(st);
  for (auto _ : st) benchmark::DoNotOptimize(simulate_serial(pm, S, cfg));
  st.SetItemsProcessed(st.iterations() * cfg.episodes * cfg.horizon);
}

void BM_SimulateParallel(benchmark::State& st) {
  auto pm = ring(8);
  const std::vector<StateSet> S{{0, 2, 4}, {1, 3}};
  auto cfg = config(st);
  for (auto _ : st) benchmark::DoNotOptimize(simulate(pm, S, cfg));
  st.SetItemsProcessed(st.iterations() * cfg.episodes * cfg.horizon);
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
