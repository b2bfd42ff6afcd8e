// Serial reference against the OpenMP kernels. Each benchmark takes the
// execution mode as its argument: 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "metachain/config.hpp"
#include "metachain/hierarchy.hpp"
#include "metachain/ising.hpp"
#include "metachain/montecarlo.hpp"
#include "metachain/report.hpp"

using namespace metachain;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::kParallel : Execution::kSerial; }

const Chain& w5() {
  static const Chain c = [] {
    std::ifstream in(std::string(METACHAIN_FIXTURE_DIR) + "/w5.json");
    std::stringstream ss;
    ss << in.rdbuf();
    return build_chain(parse_model(ss.str()));
  }();
  return c;
}

const Chain& ising_l3() {
  static const Chain c = build_ising_chain(make_ising(3, Rational(4, 5)));
  return c;
}

void BM_SimulateExit(benchmark::State& state) {
  const auto nc = evaluate(w5(), 0.1);
  SimulationOptions opt;
  opt.samples = 2000;
  opt.execution = mode(state);
  const std::vector<std::vector<int>> targets{{0}, {4}};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_exit(nc, 2, targets, opt));
}

void BM_IsingBuild(benchmark::State& state) {
  const auto m = make_ising(4, Rational(4, 5));
  for (auto _ : state) benchmark::DoNotOptimize(build_ising_chain(m, 4, mode(state)));
}

void BM_EnumerateOmega(benchmark::State& state) {
  const auto m = make_ising(4, Rational(8, 5));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_omega_o(m, mode(state)));
}

void BM_Hierarchy(benchmark::State& state) {
  EngineOptions opt;
  opt.execution = mode(state);
  opt.cross_check = false;
  for (auto _ : state) benchmark::DoNotOptimize(full_hierarchy(ising_l3(), opt));
}

}  // namespace

BENCHMARK(BM_SimulateExit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IsingBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateOmega)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hierarchy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
