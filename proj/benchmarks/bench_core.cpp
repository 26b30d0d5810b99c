#include <benchmark/benchmark.h>

#include "eulerspec/lyapunov.hpp"
#include "eulerspec/spectrum.hpp"

namespace {

using namespace eulerspec;

void BM_FlowEval(benchmark::State& state) {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  Vec3 x(0.1, 0.2, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow.eval(x));
    x[0] += 1e-3;
  }
}
BENCHMARK(BM_FlowEval);

void BM_BasRhs(benchmark::State& state) {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  BasState s;
  s.x = Vec3(0.1, 0.2, 0.3);
  s.frame = init_fiber_frame(s.xi_dir, 0);
  for (auto _ : state) benchmark::DoNotOptimize(bas_rhs(flow, s));
}
BENCHMARK(BM_BasRhs);

void BM_IntegrateBas(benchmark::State& state) {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  const Vec3 xi0 = Vec3::UnitZ();
  const FiberFrame frame = init_fiber_frame(xi0, 0);
  IntegratorControls c;
  c.rtol = std::pow(10.0, -static_cast<double>(state.range(0)));
  c.atol = c.rtol * 1e-2;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_bas(flow, Vec3(0.1, 0.2, 0.3), xi0, frame, 10.0, c));
}
BENCHMARK(BM_IntegrateBas)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_EvolveExponents(benchmark::State& state) {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evolve_exponents(flow, Vec3(0.1, 0.2, 0.3), Vec3::UnitZ(), static_cast<double>(state.range(0)), {}));
  }
}
BENCHMARK(BM_EvolveExponents)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SteadinessCheck(benchmark::State& state) {
  const FourierFlow flow = make_abc_flow(1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(check_steady_euler(flow, 16, kDefaultSteadyTol));
}
BENCHMARK(BM_SteadinessCheck)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
