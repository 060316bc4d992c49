#include <benchmark/benchmark.h>

#include "terraprop/terramech/identify.hpp"

namespace {

using namespace terraprop::terramech;

void BM_ForwardWheel(benchmark::State& state) {
  const WheelGeometry wheel;
  const SoilParams soil;
  const int intervals = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_wheel(1.36, 29.6, 0.3, 0.3, wheel, soil, intervals));
  }
}
BENCHMARK(BM_ForwardWheel)->Arg(50)->Arg(200)->Arg(800);

// Reusing the arc: one exp per node per sinkage exponent, friction angle free.
void BM_ContactArcLoads(benchmark::State& state) {
  const ContactArc arc(0.3, 0.3, 0.0, WheelGeometry{}, SoilParams{});
  double n = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(arc.loads(n, 0.6));
    n = n < 2.0 ? n + 1e-3 : 0.5;
  }
}
BENCHMARK(BM_ContactArcLoads);

void BM_Identify(benchmark::State& state) {
  const WheelGeometry wheel;
  const SoilParams soil;
  const double s = 0.05 + 0.85 * state.range(0) / 100.0;
  const auto loads = forward_wheel(1.1, 33.0, s, 0.3, wheel, soil);
  for (auto _ : state) {
    benchmark::DoNotOptimize(identify_from_loads(loads.normal_force, loads.torque, s, 0.3, wheel, soil));
  }
}
BENCHMARK(BM_Identify)->Arg(0)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace
