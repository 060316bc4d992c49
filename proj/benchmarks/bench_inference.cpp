#include <benchmark/benchmark.h>

#include <random>

#include "terraprop/inference/property_map.hpp"

namespace {

using namespace terraprop;

ProbabilityMap random_probabilities(int h, int w, int k) {
  ProbabilityMap p(h, w, k);
  std::mt19937_64 rng(1);
  std::gamma_distribution<float> gamma(0.5f, 1.0f);
  for (std::size_t i = 0; i < p.pixel_count(); ++i) {
    auto px = p.pixel(i);
    float s = 0.0f;
    for (auto& v : px) s += (v = gamma(rng) + 1e-6f);
    for (auto& v : px) v /= s;
  }
  return p;
}

void BM_InferPropertyMaps(benchmark::State& state) {
  const auto model = terramech::reference_property_model();
  const auto probs = random_probabilities(540, 960, model.size());
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(inference::infer_property_maps(probs, model, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(probs.pixel_count()));
}
BENCHMARK(BM_InferPropertyMaps)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_MixtureMoments(benchmark::State& state) {
  const auto model = terramech::reference_property_model();
  const std::vector<double> p{0.3, 0.2, 0.1, 0.2, 0.1, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        inference::mixture_moments(p, model, terramech::Parameter::friction_angle));
  }
}
BENCHMARK(BM_MixtureMoments);

}  // namespace

BENCHMARK_MAIN();
