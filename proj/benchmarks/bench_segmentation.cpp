#include <benchmark/benchmark.h>

#include "terraprop/segmentation/classifier.hpp"
#include "terraprop/segmentation/synthetic.hpp"

namespace {

using namespace terraprop::segmentation;

const SyntheticCorpus& corpus() {
  static const SyntheticCorpus c = [] {
    SyntheticCorpusConfig cfg;
    cfg.train_images = 2;
    cfg.test_images = 1;
    cfg.width = cfg.height = 256;
    return generate_synthetic_corpus(cfg);
  }();
  return c;
}

void BM_ExtractFeatures(benchmark::State& state) {
  const auto& img = corpus().train[0].image;
  const FeatureConfig fc{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(img, fc));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.pixel_count()));
}
BENCHMARK(BM_ExtractFeatures)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PredictProbabilities(benchmark::State& state) {
  const auto& c = corpus();
  const auto features = extract_features(c.train[0].image);
  TrainingHyperparams hyper;
  hyper.epochs = 20;
  const auto clf = train_classifier(features, c.train[0].full_labels, ClassWeights::uniform(6),
                                    c.classes, FeatureConfig{}, hyper)
                       .classifier;
  for (auto _ : state) benchmark::DoNotOptimize(predict_probabilities(clf, features));
}
BENCHMARK(BM_PredictProbabilities)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  const auto& c = corpus();
  const auto features = extract_features(c.train[0].image);
  TrainingHyperparams hyper;
  hyper.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_classifier(features, c.train[0].full_labels,
                                              ClassWeights::uniform(6), c.classes,
                                              FeatureConfig{}, hyper));
  }
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
