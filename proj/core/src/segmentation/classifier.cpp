#include "terraprop/segmentation/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>

#include "terraprop/error.hpp"
#include "terraprop/parallel.hpp"

namespace terraprop::segmentation {

PixelClassifier::PixelClassifier(TerrainClassSet classes, FeatureConfig feature_config,
                                 std::vector<double> weights)
    : classes_(std::move(classes)), feature_config_(feature_config), weights_(std::move(weights)) {
  const std::size_t expected =
      static_cast<std::size_t>(classes_.size()) * (feature_config_.feature_count() + 1);
  if (weights_.size() != expected) {
    throw std::invalid_argument("classifier weights must be K x (F + 1) = " +
                                std::to_string(expected) + " values, got " +
                                std::to_string(weights_.size()));
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw std::invalid_argument("classifier weights must be finite");
  }
}

PixelClassifier PixelClassifier::zeros(TerrainClassSet classes, FeatureConfig feature_config) {
  const std::size_t n =
      static_cast<std::size_t>(classes.size()) * (feature_config.feature_count() + 1);
  return PixelClassifier(std::move(classes), feature_config, std::vector<double>(n, 0.0));
}

void PixelClassifier::logits(std::span<const float> features,
                             std::span<double> out) const noexcept {
  const int nf = num_features();
  for (int k = 0; k < num_classes(); ++k) {
    const double* row = weights_.data() + static_cast<std::size_t>(k) * (nf + 1);
    double acc = row[nf];
    for (int f = 0; f < nf; ++f) acc += row[f] * features[f];
    out[k] = acc;
  }
}

namespace {

// Scored pixels gathered into a dense, standardised design matrix.
struct TrainingSet {
  int num_features = 0;
  std::vector<double> z;  // n x F, standardised
  std::vector<std::uint8_t> y;
  std::vector<double> mean;
  std::vector<double> scale;

  [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
};

TrainingSet gather(std::span<const FeatureMap> features, std::span<const LabelImage> labels,
                   int num_classes, int num_features) {
  if (features.size() != labels.size()) {
    throw DataError(DataErrc::shape_mismatch, "feature and label image counts differ");
  }
  TrainingSet set;
  set.num_features = num_features;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& fm = features[i];
    const auto& lab = labels[i];
    if (!fm.same_shape(lab)) {
      throw DataError(DataErrc::shape_mismatch,
                      "features and labels of image " + std::to_string(i) + " differ in shape");
    }
    if (fm.channels() != num_features) {
      throw DataError(DataErrc::shape_mismatch, "feature count " + std::to_string(fm.channels()) +
                                                    " does not match extractor (" +
                                                    std::to_string(num_features) + ")");
    }
    for (std::size_t p = 0; p < lab.pixel_count(); ++p) {
      const std::uint8_t t = lab.data()[p];
      if (t == kIgnoreLabel) continue;
      if (t >= num_classes) {
        throw DataError(DataErrc::invalid_value, "label " + std::to_string(t) + " >= K");
      }
      for (float v : fm.pixel(p)) {
        if (!std::isfinite(v)) throw DataError(DataErrc::invalid_value, "non-finite feature");
        set.z.push_back(v);
      }
      set.y.push_back(t);
    }
  }
  if (set.size() < static_cast<std::size_t>(num_classes)) {
    throw DataError(DataErrc::no_scored_pixels,
                    "need at least K labelled pixels to train, got " + std::to_string(set.size()));
  }

  const std::size_t n = set.size();
  set.mean.assign(num_features, 0.0);
  set.scale.assign(num_features, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (int f = 0; f < num_features; ++f) set.mean[f] += set.z[p * num_features + f];
  }
  for (double& m : set.mean) m /= static_cast<double>(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (int f = 0; f < num_features; ++f) {
      const double d = set.z[p * num_features + f] - set.mean[f];
      set.scale[f] += d * d;
    }
  }
  for (double& s : set.scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (s < 1e-9) s = 1.0;  // constant feature: leave unscaled
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (int f = 0; f < num_features; ++f) {
      double& v = set.z[p * num_features + f];
      v = (v - set.mean[f]) / set.scale[f];
    }
  }
  return set;
}

constexpr std::size_t kBlock = 8192;

// Loss and gradient over the training set. Partial sums are formed per fixed
// block and reduced in block order, so the result is independent of threads.
double loss_and_gradient(const TrainingSet& set, const std::vector<double>& w,
                         const ClassWeights& beta, int num_classes, std::vector<double>* grad,
                         int threads) {
  const int nf = set.num_features;
  const std::size_t stride = static_cast<std::size_t>(nf) + 1;
  const std::size_t blocks = (set.size() + kBlock - 1) / kBlock;
  std::vector<double> block_loss(blocks, 0.0);
  std::vector<std::vector<double>> block_grad;
  if (grad) block_grad.assign(blocks, std::vector<double>(w.size(), 0.0));

  parallel_for(blocks, threads, [&](std::size_t b0, std::size_t b1) {
    std::vector<double> logit(static_cast<std::size_t>(num_classes));
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t begin = b * kBlock;
      const std::size_t end = std::min(set.size(), begin + kBlock);
      double loss = 0.0;
      for (std::size_t p = begin; p < end; ++p) {
        const double* x = set.z.data() + p * nf;
        for (int k = 0; k < num_classes; ++k) {
          const double* row = w.data() + k * stride;
          double acc = row[nf];
          for (int f = 0; f < nf; ++f) acc += row[f] * x[f];
          logit[k] = acc;
        }
        softmax(logit, logit);
        const int truth = set.y[p];
        const double bw = beta[truth];
        loss -= bw * std::log(std::max(logit[truth], kProbabilityFloor));
        if (grad) {
          auto& g = block_grad[b];
          for (int k = 0; k < num_classes; ++k) {
            const double coef = bw * (logit[k] - (k == truth ? 1.0 : 0.0));
            double* row = g.data() + k * stride;
            for (int f = 0; f < nf; ++f) row[f] += coef * x[f];
            row[nf] += coef;
          }
        }
      }
      block_loss[b] = loss;
    }
  });

  const double inv_n = 1.0 / static_cast<double>(set.size());
  double loss = 0.0;
  for (double l : block_loss) loss += l;
  if (grad) {
    grad->assign(w.size(), 0.0);
    for (const auto& g : block_grad) {
      for (std::size_t i = 0; i < g.size(); ++i) (*grad)[i] += g[i];
    }
    for (double& g : *grad) g *= inv_n;
  }
  return loss * inv_n;
}

}  // namespace

TrainResult train_classifier(std::span<const FeatureMap> features,
                             std::span<const LabelImage> labels, const ClassWeights& weights,
                             const TerrainClassSet& classes, const FeatureConfig& feature_config,
                             const TrainingHyperparams& hyper, int threads) {
  const int num_classes = classes.size();
  const int nf = feature_config.feature_count();
  if (weights.size() != num_classes) {
    throw std::invalid_argument("class weight count differs from class set size");
  }
  if (hyper.epochs < 0 || !(hyper.learning_rate > 0.0) || !(hyper.decay_rate > 0.0) ||
      hyper.decay_epochs < 1 || hyper.init_scale < 0.0) {
    throw std::invalid_argument("invalid training hyperparameters");
  }

  const TrainingSet set = gather(features, labels, num_classes, nf);
  const std::size_t stride = static_cast<std::size_t>(nf) + 1;

  TrainResult result{PixelClassifier::zeros(classes, feature_config), 0.0, {}, false};
  {
    std::vector<bool> seen(static_cast<std::size_t>(num_classes), false);
    for (auto t : set.y) seen[t] = true;
    if (std::count(seen.begin(), seen.end(), true) == 1) {
      result.single_class = true;
      std::cerr << "warning: training labels contain a single class; fitting anyway\n";
    }
  }

  // Weights in standardised feature space.
  std::vector<double> w(static_cast<std::size_t>(num_classes) * stride, 0.0);
  if (hyper.init_scale > 0.0) {
    std::mt19937_64 rng(hyper.seed);
    std::normal_distribution<double> normal(0.0, hyper.init_scale);
    for (double& v : w) v = normal(rng);
  }

  std::vector<double> grad;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double loss = loss_and_gradient(set, w, weights, num_classes, &grad, threads);
    if (!std::isfinite(loss)) {
      throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                               " (loss is not finite); lower the learning rate");
    }
    result.loss_history.push_back(loss);
    const double lr =
        hyper.learning_rate * std::pow(hyper.decay_rate, epoch / hyper.decay_epochs);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * grad[i];
  }
  result.final_loss = loss_and_gradient(set, w, weights, num_classes, nullptr, threads);
  if (!std::isfinite(result.final_loss)) {
    throw std::runtime_error("training diverged: final loss is not finite");
  }
  result.loss_history.push_back(result.final_loss);

  if (hyper.epochs == 0 && hyper.init_scale == 0.0) return result;

  // Fold standardisation into the affine map: w.(x - m)/s + b.
  std::vector<double> raw(w.size());
  for (int k = 0; k < num_classes; ++k) {
    double bias = w[k * stride + nf];
    for (int f = 0; f < nf; ++f) {
      const double coef = w[k * stride + f] / set.scale[f];
      raw[k * stride + f] = coef;
      bias -= coef * set.mean[f];
    }
    raw[k * stride + nf] = bias;
  }
  result.classifier = PixelClassifier(classes, feature_config, std::move(raw));
  return result;
}

TrainResult train_classifier(const FeatureMap& features, const LabelImage& labels,
                             const ClassWeights& weights, const TerrainClassSet& classes,
                             const FeatureConfig& feature_config,
                             const TrainingHyperparams& hyper, int threads) {
  return train_classifier(std::span<const FeatureMap>(&features, 1),
                          std::span<const LabelImage>(&labels, 1), weights, classes,
                          feature_config, hyper, threads);
}

ProbabilityMap predict_probabilities(const PixelClassifier& classifier,
                                     const FeatureMap& features, int threads) {
  if (features.channels() != classifier.num_features()) {
    throw DataError(DataErrc::shape_mismatch,
                    "feature map has " + std::to_string(features.channels()) +
                        " channels, classifier expects " +
                        std::to_string(classifier.num_features()));
  }
  const int num_classes = classifier.num_classes();
  ProbabilityMap out(features.height(), features.width(), num_classes);
  parallel_for(features.pixel_count(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> buf(static_cast<std::size_t>(num_classes));
    for (std::size_t p = begin; p < end; ++p) {
      classifier.logits(features.pixel(p), buf);
      softmax(buf, buf);
      auto dst = out.pixel(p);
      for (int k = 0; k < num_classes; ++k) dst[k] = static_cast<float>(buf[k]);
    }
  });
  return out;
}

LabelImage argmax_labels(const ProbabilityMap& probabilities) {
  LabelImage out(probabilities.height(), probabilities.width(), 1);
  for (std::size_t p = 0; p < probabilities.pixel_count(); ++p) {
    const auto px = probabilities.pixel(p);
    out.data()[p] =
        static_cast<std::uint8_t>(std::max_element(px.begin(), px.end()) - px.begin());
  }
  return out;
}

}  // namespace terraprop::segmentation
