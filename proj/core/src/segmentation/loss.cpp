#include "terraprop/segmentation/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "terraprop/error.hpp"

namespace terraprop::segmentation {

ClassWeights::ClassWeights(std::vector<double> beta) : beta_(std::move(beta)) {
  if (beta_.size() < 2) throw std::invalid_argument("class weights need K >= 2 entries");
  double sum = 0.0;
  for (double b : beta_) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw std::invalid_argument("class weights must be positive and finite");
    }
    sum += b;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("class weights must sum to 1");
}

ClassWeights ClassWeights::uniform(int num_classes) {
  return ClassWeights(std::vector<double>(static_cast<std::size_t>(num_classes),
                                          1.0 / num_classes));
}

ClassWeights compute_class_weights(std::span<const double> proportions, double c) {
  if (proportions.size() < 2) throw std::invalid_argument("need proportions for K >= 2 classes");
  if (!(c > 0.0)) throw std::invalid_argument("weight constant c must be positive");
  double total = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("proportions must lie in [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("proportions must sum to 1");

  std::vector<double> inv(proportions.size());
  for (std::size_t k = 0; k < proportions.size(); ++k) {
    const double log_term = std::log(proportions[k] + c);
    if (!(log_term > 0.0)) {
      throw std::invalid_argument("ln(p_k + c) <= 0 for class " + std::to_string(k) +
                                  "; weight undefined (need p_k + c > 1)");
    }
    inv[k] = 1.0 / log_term;
  }
  const double norm = std::accumulate(inv.begin(), inv.end(), 0.0);
  for (double& w : inv) w /= norm;
  return ClassWeights(std::move(inv));
}

std::vector<double> label_proportions(std::span<const LabelImage> labels, int num_classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  std::size_t scored = 0;
  for (const auto& image : labels) {
    for (std::uint8_t v : image.data()) {
      if (v == kIgnoreLabel) continue;
      if (v >= num_classes) {
        throw DataError(DataErrc::invalid_value,
                        "label value " + std::to_string(v) + " >= class count");
      }
      ++counts[v];
      ++scored;
    }
  }
  if (scored == 0) throw DataError(DataErrc::no_scored_pixels, "label images are all ignore");
  std::vector<double> out(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out[k] = static_cast<double>(counts[k]) / static_cast<double>(scored);
  }
  return out;
}

void softmax(std::span<const double> logits, std::span<double> out) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  if (!std::isfinite(peak)) throw std::invalid_argument("softmax: non-finite logit");
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    if (!std::isfinite(logits[k])) throw std::invalid_argument("softmax: non-finite logit");
    out[k] = std::exp(logits[k] - peak);
    sum += out[k];
  }
  for (double& v : out) v /= sum;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logit vector");
  std::vector<double> out(logits.size());
  softmax(logits, out);
  return out;
}

ProbabilityMap softmax_probabilities(const Raster<double>& logits) {
  ProbabilityMap out(logits.height(), logits.width(), logits.channels());
  std::vector<double> buffer(static_cast<std::size_t>(logits.channels()));
  for (std::size_t i = 0; i < logits.pixel_count(); ++i) {
    softmax(logits.pixel(i), buffer);
    auto dst = out.pixel(i);
    std::transform(buffer.begin(), buffer.end(), dst.begin(),
                   [](double p) { return static_cast<float>(p); });
  }
  return out;
}

namespace {

std::size_t check_loss_inputs(const Raster<double>& logits, const LabelImage& labels,
                              const ClassWeights& weights) {
  if (!logits.same_shape(labels)) {
    throw DataError(DataErrc::shape_mismatch, "logits and labels differ in height/width");
  }
  if (logits.channels() != weights.size()) {
    throw DataError(DataErrc::shape_mismatch, "logit channel count differs from class weights");
  }
  std::size_t scored = 0;
  for (std::uint8_t v : labels.data()) {
    if (v == kIgnoreLabel) continue;
    if (v >= weights.size()) {
      throw DataError(DataErrc::invalid_value, "label " + std::to_string(v) + " >= K");
    }
    ++scored;
  }
  if (scored == 0) throw DataError(DataErrc::no_scored_pixels, "label image is all ignore");
  return scored;
}

}  // namespace

double weighted_cross_entropy(const Raster<double>& logits, const LabelImage& labels,
                              const ClassWeights& weights) {
  const std::size_t scored = check_loss_inputs(logits, labels, weights);
  std::vector<double> probs(static_cast<std::size_t>(logits.channels()));
  double total = 0.0;
  for (std::size_t i = 0; i < logits.pixel_count(); ++i) {
    const std::uint8_t truth = labels.data()[i];
    if (truth == kIgnoreLabel) continue;
    softmax(logits.pixel(i), probs);
    total -= weights[truth] * std::log(std::max(probs[truth], kProbabilityFloor));
  }
  return total / static_cast<double>(scored);
}

Raster<double> wce_gradient(const Raster<double>& logits, const LabelImage& labels,
                            const ClassWeights& weights) {
  const std::size_t scored = check_loss_inputs(logits, labels, weights);
  Raster<double> grad(logits.height(), logits.width(), logits.channels(), 0.0);
  std::vector<double> probs(static_cast<std::size_t>(logits.channels()));
  const double inv_scored = 1.0 / static_cast<double>(scored);
  for (std::size_t i = 0; i < logits.pixel_count(); ++i) {
    const std::uint8_t truth = labels.data()[i];
    if (truth == kIgnoreLabel) continue;
    softmax(logits.pixel(i), probs);
    const double scale = weights[truth] * inv_scored;
    auto g = grad.pixel(i);
    for (std::size_t k = 0; k < probs.size(); ++k) {
      g[k] = scale * (probs[k] - (k == truth ? 1.0 : 0.0));
    }
  }
  return grad;
}

}  // namespace terraprop::segmentation
