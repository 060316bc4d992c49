#include "terraprop/segmentation/metrics.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "terraprop/error.hpp"

namespace terraprop::segmentation {

ConfusionMatrix::ConfusionMatrix(int num_classes)
    : num_classes_(num_classes),
      counts_(static_cast<std::size_t>(num_classes) * num_classes, 0) {
  if (num_classes < 2) throw std::invalid_argument("confusion matrix needs K >= 2");
}

ConfusionMatrix::ConfusionMatrix(int num_classes, std::vector<std::uint64_t> counts)
    : num_classes_(num_classes), counts_(std::move(counts)) {
  if (num_classes < 2) throw std::invalid_argument("confusion matrix needs K >= 2");
  if (counts_.size() != static_cast<std::size_t>(num_classes) * num_classes) {
    throw std::invalid_argument("confusion matrix needs K*K counts");
  }
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::row_sum(int truth) const noexcept {
  std::uint64_t s = 0;
  for (int j = 0; j < num_classes_; ++j) s += (*this)(truth, j);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(int pred) const noexcept {
  std::uint64_t s = 0;
  for (int i = 0; i < num_classes_; ++i) s += (*this)(i, pred);
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.num_classes_ != num_classes_) {
    throw std::invalid_argument("cannot add confusion matrices of different size");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

ConfusionMatrix confusion(const LabelImage& pred, const LabelImage& truth, int num_classes) {
  if (!pred.same_shape(truth)) {
    throw DataError(DataErrc::shape_mismatch, "prediction and truth label images differ in shape");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t p = 0; p < truth.pixel_count(); ++p) {
    const std::uint8_t t = truth.data()[p];
    if (t == kIgnoreLabel) continue;
    const std::uint8_t y = pred.data()[p];
    if (t >= num_classes || y >= num_classes) {
      throw DataError(DataErrc::invalid_value,
                      "label value >= K at pixel " + std::to_string(p));
    }
    ++cm(t, y);
  }
  if (cm.total() == 0) throw DataError(DataErrc::no_scored_pixels, "truth is all ignore");
  return cm;
}

SegmentationMetrics metrics(const ConfusionMatrix& cm, MiouMode mode) {
  const int k_count = cm.size();
  const std::uint64_t total = cm.total();
  if (total == 0) throw DataError(DataErrc::no_scored_pixels, "confusion matrix is empty");

  SegmentationMetrics out;
  out.iou.resize(k_count);
  out.recall.resize(k_count);
  std::uint64_t correct = 0;
  double iou_sum = 0.0;
  int iou_count = 0;
  for (int k = 0; k < k_count; ++k) {
    const std::uint64_t tp = cm(k, k);
    const std::uint64_t row = cm.row_sum(k);
    const std::uint64_t col = cm.col_sum(k);
    correct += tp;
    const std::uint64_t uni = row + col - tp;
    if (uni > 0) {
      out.iou[k] = static_cast<double>(tp) / static_cast<double>(uni);
      iou_sum += *out.iou[k];
      ++iou_count;
    } else {
      out.excluded_from_miou.push_back(k);
    }
    if (row > 0) {
      out.recall[k] = static_cast<double>(tp) / static_cast<double>(row);
    } else {
      out.undefined_recall.push_back(k);
    }
  }
  if (mode == MiouMode::all_classes) {
    out.mean_iou = iou_sum / k_count;
    out.excluded_from_miou.clear();
  } else {
    out.mean_iou = iou_sum / iou_count;
  }
  out.pixel_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return out;
}

}  // namespace terraprop::segmentation
