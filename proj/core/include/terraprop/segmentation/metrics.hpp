#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "terraprop/raster.hpp"

namespace terraprop::segmentation {

/// K x K pixel counts; rows are ground truth, columns are predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);
  ConfusionMatrix(int num_classes, std::vector<std::uint64_t> counts);

  [[nodiscard]] int size() const noexcept { return num_classes_; }
  [[nodiscard]] std::uint64_t operator()(int truth, int pred) const noexcept {
    return counts_[static_cast<std::size_t>(truth) * num_classes_ + pred];
  }
  std::uint64_t& operator()(int truth, int pred) noexcept {
    return counts_[static_cast<std::size_t>(truth) * num_classes_ + pred];
  }
  [[nodiscard]] std::uint64_t total() const noexcept;
  [[nodiscard]] std::uint64_t row_sum(int truth) const noexcept;
  [[nodiscard]] std::uint64_t col_sum(int pred) const noexcept;
  [[nodiscard]] const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  int num_classes_;
  std::vector<std::uint64_t> counts_;
};

/// Counts (truth, prediction) pairs over pixels whose truth is not ignored.
/// Throws DataError when shapes differ, nothing is scored, or a label >= K.
ConfusionMatrix confusion(const LabelImage& pred, const LabelImage& truth, int num_classes);

enum class MiouMode {
  present_classes,  // average over classes seen in truth or prediction
  all_classes,      // average over all K; classes never seen count as IoU 0
};

struct SegmentationMetrics {
  std::vector<std::optional<double>> iou;     // empty when the class is never seen
  std::vector<std::optional<double>> recall;  // empty when the truth row is zero
  double mean_iou = 0.0;
  double pixel_accuracy = 0.0;
  std::vector<int> excluded_from_miou;
  std::vector<int> undefined_recall;
};

SegmentationMetrics metrics(const ConfusionMatrix& cm,
                            MiouMode mode = MiouMode::present_classes);

}  // namespace terraprop::segmentation
