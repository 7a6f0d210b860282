#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "nidsfs/value.hpp"

namespace nidsfs {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// A metric whose denominator is zero is nullopt (reported as null).
using Metric = std::optional<double>;

struct MetricsReport {
  Metric accuracy;
  Metric fpr;
  Metric fnr;
  Metric far;  // (fpr + fnr) / 2
  Metric precision;
  Metric recall;

  bool operator==(const MetricsReport&) const = default;
};

/// Attack is the positive class. Throws LengthMismatch or EmptyInput.
ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truth);

MetricsReport compute_metrics(const ConfusionMatrix& cm) noexcept;

/// Misclassified fraction, (fp + fn) / total; the complement of accuracy.
Metric error_rate(const ConfusionMatrix& cm) noexcept;

}  // namespace nidsfs
