#include "nidsfs/metrics.hpp"

#include "nidsfs/error.hpp"

namespace nidsfs {

namespace {

Metric ratio(std::size_t num, std::size_t den) noexcept {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and truth differ in length");
  }
  if (predictions.empty()) throw Error(ErrorCode::EmptyInput, "confusion matrix over zero predictions");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] == Label::Attack;
    const bool real = truth[i] == Label::Attack;
    if (pred && real) ++cm.tp;
    else if (!pred && !real) ++cm.tn;
    else if (pred) ++cm.fp;
    else ++cm.fn;
  }
  return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) noexcept {
  MetricsReport m;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  m.fpr = ratio(cm.fp, cm.fp + cm.tn);
  m.fnr = ratio(cm.fn, cm.fn + cm.tp);
  if (m.fpr && m.fnr) m.far = (*m.fpr + *m.fnr) / 2.0;
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  return m;
}

Metric error_rate(const ConfusionMatrix& cm) noexcept { return ratio(cm.fp + cm.fn, cm.total()); }

}  // namespace nidsfs
