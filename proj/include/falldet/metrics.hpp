#pragma once

#include <cstdint>
#include <optional>

namespace falldet {

// FALL is the positive class.
struct ConfusionCounts {
  int64_t tp = 0, fp = 0, tn = 0, fn = 0;

  int64_t total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
};

// Percentages in [0, 100]; a metric with a zero denominator is reported as
// absent (rendered "—"), never as a silent zero.
struct Metrics {
  std::optional<double> accuracy, recall, precision, f1, specificity;
};

Metrics compute_metrics(const ConfusionCounts& c);

}  // namespace falldet
