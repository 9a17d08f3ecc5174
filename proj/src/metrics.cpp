#include "falldet/metrics.hpp"

namespace falldet {

Metrics compute_metrics(const ConfusionCounts& c) {
  Metrics m;
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  if (c.total() > 0) m.accuracy = (tp + tn) / (tp + tn + fp + fn) * 100.0;
  if (c.tp + c.fn > 0) m.recall = tp / (tp + fn) * 100.0;
  if (c.tp + c.fp > 0) m.precision = tp / (tp + fp) * 100.0;
  if (c.tn + c.fp > 0) m.specificity = tn / (tn + fp) * 100.0;
  if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
    m.f1 = 2.0 * (*m.precision * *m.recall) / (*m.precision + *m.recall);
  return m;
}

}  // namespace falldet
