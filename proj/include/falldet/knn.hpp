#pragma once

#include <span>

#include "falldet/features.hpp"
#include "falldet/types.hpp"

namespace falldet {

struct KnnModel {
  FeatureMatrix train;
  int k = 5;
};

// k must be odd (no voting ties) and <= the number of training records.
KnnModel knn_train(FeatureMatrix train, int k);

// Majority label among the k nearest training vectors by Euclidean distance;
// equal distances rank by lower training index.
Label knn_classify(const KnnModel& m, std::span<const double> q);

}  // namespace falldet
