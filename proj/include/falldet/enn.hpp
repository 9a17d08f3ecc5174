#pragma once

#include <array>
#include <span>

#include "falldet/features.hpp"
#include "falldet/types.hpp"

namespace falldet {

// Extended nearest neighbors: a query is tentatively assigned each class in
// turn and the class-wise coherence statistic of the augmented set is
// maximized. The preprocessing step builds each training record's e-nearest
// neighbor list once (the "weighted KNN map"); classification then only
// re-checks the records whose lists the query could enter.
struct EnnModel {
  FeatureMatrix train;
  int e = 5;
  std::vector<int32_t> neighbors;    // rows * e, each row ascending by (d^2, index)
  std::vector<double> neighbor_d2;   // squared distance for each list entry
  std::vector<int32_t> same_count;   // per record: same-class entries among its e
  int64_t n_adl = 0, n_fall = 0;
  std::array<int64_t, 2> base_coherence{};  // sum of same_count by record class

  double radius_sq(size_t i) const { return neighbor_d2[i * e + (e - 1)]; }
};

// Requires 1 <= e < n and both classes present. O(n^2 log e) with pruning.
EnnModel enn_preprocess(FeatureMatrix train, int e, int threads = 0);
EnnModel enn_preprocess_serial(FeatureMatrix train, int e);

// Prefix-slices the neighbor lists of a model built with a larger e; identical
// to enn_preprocess(train, e) by construction.
EnnModel enn_shrink(const EnnModel& m, int e);

// Reassembles a model from serialized parts, recomputing the derived counts.
EnnModel enn_from_parts(FeatureMatrix train, int e, std::vector<int32_t> neighbors,
                        std::vector<double> neighbor_d2);

// The two class statistics (T_ADL, T_FALL) for a query.
std::array<double, 2> enn_scores(const EnnModel& m, std::span<const double> q);

// argmax of the statistic; exact ties fail safe toward FALL.
Label enn_classify(const EnnModel& m, std::span<const double> q);

}  // namespace falldet
