#pragma once

#include <span>

#include "falldet/features.hpp"
#include "falldet/types.hpp"

namespace falldet {

struct BdtNode {
  int32_t feature = -1;  // < 0 marks a leaf
  double threshold = 0.0;
  int32_t left = -1, right = -1;
  Label label = Label::ADL;  // leaf prediction (majority; tie -> FALL)
  int64_t n_adl = 0, n_fall = 0;

  bool is_leaf() const { return feature < 0; }
};

struct BdtModel {
  std::vector<BdtNode> nodes;  // nodes[0] is the root
  size_t dim = 0;

  Label classify(std::span<const double> q) const;
};

// CART-style greedy growth: axis-aligned splits at midpoints between
// consecutive distinct sorted values, minimizing weighted Gini impurity.
// Ties resolve to the lowest feature index, then the lowest threshold. Nodes
// grow until pure or until no candidate threshold exists (all remaining
// vectors identical on every feature); zero-gain splits are taken, which is
// what lets XOR-like patterns reach purity. No depth limit, no pruning.
BdtModel bdt_train(const FeatureMatrix& train, int threads = 0);
BdtModel bdt_train_serial(const FeatureMatrix& train);

}  // namespace falldet
