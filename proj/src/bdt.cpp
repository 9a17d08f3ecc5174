#include "falldet/bdt.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace falldet {

namespace {

struct SplitCandidate {
  // Maximizing sum_child (count_ADL^2 + count_FALL^2) / n_child is equivalent
  // to minimizing weighted Gini impurity; counts are integers so the score is
  // reproducible.
  double score = -1.0;
  double threshold = 0.0;
  bool valid = false;
};

// Best threshold for one feature over the node's samples.
SplitCandidate best_split_for_feature(const FeatureMatrix& X, std::span<const int32_t> node,
                                      size_t feature, std::vector<std::pair<double, Label>>& scratch) {
  scratch.clear();
  for (int32_t i : node) scratch.emplace_back(X.row(static_cast<size_t>(i))[feature],
                                              X.labels[static_cast<size_t>(i)]);
  std::sort(scratch.begin(), scratch.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const size_t n = scratch.size();
  int64_t total[2] = {0, 0};
  for (const auto& [v, lab] : scratch) total[static_cast<size_t>(lab)]++;

  SplitCandidate best;
  int64_t left[2] = {0, 0};
  for (size_t i = 0; i + 1 < n; ++i) {
    left[static_cast<size_t>(scratch[i].second)]++;
    if (scratch[i].first == scratch[i + 1].first) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = static_cast<double>(n - i - 1);
    const double la = static_cast<double>(left[0]), lf = static_cast<double>(left[1]);
    const double ra = static_cast<double>(total[0] - left[0]);
    const double rf = static_cast<double>(total[1] - left[1]);
    double score = (la * la + lf * lf) / nl + (ra * ra + rf * rf) / nr;
    if (!best.valid || score > best.score) {
      best.valid = true;
      best.score = score;
      best.threshold = scratch[i].first + (scratch[i + 1].first - scratch[i].first) / 2.0;
    }
  }
  return best;
}

struct WorkItem {
  size_t begin, end;   // range in the index buffer
  int32_t node_index;  // node to finalize
};

BdtModel train_impl(const FeatureMatrix& X, bool parallel, int threads) {
  const size_t n = X.rows;
  if (n == 0) throw std::invalid_argument("bdt: empty training set");

  BdtModel model;
  model.dim = X.cols;

  std::vector<int32_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<int32_t>(i);

#ifdef _OPENMP
  if (parallel && threads > 0) omp_set_num_threads(threads);
  const int n_threads = parallel ? omp_get_max_threads() : 1;
#else
  (void)threads;
  const int n_threads = 1;
#endif
  std::vector<std::vector<std::pair<double, Label>>> scratch(static_cast<size_t>(n_threads));
  std::vector<SplitCandidate> per_feature(X.cols);

  std::vector<WorkItem> stack;
  model.nodes.emplace_back();
  stack.push_back({0, n, 0});

  while (!stack.empty()) {
    WorkItem item = stack.back();
    stack.pop_back();
    std::span<const int32_t> node(order.data() + item.begin, item.end - item.begin);

    int64_t counts[2] = {0, 0};
    for (int32_t i : node) counts[static_cast<size_t>(X.labels[static_cast<size_t>(i)])]++;

    BdtNode& nd = model.nodes[static_cast<size_t>(item.node_index)];
    nd.n_adl = counts[0];
    nd.n_fall = counts[1];

    bool pure = counts[0] == 0 || counts[1] == 0;
    SplitCandidate best;
    size_t best_feature = 0;
    if (!pure) {
      if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (ptrdiff_t f = 0; f < static_cast<ptrdiff_t>(X.cols); ++f) {
#ifdef _OPENMP
          auto& sc = scratch[static_cast<size_t>(omp_get_thread_num())];
#else
          auto& sc = scratch[0];
#endif
          per_feature[static_cast<size_t>(f)] =
              best_split_for_feature(X, node, static_cast<size_t>(f), sc);
        }
      } else {
        for (size_t f = 0; f < X.cols; ++f)
          per_feature[f] = best_split_for_feature(X, node, f, scratch[0]);
      }
      for (size_t f = 0; f < X.cols; ++f) {
        const SplitCandidate& c = per_feature[f];
        if (!c.valid) continue;
        if (!best.valid || c.score > best.score) {
          best = c;
          best_feature = f;
        }
      }
    }

    if (pure || !best.valid) {
      nd.feature = -1;
      nd.label = counts[1] >= counts[0] ? Label::FALL : Label::ADL;
      continue;
    }

    nd.feature = static_cast<int32_t>(best_feature);
    nd.threshold = best.threshold;

    int32_t* first = order.data() + item.begin;
    int32_t* last = order.data() + item.end;
    int32_t* mid = std::partition(first, last, [&](int32_t i) {
      return X.row(static_cast<size_t>(i))[best_feature] < best.threshold;
    });
    size_t split_at = item.begin + static_cast<size_t>(mid - first);

    // emplace_back may reallocate, so finish all writes through nd first and
    // re-address the node afterwards.
    const int32_t left_index = static_cast<int32_t>(model.nodes.size());
    const int32_t right_index = left_index + 1;
    model.nodes.emplace_back();
    model.nodes.emplace_back();
    model.nodes[static_cast<size_t>(item.node_index)].left = left_index;
    model.nodes[static_cast<size_t>(item.node_index)].right = right_index;
    stack.push_back({item.begin, split_at, left_index});
    stack.push_back({split_at, item.end, right_index});
  }
  return model;
}

}  // namespace

Label BdtModel::classify(std::span<const double> q) const {
  if (q.size() != dim)
    throw std::invalid_argument("bdt: query dimension " + std::to_string(q.size()) +
                                " != model dimension " + std::to_string(dim));
  const BdtNode* node = &nodes[0];
  while (!node->is_leaf()) {
    // value < threshold goes left, >= goes right
    node = q[static_cast<size_t>(node->feature)] < node->threshold
               ? &nodes[static_cast<size_t>(node->left)]
               : &nodes[static_cast<size_t>(node->right)];
  }
  return node->label;
}

BdtModel bdt_train(const FeatureMatrix& train, int threads) {
  return train_impl(train, true, threads);
}

BdtModel bdt_train_serial(const FeatureMatrix& train) { return train_impl(train, false, 0); }

}  // namespace falldet
