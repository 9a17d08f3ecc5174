#include "falldet/knn.hpp"

#include <stdexcept>
#include <vector>

#include "falldet/distance.hpp"

namespace falldet {

KnnModel knn_train(FeatureMatrix train, int k) {
  if (train.rows == 0) throw std::invalid_argument("knn: empty training set");
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("knn: k must be a positive odd integer");
  if (static_cast<size_t>(k) > train.rows)
    throw std::invalid_argument("knn: k exceeds training set size");
  return KnnModel{std::move(train), k};
}

Label knn_classify(const KnnModel& m, std::span<const double> q) {
  if (q.size() != m.train.cols)
    throw std::invalid_argument("knn: query dimension " + std::to_string(q.size()) +
                                " != training dimension " + std::to_string(m.train.cols));
  const size_t n = m.train.rows;
  const size_t k = static_cast<size_t>(m.k);

  // Sorted scratch of the k best (d^2, index) pairs, ascending.
  std::vector<std::pair<double, size_t>> best;
  best.reserve(k);
  for (size_t i = 0; i < n; ++i) {
    double d2 = squared_distance(m.train.row(i), q.data(), m.train.cols);
    std::pair<double, size_t> cand{d2, i};
    if (best.size() < k) {
      best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
    } else if (cand < best.back()) {
      best.pop_back();
      best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
    }
  }

  size_t falls = 0;
  for (const auto& [d2, idx] : best)
    if (m.train.labels[idx] == Label::FALL) ++falls;
  return falls * 2 > best.size() ? Label::FALL : Label::ADL;
}

}  // namespace falldet
