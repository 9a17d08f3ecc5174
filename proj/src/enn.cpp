#include "falldet/enn.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

#include "falldet/distance.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace falldet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e smallest (d^2, index) pairs over all rows j != self, ascending.
void neighbor_row(const FeatureMatrix& train, size_t self, int e, int32_t* idx_out,
                  double* d2_out) {
  const size_t n = train.rows;
  const size_t cols = train.cols;
  const double* q = train.row(self);
  size_t filled = 0;
  double limit = kInf;
  for (size_t j = 0; j < n; ++j) {
    if (j == self) continue;
    double d2 = squared_distance_bounded(train.row(j), q, cols, limit);
    if (d2 > limit) continue;
    std::pair<double, size_t> cand{d2, j};
    if (filled < static_cast<size_t>(e)) {
      size_t pos = filled++;
      while (pos > 0 && cand < std::pair<double, size_t>{d2_out[pos - 1],
                                                         static_cast<size_t>(idx_out[pos - 1])}) {
        d2_out[pos] = d2_out[pos - 1];
        idx_out[pos] = idx_out[pos - 1];
        --pos;
      }
      d2_out[pos] = cand.first;
      idx_out[pos] = static_cast<int32_t>(cand.second);
      if (filled == static_cast<size_t>(e)) limit = d2_out[filled - 1];
    } else if (cand < std::pair<double, size_t>{d2_out[filled - 1],
                                                static_cast<size_t>(idx_out[filled - 1])}) {
      size_t pos = filled - 1;
      while (pos > 0 && cand < std::pair<double, size_t>{d2_out[pos - 1],
                                                         static_cast<size_t>(idx_out[pos - 1])}) {
        d2_out[pos] = d2_out[pos - 1];
        idx_out[pos] = idx_out[pos - 1];
        --pos;
      }
      d2_out[pos] = cand.first;
      idx_out[pos] = static_cast<int32_t>(cand.second);
      limit = d2_out[filled - 1];
    }
  }
}

void finish_model(EnnModel& m) {
  const size_t n = m.train.rows;
  const int e = m.e;
  m.same_count.assign(n, 0);
  m.base_coherence = {0, 0};
  m.n_adl = m.n_fall = 0;
  for (size_t i = 0; i < n; ++i) {
    Label li = m.train.labels[i];
    (li == Label::FALL ? m.n_fall : m.n_adl)++;
    int32_t same = 0;
    for (int j = 0; j < e; ++j)
      if (m.train.labels[static_cast<size_t>(m.neighbors[i * e + j])] == li) ++same;
    m.same_count[i] = same;
    m.base_coherence[static_cast<size_t>(li)] += same;
  }
}

EnnModel preprocess_impl(FeatureMatrix train, int e, bool parallel, int threads) {
  const size_t n = train.rows;
  if (n == 0) throw std::invalid_argument("enn: empty training set");
  if (e < 1 || e % 2 == 0) throw std::invalid_argument("enn: e must be a positive odd integer");
  if (static_cast<size_t>(e) >= n)
    throw std::invalid_argument("enn: e must be smaller than the training set size");

  EnnModel m;
  m.train = std::move(train);
  m.e = e;
  m.neighbors.resize(n * static_cast<size_t>(e));
  m.neighbor_d2.resize(n * static_cast<size_t>(e));

  if (parallel) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
#pragma omp parallel for schedule(dynamic, 16)
    for (ptrdiff_t i = 0; i < static_cast<ptrdiff_t>(n); ++i)
      neighbor_row(m.train, static_cast<size_t>(i), e,
                   m.neighbors.data() + static_cast<size_t>(i) * e,
                   m.neighbor_d2.data() + static_cast<size_t>(i) * e);
  } else {
    for (size_t i = 0; i < n; ++i)
      neighbor_row(m.train, i, e, m.neighbors.data() + i * static_cast<size_t>(e),
                   m.neighbor_d2.data() + i * static_cast<size_t>(e));
  }

  finish_model(m);
  if (m.n_adl == 0 || m.n_fall == 0)
    throw std::invalid_argument("enn: training set must contain both classes");
  return m;
}

}  // namespace

EnnModel enn_preprocess(FeatureMatrix train, int e, int threads) {
  return preprocess_impl(std::move(train), e, true, threads);
}

EnnModel enn_preprocess_serial(FeatureMatrix train, int e) {
  return preprocess_impl(std::move(train), e, false, 0);
}

EnnModel enn_from_parts(FeatureMatrix train, int e, std::vector<int32_t> neighbors,
                        std::vector<double> neighbor_d2) {
  EnnModel m;
  m.train = std::move(train);
  m.e = e;
  m.neighbors = std::move(neighbors);
  m.neighbor_d2 = std::move(neighbor_d2);
  if (m.neighbors.size() != m.train.rows * static_cast<size_t>(e) ||
      m.neighbor_d2.size() != m.neighbors.size())
    throw std::invalid_argument("enn: neighbor list size mismatch");
  finish_model(m);
  return m;
}

EnnModel enn_shrink(const EnnModel& src, int e) {
  if (e > src.e) throw std::invalid_argument("enn_shrink: e larger than source model");
  if (e < 1 || e % 2 == 0) throw std::invalid_argument("enn: e must be a positive odd integer");
  EnnModel m;
  m.train = src.train;
  m.e = e;
  const size_t n = src.train.rows;
  m.neighbors.resize(n * static_cast<size_t>(e));
  m.neighbor_d2.resize(n * static_cast<size_t>(e));
  for (size_t i = 0; i < n; ++i)
    for (int j = 0; j < e; ++j) {
      m.neighbors[i * e + j] = src.neighbors[i * src.e + j];
      m.neighbor_d2[i * e + j] = src.neighbor_d2[i * src.e + j];
    }
  finish_model(m);
  return m;
}

std::array<double, 2> enn_scores(const EnnModel& m, std::span<const double> q) {
  if (q.size() != m.train.cols)
    throw std::invalid_argument("enn: query dimension " + std::to_string(q.size()) +
                                " != training dimension " + std::to_string(m.train.cols));
  const size_t n = m.train.rows;
  const size_t cols = m.train.cols;
  const int e = m.e;

  // One pass: the query's own e nearest neighbors, plus every training record
  // whose e-NN list the query enters (the query ranks after equal-distance
  // training records, so displacement needs a strictly smaller distance).
  std::vector<double> q_d2(static_cast<size_t>(e), kInf);
  std::vector<size_t> q_idx(static_cast<size_t>(e), 0);
  size_t q_filled = 0;
  double q_limit = kInf;

  // Affected rows: removal of the displaced e-th neighbor is label-independent;
  // the query's own entry counts toward whichever class it is assigned.
  int64_t affected_by_class[2] = {0, 0};
  int64_t displaced_same_by_class[2] = {0, 0};

  for (size_t s = 0; s < n; ++s) {
    const double radius = m.radius_sq(s);
    const double limit = radius > q_limit ? radius : q_limit;
    double d2 = squared_distance_bounded(m.train.row(s), q.data(), cols, limit);
    if (d2 > limit) continue;

    if (d2 < radius) {
      Label cls = m.train.labels[s];
      Label displaced = m.train.labels[static_cast<size_t>(m.neighbors[s * e + (e - 1)])];
      affected_by_class[static_cast<size_t>(cls)]++;
      if (displaced == cls) displaced_same_by_class[static_cast<size_t>(cls)]++;
    }

    std::pair<double, size_t> cand{d2, s};
    if (q_filled < static_cast<size_t>(e)) {
      size_t pos = q_filled++;
      while (pos > 0 && cand < std::pair<double, size_t>{q_d2[pos - 1], q_idx[pos - 1]}) {
        q_d2[pos] = q_d2[pos - 1];
        q_idx[pos] = q_idx[pos - 1];
        --pos;
      }
      q_d2[pos] = cand.first;
      q_idx[pos] = cand.second;
      if (q_filled == static_cast<size_t>(e)) q_limit = q_d2[q_filled - 1];
    } else if (cand < std::pair<double, size_t>{q_d2[q_filled - 1], q_idx[q_filled - 1]}) {
      size_t pos = q_filled - 1;
      while (pos > 0 && cand < std::pair<double, size_t>{q_d2[pos - 1], q_idx[pos - 1]}) {
        q_d2[pos] = q_d2[pos - 1];
        q_idx[pos] = q_idx[pos - 1];
        --pos;
      }
      q_d2[pos] = cand.first;
      q_idx[pos] = cand.second;
      q_limit = q_d2[q_filled - 1];
    }
  }

  int64_t q_own_count[2] = {0, 0};
  for (size_t j = 0; j < q_filled; ++j)
    q_own_count[static_cast<size_t>(m.train.labels[q_idx[j]])]++;

  const int64_t class_n[2] = {m.n_adl, m.n_fall};
  std::array<double, 2> scores{};
  for (int c = 0; c < 2; ++c) {
    double t = 0.0;
    for (int i = 0; i < 2; ++i) {
      int64_t coherence = m.base_coherence[i] - displaced_same_by_class[i];
      if (i == c) coherence += affected_by_class[i] + q_own_count[i];
      t += static_cast<double>(coherence) /
           (static_cast<double>(class_n[i]) * static_cast<double>(e));
    }
    scores[static_cast<size_t>(c)] = t;
  }
  return scores;
}

Label enn_classify(const EnnModel& m, std::span<const double> q) {
  auto scores = enn_scores(m, q);
  return scores[1] >= scores[0] ? Label::FALL : Label::ADL;
}

}  // namespace falldet
