#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive (plain loops, full sorts, from-scratch recomputation) so
// they cannot share a bug with the optimized library paths they check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "falldet/features.hpp"
#include "falldet/rng.hpp"
#include "falldet/types.hpp"

namespace falldet::testing {

inline double naive_sq_distance(const double* a, const double* b, size_t d) {
  double s = 0.0;
  for (size_t i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Brute-force KNN: sort every (distance, index) pair, majority over the first k.
inline Label knn_oracle(const FeatureMatrix& train, const double* q, int k) {
  std::vector<std::pair<double, size_t>> all;
  all.reserve(train.rows);
  for (size_t i = 0; i < train.rows; ++i)
    all.emplace_back(naive_sq_distance(train.row(i), q, train.cols), i);
  std::sort(all.begin(), all.end());
  int falls = 0;
  for (int i = 0; i < k; ++i)
    if (train.labels[all[static_cast<size_t>(i)].second] == Label::FALL) ++falls;
  return 2 * falls > k ? Label::FALL : Label::ADL;
}

// From-scratch ENN: for each tentative class, rebuild every neighbor list of
// the augmented set by full sort and total the class-wise statistic
//   T_c = sum_i (1 / (n_i * e)) * sum_{s in augmented class i} |same-class e-NN of s|
// with n_i the original training class counts. Ties predict FALL.
struct EnnOracleResult {
  double t_adl = 0.0, t_fall = 0.0;
  Label label = Label::ADL;
};

inline EnnOracleResult enn_oracle(const FeatureMatrix& train, const double* q, int e) {
  const size_t n = train.rows;
  const size_t dim = train.cols;
  std::vector<const double*> rows(n + 1);
  for (size_t i = 0; i < n; ++i) rows[i] = train.row(i);
  rows[n] = q;

  int64_t class_n[2] = {0, 0};
  for (Label l : train.labels) class_n[static_cast<size_t>(l)]++;

  double t[2];
  for (int tentative = 0; tentative < 2; ++tentative) {
    std::vector<Label> labels(train.labels);
    labels.push_back(static_cast<Label>(tentative));

    double coherence[2] = {0.0, 0.0};
    for (size_t s = 0; s <= n; ++s) {
      std::vector<std::pair<double, size_t>> dists;
      dists.reserve(n);
      for (size_t j = 0; j <= n; ++j) {
        if (j == s) continue;
        dists.emplace_back(naive_sq_distance(rows[s], rows[j], dim), j);
      }
      std::sort(dists.begin(), dists.end());
      int same = 0;
      for (int r = 0; r < e; ++r)
        if (labels[dists[static_cast<size_t>(r)].second] == labels[s]) ++same;
      coherence[static_cast<size_t>(labels[s])] += same;
    }
    double total = 0.0;
    for (int i = 0; i < 2; ++i)
      total += coherence[i] / (static_cast<double>(class_n[i]) * static_cast<double>(e));
    t[tentative] = total;
  }
  EnnOracleResult r;
  r.t_adl = t[0];
  r.t_fall = t[1];
  r.label = t[1] >= t[0] ? Label::FALL : Label::ADL;
  return r;
}

// Brute-force e-NN lists over the training set itself (for preprocess checks).
inline std::vector<size_t> neighbor_list_oracle(const FeatureMatrix& train, size_t self, int e) {
  std::vector<std::pair<double, size_t>> dists;
  for (size_t j = 0; j < train.rows; ++j) {
    if (j == self) continue;
    dists.emplace_back(naive_sq_distance(train.row(self), train.row(j), train.cols), j);
  }
  std::sort(dists.begin(), dists.end());
  std::vector<size_t> out;
  for (int r = 0; r < e; ++r) out.push_back(dists[static_cast<size_t>(r)].second);
  return out;
}

// Closed-form Haar mother wavelet.
inline double haar_psi(double t) {
  if (t >= 0.0 && t < 0.5) return 1.0;
  if (t >= 0.5 && t < 1.0) return -1.0;
  return 0.0;
}

// Direct evaluation of the single-scale transform with the closed-form Haar,
// independent of the tabulation/kernel machinery.
inline std::vector<double> cwt_haar_oracle(const std::vector<double>& x, double a) {
  const ptrdiff_t L = static_cast<ptrdiff_t>(x.size());
  std::vector<double> out(x.size(), 0.0);
  for (ptrdiff_t b = 0; b < L; ++b) {
    double acc = 0.0;
    for (ptrdiff_t t = 0; t < L; ++t)
      acc += x[static_cast<size_t>(t)] * haar_psi(static_cast<double>(t - b) / a);
    out[static_cast<size_t>(b)] = acc / std::sqrt(a);
  }
  return out;
}

// Random feature matrix with both classes present.
inline FeatureMatrix random_matrix(size_t n, size_t dim, Rng& rng, double spread = 1.0) {
  FeatureMatrix m;
  m.rows = n;
  m.cols = dim;
  m.values.resize(n * dim);
  for (auto& v : m.values) v = rng.normal(0.0, spread);
  m.ids.resize(n);
  m.labels.resize(n);
  size_t falls = 0;
  for (size_t i = 0; i < n; ++i) {
    m.ids[i] = "t" + std::to_string(i);
    m.labels[i] = rng.coin(0.5) ? Label::FALL : Label::ADL;
    if (m.labels[i] == Label::FALL) ++falls;
  }
  if (falls == 0) m.labels[0] = Label::FALL;
  if (falls == n) m.labels[0] = Label::ADL;
  return m;
}

inline FeatureMatrix matrix_from(const std::vector<std::vector<double>>& rows,
                                 const std::vector<Label>& labels) {
  FeatureMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& r : rows) m.values.insert(m.values.end(), r.begin(), r.end());
  m.labels = labels;
  for (size_t i = 0; i < m.rows; ++i) m.ids.push_back("m" + std::to_string(i));
  return m;
}

inline Record record_from(std::vector<double> ax, std::vector<double> ay, std::vector<double> az,
                          Label label = Label::ADL, double fs = 50.0) {
  Record r;
  r.id = "rec";
  r.activity = "test";
  r.label = label;
  r.fs = fs;
  r.ax = std::move(ax);
  r.ay = std::move(ay);
  r.az = std::move(az);
  return r;
}

inline Record random_record(size_t L, Rng& rng, double sigma = 1.0) {
  std::vector<double> ax(L), ay(L), az(L);
  for (size_t i = 0; i < L; ++i) {
    ax[i] = rng.normal(0.0, sigma);
    ay[i] = rng.normal(0.0, sigma);
    az[i] = rng.normal(0.0, sigma);
  }
  return record_from(std::move(ax), std::move(ay), std::move(az));
}

}  // namespace falldet::testing
