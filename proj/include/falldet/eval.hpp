#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "falldet/features.hpp"
#include "falldet/metrics.hpp"
#include "falldet/types.hpp"

namespace falldet {

enum class Classifier : int { KNN = 0, ENN = 1, BDT = 2, VM = 3 };
constexpr int kClassifierCount = 4;
const char* classifier_name(Classifier c);

struct EvalOptions {
  FeatureConfig features;
  SplitSpec split;
  std::optional<int> knn_k;
  std::optional<int> enn_e;
  bool bdt = false;
  int threads = 1;     // fold-level parallelism; classification loops stay sequential
  bool timing = true;  // false zeroes every time field so reports are byte-stable
};

struct FoldResult {
  std::array<ConfusionCounts, kClassifierCount> counts{};
  std::array<Metrics, kClassifierCount> metrics{};
  std::array<double, kClassifierCount> classify_ms{};  // mean per test record
  double enn_preprocess_s = 0.0;
  size_t train_adl = 0, train_fall = 0, test_adl = 0, test_fall = 0;
};

struct EvalReport {
  // configuration echo
  std::string dataset_name;
  size_t n_records = 0, record_length = 0;
  double fs = 0.0;
  std::string features_desc;
  std::string wavelet_name;
  double wavelet_scale = 0.0;
  size_t feature_dim = 0;
  std::optional<int> knn_k, enn_e;
  bool bdt = false, vm = false;
  SplitSpec split;
  int threads = 1;
  bool timing = true;

  // results
  std::vector<FoldResult> folds;
  std::array<bool, kClassifierCount> enabled{};
  std::array<Metrics, kClassifierCount> averaged{};  // arithmetic mean over folds
  std::array<double, kClassifierCount> mean_classify_ms{};
  double extract_total_s = 0.0, extract_per_record_ms = 0.0;
  double mean_enn_preprocess_s = 0.0;
  bool any_undefined_metric = false;

  bool has(Classifier c) const { return enabled[static_cast<size_t>(c)]; }
  const Metrics& avg(Classifier c) const { return averaged[static_cast<size_t>(c)]; }
};

// Algorithm: per fold, split -> train enabled classifiers on extracted
// features -> classify each test record individually (timed with a monotonic
// clock) -> confusion counts; metrics averaged over folds. Features are pure
// per-record functions, so the matrix is extracted once up front and folds
// index into it.
EvalReport run_protocol(const Dataset& ds, const EvalOptions& opt);

struct SweepRow {
  std::string param;
  std::string classifier;
  std::string metric;
  std::optional<double> value;
};

// One run_protocol per neighbor count (KNN k and ENN e swept together).
std::vector<SweepRow> sweep_neighbors(const Dataset& ds, const EvalOptions& base,
                                      const std::vector<int>& neighbor_values);

// One run_protocol per feature combination (all four classifiers).
std::vector<SweepRow> sweep_features(const Dataset& ds, const EvalOptions& base,
                                     const std::vector<FeatureConfig>& combos);

// The published 17-row combination list, weakest single feature first.
std::vector<FeatureConfig> feature_combo_catalog(const WaveletSpec& w);

void write_text(const EvalReport& r, std::ostream& os);
void write_csv(const EvalReport& r, std::ostream& os);
void write_json(const EvalReport& r, std::ostream& os);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace falldet
