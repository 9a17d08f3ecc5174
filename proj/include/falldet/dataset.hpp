#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "falldet/types.hpp"

namespace falldet {

// Optional sidecar next to a canonical file: "<path>.manifest.json".
struct DatasetManifest {
  std::string name;
  size_t expected_length = 0;
  std::string units;
};

// Canonical dataset file: UTF-8 CSV, header
//   id,activity_label,binary_label,fs,ax,ay,az
// where ax/ay/az are ';'-separated decimal sample lists, one record per row.
Dataset load_canonical(const std::string& path);
void save_canonical(const Dataset& ds, const std::string& path);

std::optional<DatasetManifest> load_manifest(const std::string& dataset_path);
void save_manifest(const DatasetManifest& m, const std::string& dataset_path);

// Throws if any Dataset invariant is violated (ragged lengths, mixed fs,
// non-finite samples, L < 2).
void validate(const Dataset& ds);

// Fresh seeded permutation per fold (Monte-Carlo CV); train size is
// round-half-up of train_fraction * n. Deterministic given (seed, fold).
std::pair<Dataset, Dataset> shuffle_split(const Dataset& ds, const SplitSpec& spec,
                                          int fold_index);

// Index form of the same split, for callers that keep their own row storage.
std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(size_t n,
                                                                  const SplitSpec& spec,
                                                                  int fold_index);

// Label-stratified random subset of size n (per-label counts rounded largest
// remainder first).
Dataset stratified_subset(const Dataset& ds, size_t n, uint64_t seed);

size_t train_count(double train_fraction, size_t n);

}  // namespace falldet
