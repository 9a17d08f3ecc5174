#pragma once

#include <string>

#include "falldet/bdt.hpp"
#include "falldet/enn.hpp"
#include "falldet/features.hpp"
#include "falldet/knn.hpp"
#include "falldet/types.hpp"

namespace falldet {

// Everything the gateway needs to classify a raw window: the feature recipe,
// the expected sampling rate and window length, and the three trained
// classifiers over a shared training matrix.
struct ModelBundle {
  FeatureConfig features;
  double fs = 0.0;
  size_t record_length = 0;
  KnnModel knn;
  EnnModel enn;
  BdtModel bdt;
  uint64_t digest = 0;  // hash of the serialized payload, set by save/load
};

ModelBundle train_bundle(const Dataset& train, const FeatureConfig& cfg, int k, int e,
                         int threads = 0);

// Versioned binary format (magic, version, dims, payload); round-trips exactly.
void save_bundle(ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

}  // namespace falldet
