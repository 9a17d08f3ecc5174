#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "falldet/fft.hpp"
#include "falldet/types.hpp"
#include "falldet/wavelet.hpp"

namespace falldet {

// Extractors in their fixed concatenation order. Raw (flattened ax|ay|az) is
// only used by the feature-combination sweep's raw-data row and concatenates
// last when combined with anything else.
enum class Extractor : uint8_t {
  Cwt = 0,
  SvmSeries,
  TotalAbsSvm,
  Sma,
  Range,
  SignalEnergy,
  Raw,
};
constexpr int kExtractorCount = 7;

struct FeatureConfig {
  uint32_t mask = 0;
  WaveletSpec wavelet;

  bool enabled(Extractor e) const { return mask & (1u << static_cast<int>(e)); }
  void enable(Extractor e) { mask |= 1u << static_cast<int>(e); }
  bool empty() const { return mask == 0; }

  size_t vector_length(size_t record_length) const;
  uint64_t config_hash() const;
  std::string describe() const;  // e.g. "cwt,se,sma,svm"

  static FeatureConfig parse(const std::string& csv_names, const WaveletSpec& w = {});
  static FeatureConfig all_six(const WaveletSpec& w = {});
};

struct FeatureVector {
  std::vector<double> values;
  uint64_t config_hash = 0;
  std::string record_id;
};

struct FeatureMatrix {
  size_t rows = 0, cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::string> ids;
  std::vector<Label> labels;
  uint64_t config_hash = 0;

  const double* row(size_t i) const { return values.data() + i * cols; }
  double* row(size_t i) { return values.data() + i * cols; }

  FeatureMatrix select(std::span<const size_t> indices) const;
};

// Single-scale CWT: out[b] = (1/sqrt(a)) * sum_t x[t] * psi((t - b) / a),
// b = 0..L-1, zero-padded outside the record. One coefficient per sample.
std::vector<double> cwt_single_scale(std::span<const double> x, const WaveletSpec& spec);

std::vector<double> svm_series(const Record& r);
double total_abs_svm(const Record& r);
double sma(const Record& r);
std::array<double, 3> axis_ranges(const Record& r);
// Per-axis sum of squared FFT coefficient magnitudes over the full two-sided,
// unnormalized spectrum (equals L * time-domain energy by Parseval).
std::array<double, 3> signal_energy(const Record& r);

// Shared per-(config, L) state: wavelet table, CWT kernel, FFT plan.
class FeatureExtractor {
 public:
  FeatureExtractor(const FeatureConfig& cfg, size_t record_length);

  FeatureVector extract(const Record& r) const;
  void extract_into(const Record& r, double* out) const;

  const FeatureConfig& config() const { return cfg_; }
  size_t vector_length() const { return length_; }

 private:
  FeatureConfig cfg_;
  size_t record_length_;
  size_t length_;
  std::shared_ptr<const WaveletTable> wavelet_;
  std::vector<double> cwt_kernel_;  // psi((t-b)/a)/sqrt(a) for t-b = kernel_min_..kernel_max_
  ptrdiff_t kernel_min_ = 0;
  std::unique_ptr<FftPlan> fft_;

  void cwt_into(std::span<const double> x, double* out) const;
  void energy_into(const Record& r, double* out) const;
};

struct ExtractTiming {
  double total_seconds = 0.0;
  double per_record_ms = 0.0;
};

FeatureMatrix extract_matrix(const Dataset& ds, const FeatureConfig& cfg,
                             ExtractTiming* timing = nullptr, int threads = 0);
// Reference implementation for tests and the kernel benchmark; must produce
// bit-identical output to extract_matrix.
FeatureMatrix extract_matrix_serial(const Dataset& ds, const FeatureConfig& cfg,
                                    ExtractTiming* timing = nullptr);

void write_feature_csv(const FeatureMatrix& m, const std::string& path);
void write_feature_cache(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_feature_cache(const std::string& path);

}  // namespace falldet
