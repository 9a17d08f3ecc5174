#include "falldet/features.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "falldet/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace falldet {

namespace {

struct ExtractorInfo {
  Extractor e;
  const char* name;
};

// Fixed concatenation order.
constexpr ExtractorInfo kExtractors[kExtractorCount] = {
    {Extractor::Cwt, "cwt"},   {Extractor::SvmSeries, "svm"}, {Extractor::TotalAbsSvm, "tsvm"},
    {Extractor::Sma, "sma"},   {Extractor::Range, "range"},   {Extractor::SignalEnergy, "se"},
    {Extractor::Raw, "raw"},
};

size_t extractor_length(Extractor e, size_t L) {
  switch (e) {
    case Extractor::Cwt: return 3 * L;
    case Extractor::SvmSeries: return L;
    case Extractor::TotalAbsSvm: return 1;
    case Extractor::Sma: return 1;
    case Extractor::Range: return 3;
    case Extractor::SignalEnergy: return 3;
    case Extractor::Raw: return 3 * L;
  }
  return 0;
}

}  // namespace

size_t FeatureConfig::vector_length(size_t L) const {
  size_t n = 0;
  for (const auto& info : kExtractors)
    if (enabled(info.e)) n += extractor_length(info.e, L);
  return n;
}

std::string FeatureConfig::describe() const {
  std::string s;
  for (const auto& info : kExtractors) {
    if (!enabled(info.e)) continue;
    if (!s.empty()) s += ',';
    s += info.name;
  }
  return s;
}

uint64_t FeatureConfig::config_hash() const {
  std::string key = describe();
  key += '|';
  key += wavelet_family_name(wavelet.family);
  key += '|';
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), wavelet.scale);
  (void)ec;
  key.append(buf, p);
  key += '|';
  key += std::to_string(wavelet.tabulation_resolution);
  return fnv1a64(key);
}

FeatureConfig FeatureConfig::parse(const std::string& csv_names, const WaveletSpec& w) {
  FeatureConfig cfg;
  cfg.wavelet = w;
  size_t start = 0;
  const std::string& s = csv_names;
  while (start < s.size()) {
    size_t end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    std::string name = s.substr(start, end - start);
    bool found = false;
    for (const auto& info : kExtractors) {
      if (name == info.name) {
        cfg.enable(info.e);
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("unknown feature extractor \"" + name + "\"");
    start = end + 1;
  }
  if (cfg.empty()) throw std::invalid_argument("feature set must not be empty");
  return cfg;
}

FeatureConfig FeatureConfig::all_six(const WaveletSpec& w) {
  FeatureConfig cfg;
  cfg.wavelet = w;
  for (const auto& info : kExtractors)
    if (info.e != Extractor::Raw) cfg.enable(info.e);
  return cfg;
}

FeatureMatrix FeatureMatrix::select(std::span<const size_t> indices) const {
  FeatureMatrix out;
  out.rows = indices.size();
  out.cols = cols;
  out.config_hash = config_hash;
  out.values.resize(out.rows * cols);
  out.ids.reserve(out.rows);
  out.labels.reserve(out.rows);
  for (size_t i = 0; i < indices.size(); ++i) {
    size_t src = indices[i];
    std::memcpy(out.row(i), row(src), cols * sizeof(double));
    out.ids.push_back(ids[src]);
    out.labels.push_back(labels[src]);
  }
  return out;
}

std::vector<double> svm_series(const Record& r) {
  const size_t L = r.length();
  std::vector<double> out(L);
  for (size_t i = 0; i < L; ++i)
    out[i] = std::sqrt(r.ax[i] * r.ax[i] + r.ay[i] * r.ay[i] + r.az[i] * r.az[i]);
  return out;
}

double total_abs_svm(const Record& r) {
  double sum = 0.0;
  const size_t L = r.length();
  for (size_t i = 0; i < L; ++i)
    sum += std::sqrt(r.ax[i] * r.ax[i] + r.ay[i] * r.ay[i] + r.az[i] * r.az[i]);
  return sum;
}

double sma(const Record& r) {
  double sum = 0.0;
  const size_t L = r.length();
  for (size_t i = 0; i < L; ++i)
    sum += std::abs(r.ax[i]) + std::abs(r.ay[i]) + std::abs(r.az[i]);
  return sum;
}

std::array<double, 3> axis_ranges(const Record& r) {
  std::array<double, 3> out{};
  const std::vector<double>* axes[3] = {&r.ax, &r.ay, &r.az};
  for (int a = 0; a < 3; ++a) {
    auto [lo, hi] = std::minmax_element(axes[a]->begin(), axes[a]->end());
    out[a] = *hi - *lo;
  }
  return out;
}

std::array<double, 3> signal_energy(const Record& r) {
  FftPlan plan(r.length());
  std::array<double, 3> out{};
  std::vector<std::complex<double>> spec(r.length());
  const std::vector<double>* axes[3] = {&r.ax, &r.ay, &r.az};
  for (int a = 0; a < 3; ++a) {
    plan.forward(axes[a]->data(), spec.data());
    double e = 0.0;
    for (const auto& c : spec) e += c.real() * c.real() + c.imag() * c.imag();
    out[a] = e;
  }
  return out;
}

std::vector<double> cwt_single_scale(std::span<const double> x, const WaveletSpec& spec) {
  if (x.empty()) throw std::invalid_argument("cwt: empty input");
  FeatureConfig cfg;
  cfg.enable(Extractor::Cwt);
  cfg.wavelet = spec;
  FeatureExtractor fx(cfg, x.size());
  Record r;
  r.ax.assign(x.begin(), x.end());
  r.ay.assign(x.size(), 0.0);
  r.az.assign(x.size(), 0.0);
  r.fs = 1.0;
  std::vector<double> all(fx.vector_length());
  fx.extract_into(r, all.data());
  return std::vector<double>(all.begin(), all.begin() + static_cast<ptrdiff_t>(x.size()));
}

FeatureExtractor::FeatureExtractor(const FeatureConfig& cfg, size_t record_length)
    : cfg_(cfg), record_length_(record_length), length_(cfg.vector_length(record_length)) {
  if (cfg.empty()) throw std::invalid_argument("feature set must not be empty");
  if (record_length < 2) throw std::invalid_argument("records must have at least 2 samples");
  if (cfg_.enabled(Extractor::Cwt)) {
    if (cfg_.wavelet.scale < 1.0) throw std::invalid_argument("wavelet scale must be >= 1");
    wavelet_ = WaveletTable::get(cfg_.wavelet.family, cfg_.wavelet.tabulation_resolution);
    // Tabulate the kernel once per (config, L): kernel[u] = psi(u/a)/sqrt(a)
    // for every lag u = t - b that can occur.
    const double a = cfg_.wavelet.scale;
    const ptrdiff_t L = static_cast<ptrdiff_t>(record_length);
    ptrdiff_t lo = std::max<ptrdiff_t>(-(L - 1),
                                       static_cast<ptrdiff_t>(std::ceil(wavelet_->t_min() * a)));
    ptrdiff_t hi = std::min<ptrdiff_t>(L - 1,
                                       static_cast<ptrdiff_t>(std::floor(wavelet_->t_max() * a)));
    if (lo > hi) lo = hi = 0;  // degenerate; kernel all zero
    kernel_min_ = lo;
    cwt_kernel_.resize(static_cast<size_t>(hi - lo + 1));
    const double inv_sqrt_a = 1.0 / std::sqrt(a);
    for (ptrdiff_t u = lo; u <= hi; ++u)
      cwt_kernel_[static_cast<size_t>(u - lo)] =
          inv_sqrt_a * wavelet_->psi(static_cast<double>(u) / a);
  }
  if (cfg_.enabled(Extractor::SignalEnergy)) fft_ = std::make_unique<FftPlan>(record_length);
}

void FeatureExtractor::cwt_into(std::span<const double> x, double* out) const {
  const ptrdiff_t L = static_cast<ptrdiff_t>(x.size());
  const ptrdiff_t klo = kernel_min_;
  const ptrdiff_t khi = kernel_min_ + static_cast<ptrdiff_t>(cwt_kernel_.size()) - 1;
  for (ptrdiff_t b = 0; b < L; ++b) {
    ptrdiff_t t0 = std::max<ptrdiff_t>(0, b + klo);
    ptrdiff_t t1 = std::min<ptrdiff_t>(L - 1, b + khi);
    double acc = 0.0;
    const double* k = cwt_kernel_.data() + (t0 - b - klo);
    const double* xs = x.data() + t0;
    for (ptrdiff_t t = t0; t <= t1; ++t) acc += *xs++ * *k++;
    out[b] = acc;
  }
}

void FeatureExtractor::energy_into(const Record& r, double* out) const {
  std::vector<std::complex<double>> spec(record_length_);
  const std::vector<double>* axes[3] = {&r.ax, &r.ay, &r.az};
  for (int a = 0; a < 3; ++a) {
    fft_->forward(axes[a]->data(), spec.data());
    double e = 0.0;
    for (const auto& c : spec) e += c.real() * c.real() + c.imag() * c.imag();
    out[a] = e;
  }
}

void FeatureExtractor::extract_into(const Record& r, double* out) const {
  if (r.length() != record_length_)
    throw std::invalid_argument("record \"" + r.id + "\" length " + std::to_string(r.length()) +
                                " does not match extractor length " +
                                std::to_string(record_length_));
  const size_t L = record_length_;
  double* p = out;
  if (cfg_.enabled(Extractor::Cwt)) {
    cwt_into(r.ax, p);
    cwt_into(r.ay, p + L);
    cwt_into(r.az, p + 2 * L);
    p += 3 * L;
  }
  if (cfg_.enabled(Extractor::SvmSeries)) {
    for (size_t i = 0; i < L; ++i)
      p[i] = std::sqrt(r.ax[i] * r.ax[i] + r.ay[i] * r.ay[i] + r.az[i] * r.az[i]);
    p += L;
  }
  if (cfg_.enabled(Extractor::TotalAbsSvm)) *p++ = total_abs_svm(r);
  if (cfg_.enabled(Extractor::Sma)) *p++ = sma(r);
  if (cfg_.enabled(Extractor::Range)) {
    auto rg = axis_ranges(r);
    *p++ = rg[0];
    *p++ = rg[1];
    *p++ = rg[2];
  }
  if (cfg_.enabled(Extractor::SignalEnergy)) {
    energy_into(r, p);
    p += 3;
  }
  if (cfg_.enabled(Extractor::Raw)) {
    std::memcpy(p, r.ax.data(), L * sizeof(double));
    std::memcpy(p + L, r.ay.data(), L * sizeof(double));
    std::memcpy(p + 2 * L, r.az.data(), L * sizeof(double));
    p += 3 * L;
  }
}

FeatureVector FeatureExtractor::extract(const Record& r) const {
  FeatureVector v;
  v.record_id = r.id;
  v.config_hash = cfg_.config_hash();
  v.values.resize(length_);
  extract_into(r, v.values.data());
  return v;
}

namespace {

FeatureMatrix extract_matrix_impl(const Dataset& ds, const FeatureConfig& cfg,
                                  ExtractTiming* timing, bool parallel, int threads) {
  if (ds.empty()) throw std::invalid_argument("cannot extract features from an empty dataset");
  FeatureExtractor fx(cfg, ds.length());
  FeatureMatrix m;
  m.rows = ds.size();
  m.cols = fx.vector_length();
  m.config_hash = cfg.config_hash();
  m.values.resize(m.rows * m.cols);
  m.ids.reserve(m.rows);
  m.labels.reserve(m.rows);
  for (const auto& r : ds.records) {
    m.ids.push_back(r.id);
    m.labels.push_back(r.label);
  }

  auto t0 = std::chrono::steady_clock::now();
  if (parallel) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
#pragma omp parallel for schedule(static)
    for (ptrdiff_t i = 0; i < static_cast<ptrdiff_t>(ds.size()); ++i)
      fx.extract_into(ds.records[static_cast<size_t>(i)], m.row(static_cast<size_t>(i)));
  } else {
    for (size_t i = 0; i < ds.size(); ++i) fx.extract_into(ds.records[i], m.row(i));
  }
  auto t1 = std::chrono::steady_clock::now();
  if (timing) {
    timing->total_seconds = std::chrono::duration<double>(t1 - t0).count();
    timing->per_record_ms = timing->total_seconds * 1000.0 / static_cast<double>(ds.size());
  }
  return m;
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, p);
}

constexpr char kCacheMagic[4] = {'F', 'D', 'F', 'C'};
constexpr uint32_t kCacheVersion = 1;

}  // namespace

FeatureMatrix extract_matrix(const Dataset& ds, const FeatureConfig& cfg, ExtractTiming* timing,
                             int threads) {
  return extract_matrix_impl(ds, cfg, timing, true, threads);
}

FeatureMatrix extract_matrix_serial(const Dataset& ds, const FeatureConfig& cfg,
                                    ExtractTiming* timing) {
  return extract_matrix_impl(ds, cfg, timing, false, 0);
}

void write_feature_csv(const FeatureMatrix& m, const std::string& path) {
  std::string out;
  out.reserve(m.rows * m.cols * 12);
  out += "record_id";
  for (size_t j = 0; j < m.cols; ++j) {
    out += ",f";
    out += std::to_string(j);
  }
  out += '\n';
  for (size_t i = 0; i < m.rows; ++i) {
    out += m.ids[i];
    const double* r = m.row(i);
    for (size_t j = 0; j < m.cols; ++j) {
      out += ',';
      append_double(out, r[j]);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write feature csv: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

void write_feature_cache(const FeatureMatrix& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write feature cache: " + path);
  auto put = [&f](const void* p, size_t n) {
    f.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  };
  put(kCacheMagic, 4);
  put(&kCacheVersion, 4);
  put(&m.config_hash, 8);
  uint64_t rows = m.rows, cols = m.cols;
  put(&rows, 8);
  put(&cols, 8);
  for (size_t i = 0; i < m.rows; ++i) {
    uint32_t len = static_cast<uint32_t>(m.ids[i].size());
    put(&len, 4);
    put(m.ids[i].data(), len);
    uint8_t lab = static_cast<uint8_t>(m.labels[i]);
    put(&lab, 1);
  }
  put(m.values.data(), m.values.size() * sizeof(double));
}

FeatureMatrix read_feature_cache(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open feature cache: " + path);
  auto get = [&f, &path](void* p, size_t n) {
    f.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!f) throw std::runtime_error("truncated feature cache: " + path);
  };
  char magic[4];
  get(magic, 4);
  if (std::memcmp(magic, kCacheMagic, 4) != 0)
    throw std::runtime_error("not a feature cache file: " + path);
  uint32_t version = 0;
  get(&version, 4);
  if (version != kCacheVersion)
    throw std::runtime_error("unsupported feature cache version in " + path);
  FeatureMatrix m;
  get(&m.config_hash, 8);
  uint64_t rows = 0, cols = 0;
  get(&rows, 8);
  get(&cols, 8);
  m.rows = rows;
  m.cols = cols;
  m.ids.resize(rows);
  m.labels.resize(rows);
  for (size_t i = 0; i < rows; ++i) {
    uint32_t len = 0;
    get(&len, 4);
    m.ids[i].resize(len);
    if (len) get(m.ids[i].data(), len);
    uint8_t lab = 0;
    get(&lab, 1);
    m.labels[i] = static_cast<Label>(lab);
  }
  m.values.resize(rows * cols);
  get(m.values.data(), m.values.size() * sizeof(double));
  return m;
}

}  // namespace falldet
