#include "falldet/model_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "falldet/rng.hpp"

namespace falldet {

namespace {

constexpr char kMagic[4] = {'F', 'D', 'T', 'K'};
constexpr uint32_t kVersion = 1;

struct Writer {
  std::string out;
  void raw(const void* p, size_t n) { out.append(static_cast<const char*>(p), n); }
  void u32(uint32_t v) { raw(&v, 4); }
  void u64(uint64_t v) { raw(&v, 8); }
  void f64(double v) { raw(&v, 8); }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
};

struct Reader {
  const char* p;
  const char* end;
  void raw(void* out, size_t n) {
    if (static_cast<size_t>(end - p) < n) throw std::runtime_error("truncated model file");
    std::memcpy(out, p, n);
    p += n;
  }
  uint32_t u32() {
    uint32_t v;
    raw(&v, 4);
    return v;
  }
  uint64_t u64() {
    uint64_t v;
    raw(&v, 8);
    return v;
  }
  double f64() {
    double v;
    raw(&v, 8);
    return v;
  }
  std::string str() {
    uint32_t n = u32();
    std::string s(n, '\0');
    if (n) raw(s.data(), n);
    return s;
  }
};

void write_matrix(Writer& w, const FeatureMatrix& m) {
  w.u64(m.rows);
  w.u64(m.cols);
  w.u64(m.config_hash);
  for (size_t i = 0; i < m.rows; ++i) {
    w.str(m.ids[i]);
    uint8_t lab = static_cast<uint8_t>(m.labels[i]);
    w.raw(&lab, 1);
  }
  w.raw(m.values.data(), m.values.size() * sizeof(double));
}

FeatureMatrix read_matrix(Reader& r) {
  FeatureMatrix m;
  m.rows = r.u64();
  m.cols = r.u64();
  m.config_hash = r.u64();
  m.ids.resize(m.rows);
  m.labels.resize(m.rows);
  for (size_t i = 0; i < m.rows; ++i) {
    m.ids[i] = r.str();
    uint8_t lab;
    r.raw(&lab, 1);
    m.labels[i] = static_cast<Label>(lab);
  }
  m.values.resize(m.rows * m.cols);
  r.raw(m.values.data(), m.values.size() * sizeof(double));
  return m;
}

std::string serialize(const ModelBundle& b) {
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kVersion);
  w.u32(b.features.mask);
  w.u32(static_cast<uint32_t>(b.features.wavelet.family));
  w.f64(b.features.wavelet.scale);
  w.u32(static_cast<uint32_t>(b.features.wavelet.tabulation_resolution));
  w.f64(b.fs);
  w.u64(b.record_length);
  w.u32(static_cast<uint32_t>(b.knn.k));
  w.u32(static_cast<uint32_t>(b.enn.e));
  write_matrix(w, b.knn.train);
  w.raw(b.enn.neighbors.data(), b.enn.neighbors.size() * sizeof(int32_t));
  w.raw(b.enn.neighbor_d2.data(), b.enn.neighbor_d2.size() * sizeof(double));
  w.u64(b.bdt.nodes.size());
  for (const auto& nd : b.bdt.nodes) {
    w.u32(static_cast<uint32_t>(nd.feature));
    w.f64(nd.threshold);
    w.u32(static_cast<uint32_t>(nd.left));
    w.u32(static_cast<uint32_t>(nd.right));
    uint8_t lab = static_cast<uint8_t>(nd.label);
    w.raw(&lab, 1);
    w.u64(static_cast<uint64_t>(nd.n_adl));
    w.u64(static_cast<uint64_t>(nd.n_fall));
  }
  return std::move(w.out);
}

uint64_t payload_digest(const std::string& bytes) {
  return fnv1a64(std::string_view(bytes.data(), bytes.size()));
}

}  // namespace

ModelBundle train_bundle(const Dataset& train, const FeatureConfig& cfg, int k, int e,
                         int threads) {
  if (train.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  FeatureMatrix m = extract_matrix(train, cfg, nullptr, threads);
  ModelBundle b;
  b.features = cfg;
  b.fs = train.fs();
  b.record_length = train.length();
  b.enn = enn_preprocess(m, e, threads);
  b.knn = knn_train(std::move(m), k);
  b.bdt = bdt_train(b.knn.train, threads);
  b.digest = payload_digest(serialize(b));
  return b;
}

void save_bundle(ModelBundle& bundle, const std::string& path) {
  std::string bytes = serialize(bundle);
  bundle.digest = payload_digest(bytes);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write model file: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open model file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Reader r{bytes.data(), bytes.data() + bytes.size()};

  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a falldet model file: " + path);
  if (r.u32() != kVersion) throw std::runtime_error("unsupported model version in " + path);

  ModelBundle b;
  b.features.mask = r.u32();
  b.features.wavelet.family = static_cast<WaveletFamily>(r.u32());
  b.features.wavelet.scale = r.f64();
  b.features.wavelet.tabulation_resolution = static_cast<int>(r.u32());
  b.fs = r.f64();
  b.record_length = r.u64();
  int k = static_cast<int>(r.u32());
  int e = static_cast<int>(r.u32());
  FeatureMatrix m = read_matrix(r);

  std::vector<int32_t> neighbors(m.rows * static_cast<size_t>(e));
  std::vector<double> neighbor_d2(neighbors.size());
  r.raw(neighbors.data(), neighbors.size() * sizeof(int32_t));
  r.raw(neighbor_d2.data(), neighbor_d2.size() * sizeof(double));
  b.enn = enn_from_parts(m, e, std::move(neighbors), std::move(neighbor_d2));

  uint64_t node_count = r.u64();
  b.bdt.dim = m.cols;
  b.bdt.nodes.resize(node_count);
  for (auto& nd : b.bdt.nodes) {
    nd.feature = static_cast<int32_t>(r.u32());
    nd.threshold = r.f64();
    nd.left = static_cast<int32_t>(r.u32());
    nd.right = static_cast<int32_t>(r.u32());
    uint8_t lab;
    r.raw(&lab, 1);
    nd.label = static_cast<Label>(lab);
    nd.n_adl = static_cast<int64_t>(r.u64());
    nd.n_fall = static_cast<int64_t>(r.u64());
  }
  b.knn = knn_train(std::move(m), k);
  b.digest = payload_digest(bytes);
  return b;
}

}  // namespace falldet
