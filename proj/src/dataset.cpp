#include "falldet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "falldet/rng.hpp"
#include "json.hpp"

namespace falldet {

namespace {

[[noreturn]] void parse_fail(const std::string& path, size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": parse error: " + what);
}

double parse_double(std::string_view tok, const std::string& path, size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    parse_fail(path, line, "bad number \"" + std::string(tok) + "\"");
  return v;
}

std::vector<double> parse_samples(std::string_view field, const std::string& path, size_t line) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= field.size()) {
    size_t end = field.find(';', start);
    if (end == std::string_view::npos) end = field.size();
    std::string_view tok = field.substr(start, end - start);
    if (tok.empty()) parse_fail(path, line, "empty sample");
    out.push_back(parse_double(tok, path, line));
    if (end == field.size()) break;
    start = end + 1;
  }
  return out;
}

// Splits a row into exactly 7 comma-separated fields.
std::vector<std::string_view> split_fields(std::string_view row) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t end = row.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(row.substr(start));
      break;
    }
    fields.push_back(row.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, p);
}

constexpr const char* kHeader = "id,activity_label,binary_label,fs,ax,ay,az";

}  // namespace

Dataset load_canonical(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  Dataset ds;
  ds.name = path;

  std::string row;
  size_t line = 0;
  if (!std::getline(in, row)) throw std::runtime_error(path + ": empty file");
  ++line;
  if (!row.empty() && row.back() == '\r') row.pop_back();
  if (row != kHeader)
    parse_fail(path, line, "bad header (expected \"" + std::string(kHeader) + "\")");

  while (std::getline(in, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    auto fields = split_fields(row);
    if (fields.size() != 7)
      parse_fail(path, line, "expected 7 fields, got " + std::to_string(fields.size()));

    Record r;
    r.id = std::string(fields[0]);
    r.activity = std::string(fields[1]);
    try {
      r.label = label_from_string(std::string(fields[2]));
    } catch (const std::exception& e) {
      parse_fail(path, line, e.what());
    }
    r.fs = parse_double(fields[3], path, line);
    r.ax = parse_samples(fields[4], path, line);
    r.ay = parse_samples(fields[5], path, line);
    r.az = parse_samples(fields[6], path, line);

    if (r.ay.size() != r.ax.size() || r.az.size() != r.ax.size())
      throw std::runtime_error(path + ":" + std::to_string(line) +
                               ": length mismatch in record \"" + r.id + "\" (ax=" +
                               std::to_string(r.ax.size()) + ", ay=" + std::to_string(r.ay.size()) +
                               ", az=" + std::to_string(r.az.size()) + ")");
    ds.records.push_back(std::move(r));
  }

  validate(ds);

  if (auto m = load_manifest(path)) {
    ds.name = m->name;
    if (m->expected_length != 0 && m->expected_length != ds.length())
      throw std::runtime_error(path + ": manifest expected_length " +
                               std::to_string(m->expected_length) + " but records have length " +
                               std::to_string(ds.length()));
  }
  return ds;
}

void save_canonical(const Dataset& ds, const std::string& path) {
  std::string out;
  out.reserve(ds.size() * 2048);
  out += kHeader;
  out += '\n';
  for (const auto& r : ds.records) {
    out += r.id;
    out += ',';
    out += r.activity;
    out += ',';
    out += label_name(r.label);
    out += ',';
    append_double(out, r.fs);
    for (const auto* axis : {&r.ax, &r.ay, &r.az}) {
      out += ',';
      for (size_t i = 0; i < axis->size(); ++i) {
        if (i) out += ';';
        append_double(out, (*axis)[i]);
      }
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write dataset file: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

std::optional<DatasetManifest> load_manifest(const std::string& dataset_path) {
  std::ifstream in(dataset_path + ".manifest.json");
  if (!in) return std::nullopt;
  nlohmann::json j;
  in >> j;
  DatasetManifest m;
  m.name = j.value("name", "");
  m.expected_length = j.value("expected_length", size_t{0});
  m.units = j.value("units", "");
  return m;
}

void save_manifest(const DatasetManifest& m, const std::string& dataset_path) {
  nlohmann::json j{{"name", m.name}, {"expected_length", m.expected_length}, {"units", m.units}};
  std::ofstream f(dataset_path + ".manifest.json");
  f << j.dump(2) << "\n";
}

void validate(const Dataset& ds) {
  if (ds.empty()) throw std::runtime_error("dataset has no records");
  const size_t L = ds.records.front().length();
  const double fs = ds.records.front().fs;
  if (L < 2) throw std::runtime_error("records must have at least 2 samples");
  for (const auto& r : ds.records) {
    if (r.fs <= 0.0) throw std::runtime_error("record \"" + r.id + "\": fs must be > 0");
    if (r.fs != fs)
      throw std::runtime_error("record \"" + r.id + "\": fs differs from dataset fs");
    if (r.ax.size() != L || r.ay.size() != L || r.az.size() != L)
      throw std::runtime_error("record \"" + r.id + "\": length mismatch (expected " +
                               std::to_string(L) + ")");
    for (const auto* axis : {&r.ax, &r.ay, &r.az})
      for (double v : *axis)
        if (!std::isfinite(v))
          throw std::runtime_error("record \"" + r.id + "\": non-finite sample");
  }
}

size_t train_count(double train_fraction, size_t n) {
  // Round half up; the source tables round the same quantity down in one
  // place, so a +/-1 discrepancy against published counts is expected.
  return static_cast<size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
}

std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(size_t n, const SplitSpec& spec,
                                                                  int fold_index) {
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  if (spec.folds < 1) throw std::invalid_argument("folds must be >= 1");
  if (fold_index < 0 || fold_index >= spec.folds)
    throw std::invalid_argument("fold index " + std::to_string(fold_index) +
                                " out of range [0, " + std::to_string(spec.folds) + ")");
  Rng rng(derive_seed(spec.seed, static_cast<uint64_t>(fold_index), "split"));
  std::vector<size_t> perm = random_permutation(n, rng);
  size_t n_train = train_count(spec.train_fraction, n);
  std::vector<size_t> train(perm.begin(), perm.begin() + static_cast<ptrdiff_t>(n_train));
  std::vector<size_t> test(perm.begin() + static_cast<ptrdiff_t>(n_train), perm.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> shuffle_split(const Dataset& ds, const SplitSpec& spec,
                                          int fold_index) {
  auto [train_idx, test_idx] = split_indices(ds.size(), spec, fold_index);
  Dataset train, test;
  train.name = ds.name + "/train";
  test.name = ds.name + "/test";
  train.records.reserve(train_idx.size());
  test.records.reserve(test_idx.size());
  for (size_t i : train_idx) train.records.push_back(ds.records[i]);
  for (size_t i : test_idx) test.records.push_back(ds.records[i]);
  return {std::move(train), std::move(test)};
}

Dataset stratified_subset(const Dataset& ds, size_t n, uint64_t seed) {
  if (n > ds.size()) throw std::invalid_argument("subset larger than dataset");
  std::vector<size_t> adl, fall;
  for (size_t i = 0; i < ds.size(); ++i)
    (ds.records[i].label == Label::FALL ? fall : adl).push_back(i);

  double frac = static_cast<double>(n) / static_cast<double>(ds.size());
  size_t n_fall = static_cast<size_t>(std::floor(frac * static_cast<double>(fall.size()) + 0.5));
  n_fall = std::min(n_fall, fall.size());
  n_fall = std::min(n_fall, n);
  size_t n_adl = n - n_fall;
  if (n_adl > adl.size()) {
    n_fall += n_adl - adl.size();
    n_adl = adl.size();
  }

  Rng rng(derive_seed(seed, 0, "stratified-subset"));
  auto pick = [&rng](std::vector<size_t>& pool, size_t count) {
    std::vector<size_t> perm = random_permutation(pool.size(), rng);
    std::vector<size_t> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) out.push_back(pool[perm[i]]);
    return out;
  };
  std::vector<size_t> chosen = pick(adl, n_adl);
  std::vector<size_t> chosen_fall = pick(fall, n_fall);
  chosen.insert(chosen.end(), chosen_fall.begin(), chosen_fall.end());
  std::sort(chosen.begin(), chosen.end());

  Dataset out;
  out.name = ds.name + "/subset" + std::to_string(n);
  out.records.reserve(n);
  for (size_t i : chosen) out.records.push_back(ds.records[i]);
  return out;
}

}  // namespace falldet
