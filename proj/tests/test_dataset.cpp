#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "falldet/dataset.hpp"
#include "falldet/rng.hpp"
#include "falldet/synth.hpp"
#include "support/oracles.hpp"

using namespace falldet;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "falldet_tests";
  fs::create_directories(dir);
  return dir / name;
}

Dataset tiny_dataset(size_t n, size_t L = 4) {
  Dataset ds;
  ds.name = "tiny";
  for (size_t i = 0; i < n; ++i) {
    Record r;
    r.id = "r" + std::to_string(i);
    r.activity = i % 3 ? "Walking" : "Falling left";
    r.label = i % 3 ? Label::ADL : Label::FALL;
    r.fs = 50.0;
    r.ax.assign(L, 0.25 * static_cast<double>(i));
    r.ay.assign(L, 1.0);
    r.az.assign(L, -0.5);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("train_count rounds half up") {
  CHECK(train_count(0.70, 228) == 160);   // 159.6 -> 160
  CHECK(train_count(0.90, 11771) == 10594);  // 10593.9 -> 10594 (published count is 10593)
  CHECK(train_count(0.70, 11771) == 8240);
  CHECK(train_count(0.5, 10) == 5);
}

TEST_CASE("shuffle_split partitions exactly and deterministically") {
  Dataset ds = tiny_dataset(228);
  SplitSpec spec{0.70, 5, 99};
  auto [train, test] = shuffle_split(ds, spec, 0);
  CHECK(train.size() == 160);
  CHECK(test.size() == 68);

  std::set<std::string> seen;
  for (const auto& r : train.records) seen.insert(r.id);
  for (const auto& r : test.records) seen.insert(r.id);
  CHECK(seen.size() == 228);  // disjoint union == everything

  auto [train2, test2] = shuffle_split(ds, spec, 0);
  for (size_t i = 0; i < train.size(); ++i) CHECK(train.records[i].id == train2.records[i].id);
  for (size_t i = 0; i < test.size(); ++i) CHECK(test.records[i].id == test2.records[i].id);

  auto [train3, test3] = shuffle_split(ds, spec, 1);
  bool differs = false;
  for (size_t i = 0; i < train.size() && !differs; ++i)
    differs = train.records[i].id != train3.records[i].id;
  CHECK(differs);  // folds draw fresh permutations

  CHECK_THROWS(shuffle_split(ds, spec, 5));
  CHECK_THROWS(shuffle_split(ds, spec, -1));
}

TEST_CASE("split indices at published scale") {
  SplitSpec spec{0.90, 10, 7};
  auto [train, test] = split_indices(11771, spec, 3);
  CHECK(train.size() == 10594);
  CHECK(test.size() == 1177);
}

TEST_CASE("every index lands in test at the binomial rate") {
  const size_t n = 100;
  std::vector<int> test_hits(n, 0);
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    SplitSpec spec{0.70, 1, seed};
    auto [train, test] = split_indices(n, spec, 0);
    for (size_t i : test) test_hits[i]++;
  }
  for (size_t i = 0; i < n; ++i) {
    CHECK(test_hits[i] >= 200);
    CHECK(test_hits[i] <= 400);
  }
}

TEST_CASE("canonical round-trip is bit identical") {
  Rng rng(4242);
  Dataset ds;
  ds.name = "roundtrip";
  for (size_t i = 0; i < 8; ++i) {
    Record r = falldet::testing::random_record(11, rng);
    r.id = "rt" + std::to_string(i);
    r.activity = "Running";
    r.label = i % 2 ? Label::FALL : Label::ADL;
    ds.records.push_back(std::move(r));
  }
  auto p1 = temp_file("roundtrip1.csv");
  auto p2 = temp_file("roundtrip2.csv");
  save_canonical(ds, p1.string());
  Dataset loaded = load_canonical(p1.string());
  REQUIRE(loaded.size() == ds.size());
  for (size_t i = 0; i < ds.size(); ++i) {
    CHECK(loaded.records[i].id == ds.records[i].id);
    CHECK(loaded.records[i].label == ds.records[i].label);
    for (size_t t = 0; t < ds.length(); ++t) {
      CHECK(loaded.records[i].ax[t] == ds.records[i].ax[t]);
      CHECK(loaded.records[i].ay[t] == ds.records[i].ay[t]);
      CHECK(loaded.records[i].az[t] == ds.records[i].az[t]);
    }
  }
  save_canonical(loaded, p2.string());
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("single well-formed record loads") {
  auto p = temp_file("single.csv");
  std::ofstream f(p);
  f << "id,activity_label,binary_label,fs,ax,ay,az\n";
  std::string zeros;
  for (int i = 0; i < 101; ++i) zeros += (i ? ";0" : "0");
  f << "one,Walking,ADL,50," << zeros << "," << zeros << "," << zeros << "\n";
  f.close();
  Dataset ds = load_canonical(p.string());
  CHECK(ds.size() == 1);
  CHECK(ds.length() == 101);
  CHECK(ds.records[0].label == Label::ADL);
}

TEST_CASE("parse errors carry line numbers and record names") {
  auto p = temp_file("bad.csv");
  {
    std::ofstream f(p);
    f << "id,activity_label,binary_label,fs,ax,ay,az\n";
    f << "a,Walking,ADL,50,0;1,0;1,0;1\n";
    f << "b,Running,ADL,50,0;1,0;1,0;1;2\n";  // az longer
  }
  CHECK_THROWS_WITH_AS(load_canonical(p.string()),
                       doctest::Contains("length mismatch in record \"b\""), std::runtime_error);
  {
    std::ofstream f(p);
    f << "id,activity_label,binary_label,fs,ax,ay,az\n";
    f << "a,Walking,WALK,50,0;1,0;1,0;1\n";
  }
  CHECK_THROWS_WITH_AS(load_canonical(p.string()), doctest::Contains(":2:"), std::runtime_error);
  {
    std::ofstream f(p);
    f << "id,activity_label,binary_label,fs,ax,ay,az\n";
    f << "a,Walking,ADL,50,0;x,0;1,0;1\n";
  }
  CHECK_THROWS_AS(load_canonical(p.string()), std::runtime_error);
}

TEST_CASE("validation rejects ragged and non-finite data") {
  Dataset ds = tiny_dataset(4);
  ds.records[2].az.pop_back();
  CHECK_THROWS_WITH_AS(validate(ds), doctest::Contains("r2"), std::runtime_error);

  Dataset ds2 = tiny_dataset(4);
  ds2.records[1].ax[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(ds2), std::runtime_error);

  Dataset ds3 = tiny_dataset(4);
  ds3.records[3].fs = 25.0;
  CHECK_THROWS_AS(validate(ds3), std::runtime_error);
}

TEST_CASE("manifest sidecar is honored") {
  Dataset ds = tiny_dataset(5);
  auto p = temp_file("manifested.csv");
  save_canonical(ds, p.string());
  save_manifest(DatasetManifest{"nice-name", 4, "g"}, p.string());
  Dataset loaded = load_canonical(p.string());
  CHECK(loaded.name == "nice-name");
  save_manifest(DatasetManifest{"nice-name", 9, "g"}, p.string());
  CHECK_THROWS_AS(load_canonical(p.string()), std::runtime_error);
  fs::remove(p.string() + ".manifest.json");
}

TEST_CASE("stratified subset keeps label proportions") {
  Dataset ds = make_unimib_surrogate(1000, 7);
  Dataset sub = stratified_subset(ds, 400, 11);
  CHECK(sub.size() == 400);
  double frac = static_cast<double>(sub.count(Label::FALL)) / 400.0;
  double full = static_cast<double>(ds.count(Label::FALL)) / 1000.0;
  CHECK(std::abs(frac - full) < 0.01);
}

TEST_CASE("surrogate class structure matches the published tables") {
  Dataset ds = make_unimib_surrogate(11771, 3);
  CHECK(ds.size() == 11771);
  CHECK(ds.count(Label::ADL) == 7579);
  CHECK(ds.count(Label::FALL) == 4192);
  CHECK(ds.length() == 151);
  CHECK(ds.fs() == 50.0);

  Dataset gib = make_gibson_surrogate(3);
  CHECK(gib.size() == 228);
  CHECK(gib.count(Label::ADL) == 92);
  CHECK(gib.count(Label::FALL) == 136);
  CHECK(gib.length() == 101);
}
