#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace falldet {

enum class Label : uint8_t { ADL = 0, FALL = 1 };

inline const char* label_name(Label l) { return l == Label::FALL ? "FALL" : "ADL"; }

inline Label label_from_string(const std::string& s) {
  if (s == "ADL") return Label::ADL;
  if (s == "FALL") return Label::FALL;
  throw std::runtime_error("unknown binary label \"" + s + "\" (expected ADL or FALL)");
}

// One labeled event: three equal-length acceleration axis series plus metadata.
struct Record {
  std::string id;
  std::string activity;  // fine-grained event name, e.g. "Running"
  Label label = Label::ADL;
  double fs = 0.0;  // sampling rate, Hz
  std::vector<double> ax, ay, az;

  size_t length() const { return ax.size(); }
};

struct Dataset {
  std::string name;
  std::vector<Record> records;

  size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  size_t length() const { return records.empty() ? 0 : records.front().length(); }
  double fs() const { return records.empty() ? 0.0 : records.front().fs; }

  size_t count(Label l) const {
    size_t n = 0;
    for (const auto& r : records)
      if (r.label == l) ++n;
    return n;
  }
};

// Monte-Carlo cross-validation: each fold draws a fresh independent permutation.
struct SplitSpec {
  double train_fraction = 0.70;
  int folds = 5;
  uint64_t seed = 42;
};

}  // namespace falldet
