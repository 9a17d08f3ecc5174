#pragma once

#include <array>
#include <cstdint>

#include "falldet/types.hpp"

namespace falldet {

// 2-of-3 majority; with three voters and two classes a tie cannot occur.
inline Label vote(Label knn, Label enn, Label bdt) {
  int falls = (knn == Label::FALL) + (enn == Label::FALL) + (bdt == Label::FALL);
  return falls >= 2 ? Label::FALL : Label::ADL;
}

struct Prediction {
  Label knn = Label::ADL, enn = Label::ADL, bdt = Label::ADL;
  Label vm = Label::ADL;
  // knn, enn, bdt, vm; vm is the sum of the three plus the vote itself
  std::array<int64_t, 4> latency_ns{};
};

}  // namespace falldet
