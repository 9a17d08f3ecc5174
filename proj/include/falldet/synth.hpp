#pragma once

#include <cstdint>

#include "falldet/types.hpp"

namespace falldet {

// Deterministic synthetic accelerometer datasets (units of g, 50 Hz).
//
// The surrogate generators model the event taxonomy of the two published
// benchmark datasets with per-class signal archetypes: periodic gait classes,
// posture transitions, and falls built from a pre-impact free-fall dip, an
// impact transient, and a post-impact orientation change. A small fraction of
// each confusable class pair is drawn from the overlap region on purpose, so
// classifier accuracy saturates realistically instead of at 100%.

// 17-class taxonomy, 3-second records (L=151). For n == 11771 the per-class
// counts match the published table exactly; other sizes allocate
// proportionally (largest remainder).
Dataset make_unimib_surrogate(size_t n, uint64_t seed);

// 19-class taxonomy, 2-second records (L=101), 228 records.
Dataset make_gibson_surrogate(uint64_t seed);

// Two far-apart record populations (quiet vs strong impact); linearly
// separable in any reasonable feature space.
Dataset make_blob_dataset(size_t n, size_t L, double separation, uint64_t seed);

// Identical records with mixed labels; no classifier can beat the base rate.
Dataset make_constant_dataset(size_t n, size_t L, double adl_fraction, uint64_t seed);

// White-noise records with random labels, for property tests.
Dataset make_random_dataset(size_t n, size_t L, uint64_t seed);

}  // namespace falldet
