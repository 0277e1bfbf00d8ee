// This file is part of the caleval toolkit.
//
// Copyright 2026 The caleval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "caleval/core.hpp"

namespace caleval {

/// A world where one class dominates and the model always predicts it.
/// Every record gets `confidence` on the majority class and the remainder
/// split uniformly; hard labels realize class_counts.
struct MajorityPathologySpec {
  std::vector<std::int64_t> class_counts;
  double confidence = 0.0;
  /// Enforce confidence == majority prevalence (and a unique majority), the
  /// precondition for the exact-zero-ECE guarantee.
  bool strict = false;
};

/// A world that is calibrated by construction: each record's probability
/// vector is drawn from a fixed seeded distribution over the simplex and its
/// hard label is then drawn from that same vector.
struct CalibratedWorldSpec {
  std::int64_t n = 0;
  int num_classes = 0;
  std::uint64_t seed = 0;
};

/// Builds the majority-class pathology dataset. The numeric construction
/// keeps the majority entry bit-exact and the vector sum exactly 1, so the
/// reported ECE of a prevalence-matched spec is exactly zero.
/// Throws ArgumentError on invalid counts, confidence outside (1/K, 1], or,
/// under strict, a tied majority / confidence != prevalence.
Dataset gen_majority_pathology(const MajorityPathologySpec& spec);

/// Draws the calibrated world. Deterministic across runs and platforms for a
/// fixed seed: mt19937_64, uniforms via (rng() >> 11) * 2^-53, simplex points
/// from sorted-uniform spacings, labels by cumulative scan of the stored
/// vector. No libm calls, so results are bit-identical everywhere IEEE
/// doubles are. Throws ArgumentError on n < 1 or K < 2.
Dataset gen_calibrated_world(const CalibratedWorldSpec& spec);

/// Temperature-distorts every prediction: p_k -> p_k^(1/T), renormalized.
/// T < 1 sharpens (overconfidence), T > 1 flattens, T = 1 is the identity.
/// Labels and ids are untouched; per-sample argmax (hence accuracy) is
/// preserved exactly. Throws ArgumentError on T <= 0 or non-finite T.
Dataset distort_temperature(const Dataset& dataset, double temperature);

}  // namespace caleval
