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
#include <string>
#include <vector>

#include "caleval/confidence.hpp"
#include "caleval/core.hpp"

namespace caleval {

/// Calibration of one class probability considered in isolation.
struct ClasswiseEntry {
  int class_index = 0;
  /// False when no record carries this class as its hard label; the entry is
  /// still evaluated (its empirical frequency is 0 everywhere).
  bool present_in_data = true;
  double value = 0.0;
  std::vector<ReportBin> per_bin;
};

struct ClasswiseReport {
  std::vector<ClasswiseEntry> per_class;
  double mean_value = 0.0;
  BinningScheme scheme;
  int norm = 1;
  std::int64_t n = 0;
};

/// One cell of the multi-class grouping probe: all records whose prediction
/// vector rounds to the same point, with the class frequencies observed there.
struct PredictionGroup {
  std::vector<double> rounded_probs;
  std::int64_t count = 0;
  std::vector<double> empirical_freq;
  double l1_gap = 0.0;
  double tvd_gap = 0.0;
};

struct MulticlassGroupReport {
  std::vector<PredictionGroup> groups;  // sorted by rounded vector, ascending
  int rounding_decimals = 1;
  std::int64_t n = 0;
  int num_classes = 0;
};

/// Class-wise ECE: for each class k, ALL samples are binned by their k-th
/// probability (not only those predicted as k), per-bin "accuracy" is the
/// empirical frequency of hard label k, and the per-class values are averaged
/// into mean_value. Requires hard labels on every record.
ClasswiseReport classwise_ece(const Dataset& dataset, const BinningScheme& scheme,
                              int norm = 1);

/// Groups records by their prediction vector rounded to `rounding_decimals`
/// and reports, per group, the empirical class frequencies plus the L1 and
/// TVD gaps to the rounded vector. A diagnostic, not a scalar metric.
MulticlassGroupReport multiclass_report(const Dataset& dataset, int rounding_decimals = 1);

}  // namespace caleval
