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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "caleval/binning.hpp"
#include "caleval/core.hpp"

namespace caleval {

/// One row of a reliability/report table. lo/hi are bin boundaries for
/// equal-width schemes and the occupied value range for equal-mass schemes;
/// acc/conf/gap are empty (serialized as null, never 0) for empty bins.
struct ReportBin {
  std::optional<double> lo;
  std::optional<double> hi;
  std::int64_t count = 0;
  double weight = 0.0;
  std::optional<double> acc;
  std::optional<double> conf;
  std::optional<double> gap;  // acc - conf
};

/// A scalar calibration metric plus the per-bin table it was computed from.
struct CalibrationReport {
  std::string metric_name;
  double value = 0.0;
  BinningScheme scheme;
  int norm = 1;
  std::vector<ReportBin> per_bin;
  std::int64_t n = 0;
  int num_bins_effective = 0;
};

/// Expected calibration error of the top-confidence predictions.
///
/// Per bin m with weight w_m = |B_m|/n, accuracy a_m and mean confidence
/// c_m: norm 1 gives sum_m w_m * |a_m - c_m|, norm 2 gives
/// sqrt(sum_m w_m * (a_m - c_m)^2). Empty bins contribute 0.
/// Requires every record to carry a hard label (MissingLabelError) and the
/// scheme to be EqualWidth or EqualMass (ArgumentError otherwise).
CalibrationReport ece(const Dataset& dataset, const BinningScheme& scheme, int norm = 1);

/// ECE at the largest equal-mass bin count b whose per-bin accuracies
/// (ordered by confidence, empty bins skipped) are non-decreasing. Scans b
/// from n down to 1; b = 1 is always monotone, so the search terminates.
/// The report carries num_bins_effective = b.
CalibrationReport ece_sweep(const Dataset& dataset, int norm = 1);

/// Per-bin reliability table (boundaries, acc, conf, count, gap) ready for
/// rendering. The value field carries the norm-1 ECE for convenience.
CalibrationReport reliability_data(const Dataset& dataset, const BinningScheme& scheme);

/// Top confidence of every record, in record order.
std::vector<double> top_confidences(const Dataset& dataset);

/// Whether argmax_class(probs) matches the hard label, in record order.
/// Throws MissingLabelError naming offending records.
std::vector<bool> correctness(const Dataset& dataset);

/// Weighted |gap| sum (norm 1) or weighted RMS gap (norm 2) over occupied
/// bins, clamped to [0, 1]. Shared by ece and classwise_ece.
double weighted_gap_value(const std::vector<BinStats>& stats, int norm);

/// Builds report rows from bin stats. Equal-width rows carry the bin edges,
/// equal-mass rows the occupied value range of their members.
std::vector<ReportBin> summarize_bins(const BinningScheme& scheme,
                                      const BinAssignment& assignment,
                                      const std::vector<BinStats>& stats,
                                      std::span<const double> values);

}  // namespace caleval
