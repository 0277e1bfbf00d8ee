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

#include "caleval/core.hpp"

namespace caleval {

enum class BinningKind { EqualWidth, EqualMass, Sweep };

/// How top-confidences are partitioned into bins.
struct BinningScheme {
  BinningKind kind = BinningKind::EqualWidth;
  int num_bins = 10;  // >= 1; unused by Sweep

  static BinningScheme equal_width(int m);
  static BinningScheme equal_mass(int m);
  static BinningScheme sweep();

  std::string describe() const;
};

/// Result of binning: sample index -> bin index in [0, num_bins-1].
struct BinAssignment {
  std::vector<int> bin_of;
  int num_bins = 0;
};

/// Per-bin aggregate. acc/conf are empty for a bin with no samples; such a
/// bin has weight 0 and contributes 0 to any weighted sum.
struct BinStats {
  std::int64_t count = 0;
  double weight = 0.0;  // count / n
  std::optional<double> acc;
  std::optional<double> conf;
};

/// Edges [0, 1/M, ..., 1] of M equally spaced bins. Bin m covers
/// (m/M, (m+1)/M], except bin 0 which also includes 0.
std::vector<double> equal_width_edges(int num_bins);

/// Assigns each confidence to its equal-width bin under the half-open
/// convention above. Throws ArgumentError for a confidence outside [0,1].
BinAssignment assign_equal_width(std::span<const double> confidences, int num_bins);

/// Assigns confidences to M equal-count bins.
///
/// Cut points are placed in the ascending-sorted sequence so that the first
/// (n mod M) groups get ceil(n/M) members and the rest floor(n/M), then each
/// cut snaps to a value boundary: samples sharing a confidence value never
/// straddle a bin. Membership is therefore a function of the value alone
/// (bin = number of cut values strictly below it), the assignment is
/// permutation-invariant, and heavily tied data can leave some bin indices
/// empty. With all-distinct confidences, bin counts differ by at most 1.
/// Throws ArgumentError unless 1 <= M <= n.
BinAssignment assign_equal_mass(std::span<const double> confidences, int num_bins);

/// Dispatches on scheme.kind (Sweep is rejected here; it is a search over
/// equal-mass bin counts, not a single assignment).
BinAssignment assign(const BinningScheme& scheme, std::span<const double> confidences);

/// Per-bin count, mean correctness, mean confidence, and weight. The means
/// use compensated summation so that a bin of identical confidences reports
/// that exact value. Throws DimensionError when the inputs disagree on n.
std::vector<BinStats> bin_stats(const BinAssignment& assignment,
                                const std::vector<bool>& correct,
                                std::span<const double> confidences);

}  // namespace caleval
