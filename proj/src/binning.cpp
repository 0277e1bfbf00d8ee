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

#include "caleval/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace caleval {

BinningScheme BinningScheme::equal_width(int m) {
  if (m < 1) throw ArgumentError("equal-width binning needs num_bins >= 1");
  return BinningScheme{BinningKind::EqualWidth, m};
}

BinningScheme BinningScheme::equal_mass(int m) {
  if (m < 1) throw ArgumentError("equal-mass binning needs num_bins >= 1");
  return BinningScheme{BinningKind::EqualMass, m};
}

BinningScheme BinningScheme::sweep() { return BinningScheme{BinningKind::Sweep, 0}; }

std::string BinningScheme::describe() const {
  switch (kind) {
    case BinningKind::EqualWidth:
      return "equal-width(" + std::to_string(num_bins) + ")";
    case BinningKind::EqualMass:
      return "equal-mass(" + std::to_string(num_bins) + ")";
    case BinningKind::Sweep:
      return "sweep";
  }
  return "?";
}

std::vector<double> equal_width_edges(int num_bins) {
  if (num_bins < 1) throw ArgumentError("equal_width_edges: num_bins must be >= 1");
  std::vector<double> edges(static_cast<size_t>(num_bins) + 1);
  for (int i = 0; i <= num_bins; ++i) {
    edges[static_cast<size_t>(i)] = static_cast<double>(i) / num_bins;
  }
  edges.back() = 1.0;
  return edges;
}

BinAssignment assign_equal_width(std::span<const double> confidences, int num_bins) {
  const std::vector<double> edges = equal_width_edges(num_bins);
  BinAssignment out;
  out.num_bins = num_bins;
  out.bin_of.reserve(confidences.size());
  for (size_t i = 0; i < confidences.size(); ++i) {
    const double c = confidences[i];
    if (!(c >= 0.0 && c <= 1.0)) {
      std::ostringstream msg;
      msg << "confidence " << c << " at sample " << i << " outside [0,1]";
      throw ArgumentError(msg.str());
    }
    // First edge >= c, taken over edges[1..M]; comparisons happen against the
    // representable edge values, so boundary confidences land in the lower bin.
    const auto it = std::lower_bound(edges.begin() + 1, edges.end(), c);
    out.bin_of.push_back(static_cast<int>(it - edges.begin()) - 1);
  }
  return out;
}

BinAssignment assign_equal_mass(std::span<const double> confidences, int num_bins) {
  const std::int64_t n = static_cast<std::int64_t>(confidences.size());
  if (num_bins < 1) throw ArgumentError("equal-mass binning needs num_bins >= 1");
  if (num_bins > n) {
    throw ArgumentError("equal-mass binning needs num_bins <= n (" +
                        std::to_string(num_bins) + " > " + std::to_string(n) + ")");
  }
  for (size_t i = 0; i < confidences.size(); ++i) {
    if (!std::isfinite(confidences[i])) {
      throw ArgumentError("confidence at sample " + std::to_string(i) + " is not finite");
    }
  }

  std::vector<double> sorted(confidences.begin(), confidences.end());
  std::sort(sorted.begin(), sorted.end());

  // Cut values at the size-rule positions: first (n mod M) groups take
  // ceil(n/M) samples, the rest floor(n/M). A sample belongs to bin
  // #{cuts strictly below its value}, which keeps tied values together.
  const std::int64_t base = n / num_bins;
  const std::int64_t rem = n % num_bins;
  std::vector<double> cuts;
  cuts.reserve(static_cast<size_t>(num_bins) - 1);
  std::int64_t pos = 0;
  for (int b = 0; b < num_bins - 1; ++b) {
    pos += base + (b < rem ? 1 : 0);
    cuts.push_back(sorted[static_cast<size_t>(pos - 1)]);
  }

  BinAssignment out;
  out.num_bins = num_bins;
  out.bin_of.reserve(confidences.size());
  for (const double c : confidences) {
    // bin = number of cut values strictly below c
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), c);
    out.bin_of.push_back(static_cast<int>(it - cuts.begin()));
  }
  return out;
}

BinAssignment assign(const BinningScheme& scheme, std::span<const double> confidences) {
  switch (scheme.kind) {
    case BinningKind::EqualWidth:
      return assign_equal_width(confidences, scheme.num_bins);
    case BinningKind::EqualMass:
      return assign_equal_mass(confidences, scheme.num_bins);
    case BinningKind::Sweep:
      throw ArgumentError("sweep is not a single binning; use ece_sweep");
  }
  throw ArgumentError("unknown binning kind");
}

std::vector<BinStats> bin_stats(const BinAssignment& assignment,
                                const std::vector<bool>& correct,
                                std::span<const double> confidences) {
  const size_t n = assignment.bin_of.size();
  if (correct.size() != n || confidences.size() != n) {
    throw DimensionError("bin_stats: assignment covers " + std::to_string(n) +
                         " samples, correct has " + std::to_string(correct.size()) +
                         ", confidences has " + std::to_string(confidences.size()));
  }

  const size_t m = static_cast<size_t>(assignment.num_bins);
  std::vector<std::int64_t> counts(m, 0);
  std::vector<std::int64_t> correct_counts(m, 0);
  std::vector<std::vector<double>> members(m);
  for (size_t i = 0; i < n; ++i) {
    const size_t b = static_cast<size_t>(assignment.bin_of[i]);
    counts[b] += 1;
    if (correct[i]) correct_counts[b] += 1;
    members[b].push_back(confidences[i]);
  }

  std::vector<BinStats> stats(m);
  for (size_t b = 0; b < m; ++b) {
    stats[b].count = counts[b];
    stats[b].weight = n > 0 ? static_cast<double>(counts[b]) / static_cast<double>(n) : 0.0;
    if (counts[b] > 0) {
      stats[b].acc = static_cast<double>(correct_counts[b]) / static_cast<double>(counts[b]);
      stats[b].conf = compensated_sum(members[b]) / static_cast<double>(counts[b]);
    }
  }
  return stats;
}

}  // namespace caleval
