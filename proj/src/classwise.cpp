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

#include "caleval/classwise.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace caleval {

namespace {

void require_hard_labels(const Dataset& dataset, const char* what) {
  std::vector<std::string> missing;
  for (const PredictionRecord& r : dataset.records()) {
    if (!r.hard_label) missing.push_back(r.id);
  }
  if (missing.empty()) return;
  std::ostringstream msg;
  msg << what << " requires hard labels, absent for " << missing.size() << " record(s): ";
  for (size_t i = 0; i < missing.size() && i < 5; ++i) {
    if (i > 0) msg << ", ";
    msg << "'" << missing[i] << "'";
  }
  if (missing.size() > 5) msg << ", ...";
  throw MissingLabelError(msg.str());
}

}  // namespace

ClasswiseReport classwise_ece(const Dataset& dataset, const BinningScheme& scheme,
                              int norm) {
  if (norm != 1 && norm != 2) {
    throw ArgumentError("norm must be 1 or 2, got " + std::to_string(norm));
  }
  if (scheme.kind == BinningKind::Sweep) {
    throw ArgumentError("classwise_ece does not support the sweep scheme");
  }
  require_hard_labels(dataset, "classwise_ece");

  const std::int64_t n = dataset.size();
  const int k_classes = dataset.num_classes();

  ClasswiseReport report;
  report.scheme = scheme;
  report.norm = norm;
  report.n = n;
  report.per_class.resize(static_cast<size_t>(k_classes));

  std::vector<double> values(static_cast<size_t>(n));
  std::vector<bool> is_class(static_cast<size_t>(n));
  std::vector<double> per_class_values(static_cast<size_t>(k_classes));
  for (int k = 0; k < k_classes; ++k) {
    bool present = false;
    for (std::int64_t i = 0; i < n; ++i) {
      const PredictionRecord& r = dataset.records()[static_cast<size_t>(i)];
      values[static_cast<size_t>(i)] = r.probs[k];
      const bool hit = r.hard_label->index == k;
      is_class[static_cast<size_t>(i)] = hit;
      present = present || hit;
    }
    const BinAssignment assignment = assign(scheme, values);
    const std::vector<BinStats> stats = bin_stats(assignment, is_class, values);

    ClasswiseEntry& entry = report.per_class[static_cast<size_t>(k)];
    entry.class_index = k;
    entry.present_in_data = present;
    entry.value = weighted_gap_value(stats, norm);
    entry.per_bin = summarize_bins(scheme, assignment, stats, values);
    per_class_values[static_cast<size_t>(k)] = entry.value;
  }
  report.mean_value = compensated_sum(per_class_values) / static_cast<double>(k_classes);
  return report;
}

MulticlassGroupReport multiclass_report(const Dataset& dataset, int rounding_decimals) {
  if (rounding_decimals < 1 || rounding_decimals > 9) {
    throw ArgumentError("rounding_decimals must be in [1, 9], got " +
                        std::to_string(rounding_decimals));
  }
  require_hard_labels(dataset, "multiclass_report");

  const std::int64_t n = dataset.size();
  const int k_classes = dataset.num_classes();
  double scale = 1.0;
  for (int i = 0; i < rounding_decimals; ++i) scale *= 10.0;

  // Integer keys keep grouping exact; std::map gives the sorted group order.
  std::map<std::vector<std::int64_t>, std::pair<std::int64_t, std::vector<std::int64_t>>>
      groups;
  std::vector<std::int64_t> key(static_cast<size_t>(k_classes));
  for (const PredictionRecord& r : dataset.records()) {
    for (int k = 0; k < k_classes; ++k) {
      key[static_cast<size_t>(k)] = std::llround(r.probs[k] * scale);
    }
    auto& slot = groups[key];
    if (slot.second.empty()) slot.second.assign(static_cast<size_t>(k_classes), 0);
    slot.first += 1;
    slot.second[static_cast<size_t>(r.hard_label->index)] += 1;
  }

  MulticlassGroupReport report;
  report.rounding_decimals = rounding_decimals;
  report.n = n;
  report.num_classes = k_classes;
  report.groups.reserve(groups.size());
  for (const auto& [gkey, payload] : groups) {
    PredictionGroup g;
    g.count = payload.first;
    g.rounded_probs.resize(static_cast<size_t>(k_classes));
    g.empirical_freq.resize(static_cast<size_t>(k_classes));
    double l1 = 0.0;
    for (int k = 0; k < k_classes; ++k) {
      const double q = static_cast<double>(gkey[static_cast<size_t>(k)]) / scale;
      const double f = static_cast<double>(payload.second[static_cast<size_t>(k)]) /
                       static_cast<double>(g.count);
      g.rounded_probs[static_cast<size_t>(k)] = q;
      g.empirical_freq[static_cast<size_t>(k)] = f;
      l1 += std::abs(f - q);
    }
    g.l1_gap = l1;
    g.tvd_gap = 0.5 * l1;
    report.groups.push_back(std::move(g));
  }
  return report;
}

}  // namespace caleval
