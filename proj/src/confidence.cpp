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

#include "caleval/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace caleval {

namespace {

void require_norm(int norm) {
  if (norm != 1 && norm != 2) {
    throw ArgumentError("norm must be 1 or 2, got " + std::to_string(norm));
  }
}

CalibrationReport build_report(std::string metric_name, const Dataset& dataset,
                               const BinningScheme& scheme, int norm) {
  require_norm(norm);
  if (scheme.kind == BinningKind::Sweep) {
    throw ArgumentError("use ece_sweep for the sweep scheme");
  }
  const std::vector<double> confs = top_confidences(dataset);
  const std::vector<bool> correct = correctness(dataset);
  const BinAssignment assignment = assign(scheme, confs);
  const std::vector<BinStats> stats = bin_stats(assignment, correct, confs);

  CalibrationReport report;
  report.metric_name = std::move(metric_name);
  report.scheme = scheme;
  report.norm = norm;
  report.n = dataset.size();
  report.num_bins_effective = scheme.num_bins;
  report.per_bin = summarize_bins(scheme, assignment, stats, confs);
  report.value = weighted_gap_value(stats, norm);
  return report;
}

}  // namespace

double weighted_gap_value(const std::vector<BinStats>& stats, int norm) {
  double total = 0.0;
  for (const BinStats& s : stats) {
    if (s.count == 0) continue;
    const double gap = *s.acc - *s.conf;
    total += norm == 1 ? s.weight * std::abs(gap) : s.weight * gap * gap;
  }
  if (norm == 2) total = std::sqrt(total);
  return std::min(1.0, total);
}

std::vector<ReportBin> summarize_bins(const BinningScheme& scheme,
                                      const BinAssignment& assignment,
                                      const std::vector<BinStats>& stats,
                                      std::span<const double> values) {
  std::vector<ReportBin> rows(stats.size());
  if (scheme.kind == BinningKind::EqualWidth) {
    const std::vector<double> edges = equal_width_edges(scheme.num_bins);
    for (size_t b = 0; b < stats.size(); ++b) {
      rows[b].lo = edges[b];
      rows[b].hi = edges[b + 1];
    }
  } else {
    // equal-mass: occupied bins report the value range of their members
    for (size_t i = 0; i < values.size(); ++i) {
      const size_t b = static_cast<size_t>(assignment.bin_of[i]);
      const double c = values[i];
      rows[b].lo = rows[b].lo ? std::min(*rows[b].lo, c) : c;
      rows[b].hi = rows[b].hi ? std::max(*rows[b].hi, c) : c;
    }
  }
  for (size_t b = 0; b < stats.size(); ++b) {
    rows[b].count = stats[b].count;
    rows[b].weight = stats[b].weight;
    rows[b].acc = stats[b].acc;
    rows[b].conf = stats[b].conf;
    if (stats[b].count > 0) rows[b].gap = *stats[b].acc - *stats[b].conf;
  }
  return rows;
}

std::vector<double> top_confidences(const Dataset& dataset) {
  std::vector<double> confs;
  confs.reserve(dataset.records().size());
  for (const PredictionRecord& r : dataset.records()) {
    confs.push_back(max_confidence(r.probs));
  }
  return confs;
}

std::vector<bool> correctness(const Dataset& dataset) {
  std::vector<std::string> missing;
  for (const PredictionRecord& r : dataset.records()) {
    if (!r.hard_label) missing.push_back(r.id);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "hard labels required but absent for " << missing.size() << " record(s): ";
    for (size_t i = 0; i < missing.size() && i < 5; ++i) {
      if (i > 0) msg << ", ";
      msg << "'" << missing[i] << "'";
    }
    if (missing.size() > 5) msg << ", ...";
    throw MissingLabelError(msg.str());
  }
  std::vector<bool> correct;
  correct.reserve(dataset.records().size());
  for (const PredictionRecord& r : dataset.records()) {
    correct.push_back(argmax_class(r.probs) == *r.hard_label);
  }
  return correct;
}

CalibrationReport ece(const Dataset& dataset, const BinningScheme& scheme, int norm) {
  return build_report("ece", dataset, scheme, norm);
}

CalibrationReport reliability_data(const Dataset& dataset, const BinningScheme& scheme) {
  return build_report("reliability", dataset, scheme, 1);
}

CalibrationReport ece_sweep(const Dataset& dataset, int norm) {
  require_norm(norm);
  const std::int64_t n = dataset.size();
  if (n < 1) throw ArgumentError("ece_sweep needs at least one record");
  const std::vector<double> confs = top_confidences(dataset);
  const std::vector<bool> correct = correctness(dataset);

  // Sort once; every candidate b is evaluated on this order via prefix sums.
  std::vector<std::int64_t> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    if (confs[static_cast<size_t>(a)] != confs[static_cast<size_t>(b)])
      return confs[static_cast<size_t>(a)] < confs[static_cast<size_t>(b)];
    return a < b;
  });
  std::vector<double> sorted_conf(static_cast<size_t>(n));
  std::vector<std::int64_t> prefix_correct(static_cast<size_t>(n) + 1, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    sorted_conf[static_cast<size_t>(i)] = confs[static_cast<size_t>(order[static_cast<size_t>(i)])];
    prefix_correct[static_cast<size_t>(i) + 1] =
        prefix_correct[static_cast<size_t>(i)] +
        (correct[static_cast<size_t>(order[static_cast<size_t>(i)])] ? 1 : 0);
  }
  // run_end[i]: one past the last index sharing sorted_conf[i]'s value.
  std::vector<std::int64_t> run_end(static_cast<size_t>(n));
  for (std::int64_t i = n - 1; i >= 0; --i) {
    if (i + 1 < n && sorted_conf[static_cast<size_t>(i)] == sorted_conf[static_cast<size_t>(i) + 1]) {
      run_end[static_cast<size_t>(i)] = run_end[static_cast<size_t>(i) + 1];
    } else {
      run_end[static_cast<size_t>(i)] = i + 1;
    }
  }

  const auto is_monotone_at = [&](std::int64_t b) {
    const std::int64_t base = n / b;
    const std::int64_t rem = n % b;
    std::int64_t pos = 0;
    std::int64_t seg_start = 0;
    double prev_acc = -1.0;
    for (std::int64_t g = 0; g < b; ++g) {
      pos += base + (g < rem ? 1 : 0);
      // cuts snap to tie-run boundaries; duplicates yield empty bins, skipped
      const std::int64_t cut = g + 1 < b ? run_end[static_cast<size_t>(pos - 1)] : n;
      if (cut <= seg_start) continue;
      const std::int64_t cnt = cut - seg_start;
      const std::int64_t corr = prefix_correct[static_cast<size_t>(cut)] -
                                prefix_correct[static_cast<size_t>(seg_start)];
      const double acc = static_cast<double>(corr) / static_cast<double>(cnt);
      if (acc < prev_acc) return false;
      prev_acc = acc;
      seg_start = cut;
      if (seg_start >= n) break;
    }
    return true;
  };

  std::int64_t selected = 1;
  for (std::int64_t b = n; b >= 1; --b) {
    if (is_monotone_at(b)) {
      selected = b;
      break;
    }
  }

  const BinAssignment assignment = assign_equal_mass(confs, static_cast<int>(selected));
  const std::vector<BinStats> stats = bin_stats(assignment, correct, confs);
  CalibrationReport report;
  report.metric_name = "ece-sweep";
  report.scheme = BinningScheme::sweep();
  report.norm = norm;
  report.n = n;
  report.num_bins_effective = static_cast<int>(selected);
  report.per_bin = summarize_bins(BinningScheme::equal_mass(static_cast<int>(selected)),
                                  assignment, stats, confs);
  report.value = weighted_gap_value(stats, norm);
  return report;
}

}  // namespace caleval
