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

#include "caleval/human.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace caleval {

namespace {

void require_soft_labels(const Dataset& dataset, const char* what) {
  std::vector<std::string> missing;
  for (const PredictionRecord& r : dataset.records()) {
    if (!r.soft_label) missing.push_back(r.id);
  }
  if (missing.empty()) return;
  std::ostringstream msg;
  msg << what << " requires soft labels, absent for " << missing.size() << " record(s): ";
  for (size_t i = 0; i < missing.size() && i < 5; ++i) {
    if (i > 0) msg << ", ";
    msg << "'" << missing[i] << "'";
  }
  if (missing.size() > 5) msg << ", ...";
  throw MissingSoftLabelError(msg.str());
}

bool has_tied_entries(const ProbVector& p) {
  std::vector<double> sorted = p.values();
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

}  // namespace

std::vector<int> argsort_ascending(const ProbVector& p) {
  std::vector<int> idx(static_cast<size_t>(p.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (p[a] != p[b]) return p[a] < p[b];
    return a < b;
  });
  return idx;
}

ProbVector votes_to_distribution(const VoteRecord& votes, int num_classes) {
  if (votes.votes.empty()) {
    throw ArgumentError("votes_to_distribution needs at least one vote");
  }
  if (num_classes < 2) {
    throw ArgumentError("votes_to_distribution needs K >= 2, got " +
                        std::to_string(num_classes));
  }
  std::vector<double> counts(static_cast<size_t>(num_classes), 0.0);
  for (int v : votes.votes) {
    if (v < 0 || v >= num_classes) {
      throw ArgumentError("vote " + std::to_string(v) + " outside [0," +
                          std::to_string(num_classes - 1) + "]");
    }
    counts[static_cast<size_t>(v)] += 1.0;
  }
  const double total = static_cast<double>(votes.votes.size());
  for (double& c : counts) c /= total;
  return ProbVector::validated(std::move(counts));
}

double entce(const PredictionRecord& record) {
  if (!record.soft_label) {
    throw MissingSoftLabelError("entce: record '" + record.id + "' has no soft label");
  }
  return entropy(*record.soft_label) - entropy(record.probs);
}

double distce(const PredictionRecord& record) {
  if (!record.soft_label) {
    throw MissingSoftLabelError("distce: record '" + record.id + "' has no soft label");
  }
  return tvd(*record.soft_label, record.probs);
}

double rankcs(const Dataset& dataset) {
  return human_report(dataset).rankcs;
}

HumanCalibReport human_report(const Dataset& dataset) {
  if (dataset.size() == 0) {
    throw ArgumentError("human_report needs a non-empty dataset");
  }
  require_soft_labels(dataset, "human_report");

  HumanCalibReport report;
  report.n = dataset.size();
  report.per_sample.reserve(static_cast<size_t>(report.n));

  std::vector<double> abs_entce;
  std::vector<double> abs_distce;
  abs_entce.reserve(static_cast<size_t>(report.n));
  abs_distce.reserve(static_cast<size_t>(report.n));
  std::int64_t matches = 0;
  for (const PredictionRecord& r : dataset.records()) {
    HumanSampleRow row;
    row.id = r.id;
    row.entce = entce(r);
    row.distce = distce(r);
    row.rank_match = argsort_ascending(*r.soft_label) == argsort_ascending(r.probs);
    row.has_ties = has_tied_entries(r.probs) || has_tied_entries(*r.soft_label);
    if (row.rank_match) ++matches;
    abs_entce.push_back(std::abs(row.entce));
    abs_distce.push_back(std::abs(row.distce));
    report.per_sample.push_back(std::move(row));
  }
  const double n = static_cast<double>(report.n);
  report.mean_abs_entce = compensated_sum(abs_entce) / n;
  report.mean_abs_distce = compensated_sum(abs_distce) / n;
  report.rankcs = static_cast<double>(matches) / n;
  return report;
}

}  // namespace caleval
