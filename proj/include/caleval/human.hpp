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

#include "caleval/core.hpp"

namespace caleval {

/// Raw annotator votes for one sample, one class index per annotator.
struct VoteRecord {
  std::vector<int> votes;
};

struct HumanSampleRow {
  std::string id;
  double entce = 0.0;
  double distce = 0.0;
  bool rank_match = false;
  /// True when probs or soft_label contains tied entries; the argsort then
  /// depends on the lowest-index tie rule, so the match is worth auditing.
  bool has_ties = false;
};

struct HumanCalibReport {
  std::vector<HumanSampleRow> per_sample;
  double mean_abs_entce = 0.0;
  double mean_abs_distce = 0.0;
  double rankcs = 0.0;
  std::int64_t n = 0;
};

/// Turns annotator votes into the frequency distribution P_vote.
/// Throws ArgumentError on an empty vote list, K < 2, or a vote outside
/// [0, K-1]. Entries of the result are integer multiples of 1/A.
ProbVector votes_to_distribution(const VoteRecord& votes, int num_classes);

/// Entropy calibration error H(soft_label) - H(probs), in nats. Positive
/// means the model is more confident (lower entropy) than the annotators.
/// Zero for any permutation of the soft label. Throws MissingSoftLabelError.
double entce(const PredictionRecord& record);

/// Fraction of records whose ascending argsort of probs equals that of the
/// soft label (ties break to the lower class index on both sides).
/// Throws MissingSoftLabelError listing offending ids.
double rankcs(const Dataset& dataset);

/// Distribution calibration error: total variation distance between
/// soft_label and probs. Throws MissingSoftLabelError.
double distce(const PredictionRecord& record);

/// Per-sample EntCE/DistCE/rank-match rows plus the dataset aggregates
/// E[|EntCE|], E[|DistCE|] and RankCS. Throws MissingSoftLabelError listing
/// offending ids, ArgumentError on an empty dataset.
HumanCalibReport human_report(const Dataset& dataset);

/// Ascending argsort with ties broken by lower class index.
std::vector<int> argsort_ascending(const ProbVector& p);

}  // namespace caleval
