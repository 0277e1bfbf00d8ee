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

#include "caleval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace caleval {

namespace {

double uniform01(std::mt19937_64& rng) {
  // 53 random bits scaled to [0,1); avoids std::uniform_real_distribution,
  // whose output is not pinned across standard library implementations.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Dataset gen_majority_pathology(const MajorityPathologySpec& spec) {
  const int k_classes = static_cast<int>(spec.class_counts.size());
  if (k_classes < 2) {
    throw ArgumentError("majority pathology needs at least 2 classes");
  }
  std::int64_t n = 0;
  for (std::int64_t c : spec.class_counts) {
    if (c < 0) throw ArgumentError("class counts must be non-negative");
    n += c;
  }
  if (n < 1) throw ArgumentError("class counts must sum to at least 1");
  const double conf = spec.confidence;
  if (!std::isfinite(conf) || conf <= 1.0 / static_cast<double>(k_classes) || conf > 1.0) {
    std::ostringstream msg;
    msg << "confidence must lie in (1/K, 1], got " << conf;
    throw ArgumentError(msg.str());
  }

  int majority = 0;
  for (int k = 1; k < k_classes; ++k) {
    if (spec.class_counts[static_cast<size_t>(k)] >
        spec.class_counts[static_cast<size_t>(majority)]) {
      majority = k;
    }
  }
  if (spec.strict) {
    for (int k = 0; k < k_classes; ++k) {
      if (k != majority && spec.class_counts[static_cast<size_t>(k)] ==
                               spec.class_counts[static_cast<size_t>(majority)]) {
        throw ArgumentError("strict majority pathology: classes " + std::to_string(majority) +
                            " and " + std::to_string(k) + " tie for majority");
      }
    }
    const double prevalence =
        static_cast<double>(spec.class_counts[static_cast<size_t>(majority)]) /
        static_cast<double>(n);
    if (conf != prevalence) {
      std::ostringstream msg;
      msg << "strict majority pathology: confidence " << conf
          << " != majority prevalence " << prevalence;
      throw ArgumentError(msg.str());
    }
  }

  // Fill the remainder uniformly, then rewrite one entry as 1 - sum(rest) so
  // the vector sums to exactly 1.0 and validation leaves every entry, in
  // particular the majority confidence, bit-identical.
  std::vector<double> raw(static_cast<size_t>(k_classes),
                          (1.0 - conf) / static_cast<double>(k_classes - 1));
  raw[static_cast<size_t>(majority)] = conf;
  int last_other = k_classes - 1;
  if (last_other == majority) last_other = k_classes - 2;
  {
    std::vector<double> rest;
    rest.reserve(static_cast<size_t>(k_classes) - 1);
    for (int k = 0; k < k_classes; ++k) {
      if (k != last_other) rest.push_back(raw[static_cast<size_t>(k)]);
    }
    raw[static_cast<size_t>(last_other)] = 1.0 - compensated_sum(rest);
  }
  const ProbVector probs = ProbVector::validated(raw);

  std::vector<PredictionRecord> records;
  records.reserve(static_cast<size_t>(n));
  std::int64_t idx = 0;
  for (int k = 0; k < k_classes; ++k) {
    for (std::int64_t i = 0; i < spec.class_counts[static_cast<size_t>(k)]; ++i) {
      records.push_back(PredictionRecord{"m" + std::to_string(idx++), probs,
                                         HardLabel{k}, std::nullopt, false});
    }
  }
  return Dataset::create(std::move(records), k_classes);
}

Dataset gen_calibrated_world(const CalibratedWorldSpec& spec) {
  if (spec.n < 1) throw ArgumentError("calibrated world needs n >= 1");
  if (spec.num_classes < 2) throw ArgumentError("calibrated world needs K >= 2");

  std::mt19937_64 rng(spec.seed);
  const int k_classes = spec.num_classes;
  std::vector<PredictionRecord> records;
  records.reserve(static_cast<size_t>(spec.n));
  std::vector<double> cuts(static_cast<size_t>(k_classes) - 1);
  std::vector<double> raw(static_cast<size_t>(k_classes));
  for (std::int64_t i = 0; i < spec.n; ++i) {
    // Sorted-uniform spacings give a uniform draw from the simplex.
    for (double& c : cuts) c = uniform01(rng);
    std::sort(cuts.begin(), cuts.end());
    double prev = 0.0;
    for (int k = 0; k + 1 < k_classes; ++k) {
      raw[static_cast<size_t>(k)] = cuts[static_cast<size_t>(k)] - prev;
      prev = cuts[static_cast<size_t>(k)];
    }
    raw[static_cast<size_t>(k_classes) - 1] = 1.0 - prev;
    ProbVector probs = ProbVector::validated(raw);

    // The label is drawn from the stored (validated) vector, so the process
    // is calibrated with respect to exactly what the evaluator will see.
    const double u = uniform01(rng);
    int label = k_classes - 1;
    double cumulative = 0.0;
    for (int k = 0; k < k_classes; ++k) {
      cumulative += probs[k];
      if (u < cumulative) {
        label = k;
        break;
      }
    }
    records.push_back(PredictionRecord{"w" + std::to_string(i), std::move(probs),
                                       HardLabel{label}, std::nullopt, false});
  }
  return Dataset::create(std::move(records), k_classes);
}

Dataset distort_temperature(const Dataset& dataset, double temperature) {
  if (!std::isfinite(temperature) || temperature <= 0.0) {
    std::ostringstream msg;
    msg << "temperature must be positive and finite, got " << temperature;
    throw ArgumentError(msg.str());
  }
  const double inv_t = 1.0 / temperature;
  std::vector<PredictionRecord> records;
  records.reserve(dataset.records().size());
  for (const PredictionRecord& r : dataset.records()) {
    std::vector<double> raw(static_cast<size_t>(r.probs.size()));
    for (int k = 0; k < r.probs.size(); ++k) {
      raw[static_cast<size_t>(k)] = std::pow(r.probs[k], inv_t);
    }
    const double sum = compensated_sum(raw);
    for (double& v : raw) v /= sum;
    records.push_back(PredictionRecord{r.id, ProbVector::validated(raw), r.hard_label,
                                       r.soft_label, r.hard_label_from_votes});
  }
  auto names = dataset.class_names();
  return Dataset::create(std::move(records), dataset.num_classes(), std::move(names));
}

}  // namespace caleval
