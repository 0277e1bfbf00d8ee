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

#include "caleval/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace caleval {

ProbVector ProbVector::validated(std::vector<double> raw, double tol) {
  if (raw.size() < 2) {
    std::ostringstream msg;
    msg << "probability vector needs at least 2 entries, got " << raw.size();
    throw LengthError(msg.str());
  }
  for (size_t k = 0; k < raw.size(); ++k) {
    const double v = raw[k];
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
      std::ostringstream msg;
      msg << "entry " << k << " = " << v << " outside [0,1] (tolerance " << tol << ")";
      throw SimplexError(msg.str());
    }
    raw[k] = std::clamp(v, 0.0, 1.0);
  }
  const double sum = compensated_sum(raw);
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream msg;
    msg << "entries sum to " << sum << ", expected 1 (tolerance " << tol << ")";
    throw SimplexError(msg.str());
  }
  for (double& v : raw) v /= sum;
  return ProbVector(std::move(raw));
}

Dataset Dataset::create(std::vector<PredictionRecord> records, int num_classes,
                        std::optional<std::vector<std::string>> class_names) {
  if (num_classes < 2) {
    throw ArgumentError("dataset needs num_classes >= 2");
  }
  if (class_names && static_cast<int>(class_names->size()) != num_classes) {
    throw ArgumentError("class_names length must equal num_classes");
  }
  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  for (const PredictionRecord& r : records) {
    if (r.probs.size() != num_classes) {
      throw DimensionError("record '" + r.id + "': probs has K=" +
                           std::to_string(r.probs.size()) + ", dataset has K=" +
                           std::to_string(num_classes));
    }
    if (!r.hard_label && !r.soft_label) {
      throw ArgumentError("record '" + r.id + "': needs a hard or a soft label");
    }
    if (r.hard_label && (r.hard_label->index < 0 || r.hard_label->index >= num_classes)) {
      throw ArgumentError("record '" + r.id + "': label " +
                          std::to_string(r.hard_label->index) + " outside [0," +
                          std::to_string(num_classes - 1) + "]");
    }
    if (r.soft_label && r.soft_label->size() != num_classes) {
      throw DimensionError("record '" + r.id + "': soft_label has K=" +
                           std::to_string(r.soft_label->size()) + ", dataset has K=" +
                           std::to_string(num_classes));
    }
    if (!seen.insert(r.id).second) {
      throw ArgumentError("duplicate record id '" + r.id + "'");
    }
  }
  return Dataset(std::move(records), num_classes, std::move(class_names));
}

HardLabel argmax_class(const ProbVector& p) {
  int best = 0;
  for (int k = 1; k < p.size(); ++k) {
    if (p[k] > p[best]) best = k;  // strict: ties keep the lowest index
  }
  return HardLabel{best};
}

double max_confidence(const ProbVector& p) {
  double best = p[0];
  for (int k = 1; k < p.size(); ++k) best = std::max(best, p[k]);
  return best;
}

double entropy(const ProbVector& p) {
  double h = 0.0;
  for (int k = 0; k < p.size(); ++k) {
    const double v = p[k];
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double tvd(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) {
    throw DimensionError("tvd: dimension mismatch (" + std::to_string(p.size()) +
                         " vs " + std::to_string(q.size()) + ")");
  }
  double sum = 0.0;
  for (int k = 0; k < p.size(); ++k) sum += std::abs(p[k] - q[k]);
  return std::min(1.0, 0.5 * sum);
}

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace caleval
