// This file is part of the caleval toolkit; see the repository README for an
// overview of the calibration notions and measures it implements.
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
#include <stdexcept>
#include <string>
#include <vector>

namespace caleval {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability vector shorter than two entries.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// Input is not a point on the probability simplex (entry range or sum).
class SimplexError : public Error {
 public:
  using Error::Error;
};

/// Two vectors (or parallel arrays) disagree on length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument is outside its documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An operation needs hard labels that some records do not carry.
class MissingLabelError : public Error {
 public:
  using Error::Error;
};

/// An operation needs soft labels that some records do not carry.
class MissingSoftLabelError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A point on the K-simplex: K >= 2 entries in [0,1] summing to 1.
///
/// Instances are only created through validated(), which clamps float
/// round-off within `tol` and renormalizes, so code holding a ProbVector may
/// assume an exact simplex point (sum within 1e-12 of 1).
class ProbVector {
 public:
  /// Validates `raw` as a simplex point under tolerance `tol`.
  ///
  /// Entries must lie in [-tol, 1+tol] (clamped to [0,1]) and the clamped
  /// sum must satisfy |sum - 1| <= tol; the result is divided by its sum.
  /// Throws LengthError if fewer than two entries, SimplexError otherwise.
  static ProbVector validated(std::vector<double> raw, double tol = 1e-6);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int k) const { return values_[static_cast<size_t>(k)]; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const ProbVector& a, const ProbVector& b) {
    return a.values_ == b.values_;
  }

 private:
  explicit ProbVector(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// 0-indexed class label in [0, K-1]. All file formats are 0-indexed too.
struct HardLabel {
  int index = 0;

  friend bool operator==(HardLabel a, HardLabel b) { return a.index == b.index; }
};

/// One evaluated sample: the model's probability vector plus whatever ground
/// truth is available. At least one of hard_label / soft_label must be set.
struct PredictionRecord {
  std::string id;
  ProbVector probs;
  std::optional<HardLabel> hard_label;
  std::optional<ProbVector> soft_label;
  /// True when hard_label was derived from annotator votes at ingest time
  /// rather than read from the file.
  bool hard_label_from_votes = false;
};

/// A homogeneous collection of records sharing one class count K.
class Dataset {
 public:
  /// Validates and builds a dataset. Throws DimensionError when a record's K
  /// disagrees with num_classes (probs or soft_label), ArgumentError on a
  /// label outside [0, K-1], duplicate ids, a record with no label at all,
  /// or a class_names list whose length is not K.
  static Dataset create(std::vector<PredictionRecord> records, int num_classes,
                        std::optional<std::vector<std::string>> class_names = std::nullopt);

  const std::vector<PredictionRecord>& records() const { return records_; }
  int num_classes() const { return num_classes_; }
  const std::optional<std::vector<std::string>>& class_names() const { return class_names_; }
  std::int64_t size() const { return static_cast<std::int64_t>(records_.size()); }

 private:
  Dataset(std::vector<PredictionRecord> records, int num_classes,
          std::optional<std::vector<std::string>> class_names)
      : records_(std::move(records)),
        num_classes_(num_classes),
        class_names_(std::move(class_names)) {}

  std::vector<PredictionRecord> records_;
  int num_classes_ = 0;
  std::optional<std::vector<std::string>> class_names_;
};

// ---------------------------------------------------------------------------
// Scalar primitives
// ---------------------------------------------------------------------------

/// Index of the largest entry; ties break to the lowest class index.
HardLabel argmax_class(const ProbVector& p);

/// Largest entry of p. Always >= 1/K for a valid simplex point.
double max_confidence(const ProbVector& p);

/// Shannon entropy in nats, with 0*ln(0) := 0. Non-negative.
double entropy(const ProbVector& p);

/// Total variation distance 0.5 * sum_k |p_k - q_k|, in [0,1].
/// Throws DimensionError when the two vectors differ in K.
double tvd(const ProbVector& p, const ProbVector& q);

/// Correctly rounded sum (Neumaier compensation). Bin means computed from
/// this are exact for datasets whose confidences are all identical, which the
/// pathology generators rely on to report an ECE of exactly zero.
double compensated_sum(std::span<const double> xs);

}  // namespace caleval
