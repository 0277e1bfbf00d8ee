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

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "caleval/classwise.hpp"
#include "caleval/confidence.hpp"
#include "caleval/core.hpp"
#include "caleval/human.hpp"

namespace caleval {

/// A line or cell that cannot be read at all (bad JSON, bad number, short
/// row). The message names the source and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A syntactically fine record that breaks the file contract: mixed K,
/// votes together with soft_label, unknown or missing required columns.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Filesystem trouble: missing input, unwritable output, failed rename.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class FileFormat { Jsonl, Csv };
enum class ReportFormat { Json, Csv };

struct IngestOptions {
  FileFormat format = FileFormat::Jsonl;
  /// Fill missing hard labels from votes (majority, ties to the lower class
  /// index) and mark those records with hard_label_from_votes. An explicit
  /// label always wins over derivation.
  bool derive_hard_from_votes = false;
  double simplex_tol = 1e-6;  // must lie in (0, 0.01]
};

/// Reads a dataset from `path`.
///
/// JSONL: one object per line with "id", "probs" and at most one of
/// "label", "votes" + optional "label", or "soft_label" ("votes" with
/// "soft_label" is a SchemaError). Votes always yield the record's
/// soft_label via their frequencies.
/// CSV: header id,prob_0..prob_{K-1},label[,vote_0..vote_{A-1}]; an empty
/// label cell means absent; empty vote cells are skipped. Fields must not
/// contain commas; no quoting is supported.
/// Every error names the offending line. Throws ParseError, SchemaError,
/// SimplexError (with record id), IoError on unreadable files.
Dataset ingest(const std::string& path, const IngestOptions& options);

/// Same as ingest but from an open stream; `source_name` seeds error text.
Dataset ingest_stream(std::istream& in, const IngestOptions& options,
                      const std::string& source_name);

/// Serializes a dataset to JSONL (the inverse of ingest for the JSONL
/// format; derived-label provenance survives the round trip).
std::string dataset_to_jsonl(const Dataset& dataset);

/// Writes dataset_to_jsonl(dataset) to `path` atomically.
void emit_dataset(const Dataset& dataset, const std::string& path);

/// Report JSON with stable field order; absent bin stats are null.
std::string report_to_json(const CalibrationReport& report);

/// The same document as a JSON value, for callers that aggregate several
/// reports into one file.
nlohmann::ordered_json report_json_value(const CalibrationReport& report);

/// JSON documents for the other report types, same conventions (stable
/// order, nulls for absent stats).
nlohmann::ordered_json classwise_json_value(const ClasswiseReport& report);
nlohmann::ordered_json multiclass_json_value(const MulticlassGroupReport& report);
nlohmann::ordered_json human_json_value(const HumanCalibReport& report);

/// Parses report_to_json output back into a report.
CalibrationReport report_from_json(const std::string& text);

/// Per-bin table as CSV, floats printed with 17 significant digits, absent
/// stats as empty fields. Export only; there is no CSV report parser.
std::string report_to_csv(const CalibrationReport& report);

/// Writes a report to `path` atomically in the requested format.
void emit_report(const CalibrationReport& report, ReportFormat format,
                 const std::string& path);

/// Writes `content` to `path` via a temp file in the same directory plus
/// rename, so readers never observe a partial file. Throws IoError.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace caleval
