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

#include "caleval/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "caleval/human.hpp"

namespace caleval {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Everything one input row can carry before validation.
struct RawRecord {
  std::string id;
  std::vector<double> probs;
  std::optional<int> label;
  std::optional<std::vector<int>> votes;
  std::optional<std::vector<double>> soft;
  bool label_from_votes = false;
};

int majority_vote(const std::vector<int>& votes, int num_classes) {
  std::vector<std::int64_t> counts(static_cast<size_t>(num_classes), 0);
  for (int v : votes) counts[static_cast<size_t>(v)] += 1;
  int best = 0;
  for (int k = 1; k < num_classes; ++k) {
    if (counts[static_cast<size_t>(k)] > counts[static_cast<size_t>(best)]) best = k;
  }
  return best;
}

PredictionRecord build_record(RawRecord raw, int& expected_k, const IngestOptions& options,
                              const std::string& where) {
  if (raw.votes && raw.soft) {
    throw SchemaError(where + ": record '" + raw.id +
                      "' carries both votes and soft_label; pick one");
  }
  const int k = static_cast<int>(raw.probs.size());
  if (k < 2) {
    throw SchemaError(where + ": record '" + raw.id + "' has " + std::to_string(k) +
                      " probabilities, need at least 2");
  }
  if (expected_k < 0) {
    expected_k = k;
  } else if (k != expected_k) {
    throw SchemaError(where + ": record '" + raw.id + "' has K=" + std::to_string(k) +
                      ", file has K=" + std::to_string(expected_k));
  }
  if (raw.label && (*raw.label < 0 || *raw.label >= expected_k)) {
    throw SchemaError(where + ": record '" + raw.id + "' label " +
                      std::to_string(*raw.label) + " outside [0," +
                      std::to_string(expected_k - 1) + "]");
  }

  ProbVector probs = [&] {
    try {
      return ProbVector::validated(std::move(raw.probs), options.simplex_tol);
    } catch (const SimplexError& e) {
      throw SimplexError(where + ": record '" + raw.id + "': " + e.what());
    }
  }();
  PredictionRecord record{std::move(raw.id), std::move(probs), std::nullopt, std::nullopt,
                          false};
  if (raw.label) record.hard_label = HardLabel{*raw.label};
  record.hard_label_from_votes = raw.label && raw.label_from_votes;

  if (raw.soft) {
    if (static_cast<int>(raw.soft->size()) != expected_k) {
      throw SchemaError(where + ": record '" + record.id + "' soft_label has K=" +
                        std::to_string(raw.soft->size()) + ", file has K=" +
                        std::to_string(expected_k));
    }
    try {
      record.soft_label = ProbVector::validated(std::move(*raw.soft), options.simplex_tol);
    } catch (const SimplexError& e) {
      throw SimplexError(where + ": record '" + record.id + "' soft_label: " + e.what());
    }
  }
  if (raw.votes) {
    try {
      record.soft_label = votes_to_distribution(VoteRecord{*raw.votes}, expected_k);
    } catch (const ArgumentError& e) {
      throw SchemaError(where + ": record '" + record.id + "': " + e.what());
    }
    if (options.derive_hard_from_votes && !record.hard_label) {
      record.hard_label = HardLabel{majority_vote(*raw.votes, expected_k)};
      record.hard_label_from_votes = true;
    }
  }
  if (!record.hard_label && !record.soft_label) {
    throw SchemaError(where + ": record '" + record.id +
                      "' has no label, votes, or soft_label");
  }
  return record;
}

std::vector<PredictionRecord> parse_jsonl(std::istream& in, const IngestOptions& options,
                                          const std::string& source, int& expected_k) {
  std::vector<PredictionRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);

    ordered_json row;
    try {
      row = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!row.is_object()) throw SchemaError(where + ": expected a JSON object");

    RawRecord raw;
    if (!row.contains("id") || !row["id"].is_string()) {
      throw SchemaError(where + ": missing string field \"id\"");
    }
    raw.id = row["id"].get<std::string>();
    if (!row.contains("probs") || !row["probs"].is_array()) {
      throw SchemaError(where + ": missing array field \"probs\"");
    }
    for (const auto& v : row["probs"]) {
      if (!v.is_number()) throw SchemaError(where + ": \"probs\" must contain numbers");
      raw.probs.push_back(v.get<double>());
    }
    if (row.contains("label")) {
      if (!row["label"].is_number_integer()) {
        throw SchemaError(where + ": \"label\" must be an integer");
      }
      raw.label = row["label"].get<int>();
    }
    if (row.contains("votes")) {
      if (!row["votes"].is_array()) throw SchemaError(where + ": \"votes\" must be an array");
      raw.votes.emplace();
      for (const auto& v : row["votes"]) {
        if (!v.is_number_integer()) {
          throw SchemaError(where + ": \"votes\" must contain integers");
        }
        raw.votes->push_back(v.get<int>());
      }
    }
    if (row.contains("soft_label")) {
      if (!row["soft_label"].is_array()) {
        throw SchemaError(where + ": \"soft_label\" must be an array");
      }
      raw.soft.emplace();
      for (const auto& v : row["soft_label"]) {
        if (!v.is_number()) {
          throw SchemaError(where + ": \"soft_label\" must contain numbers");
        }
        raw.soft->push_back(v.get<double>());
      }
    }
    if (row.contains("label_from_votes")) {
      if (!row["label_from_votes"].is_boolean()) {
        throw SchemaError(where + ": \"label_from_votes\" must be a boolean");
      }
      raw.label_from_votes = row["label_from_votes"].get<bool>();
    }
    records.push_back(build_record(std::move(raw), expected_k, options, where));
  }
  return records;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::string trimmed = line;
  if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
  std::stringstream ss(trimmed);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!trimmed.empty() && trimmed.back() == ',') cells.push_back("");
  return cells;
}

double parse_double_cell(const std::string& cell, const std::string& where,
                         const std::string& column) {
  try {
    size_t consumed = 0;
    const double v = std::stod(cell, &consumed);
    if (consumed != cell.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": column " + column + ": '" + cell + "' is not a number");
  }
}

int parse_int_cell(const std::string& cell, const std::string& where,
                   const std::string& column) {
  try {
    size_t consumed = 0;
    const int v = std::stoi(cell, &consumed);
    if (consumed != cell.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": column " + column + ": '" + cell + "' is not an integer");
  }
}

std::vector<PredictionRecord> parse_csv(std::istream& in, const IngestOptions& options,
                                        const std::string& source, int& expected_k) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(source + ": missing CSV header");
  const std::vector<std::string> header = split_csv_line(line);

  size_t pos = 0;
  if (header.empty() || header[0] != "id") {
    throw SchemaError(source + ":1: first column must be 'id'");
  }
  ++pos;
  int k = 0;
  while (pos < header.size() && header[pos] == "prob_" + std::to_string(k)) {
    ++pos;
    ++k;
  }
  if (k < 2) {
    throw SchemaError(source + ":1: need columns prob_0..prob_{K-1} with K >= 2");
  }
  bool has_label = false;
  if (pos < header.size() && header[pos] == "label") {
    has_label = true;
    ++pos;
  }
  int num_votes = 0;
  while (pos < header.size() && header[pos] == "vote_" + std::to_string(num_votes)) {
    ++pos;
    ++num_votes;
  }
  if (pos != header.size()) {
    throw SchemaError(source + ":1: unexpected column '" + header[pos] + "'");
  }

  std::vector<PredictionRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(where + ": expected " + std::to_string(header.size()) +
                       " cells, got " + std::to_string(cells.size()));
    }
    RawRecord raw;
    size_t c = 0;
    raw.id = cells[c++];
    for (int i = 0; i < k; ++i, ++c) {
      raw.probs.push_back(parse_double_cell(cells[c], where, "prob_" + std::to_string(i)));
    }
    if (has_label) {
      if (!cells[c].empty()) raw.label = parse_int_cell(cells[c], where, "label");
      ++c;
    }
    if (num_votes > 0) {
      std::vector<int> votes;
      for (int i = 0; i < num_votes; ++i, ++c) {
        if (!cells[c].empty()) {
          votes.push_back(parse_int_cell(cells[c], where, "vote_" + std::to_string(i)));
        }
      }
      if (!votes.empty()) raw.votes = std::move(votes);
    }
    records.push_back(build_record(std::move(raw), expected_k, options, where));
  }
  return records;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* kind_name(BinningKind kind) {
  switch (kind) {
    case BinningKind::EqualWidth:
      return "equal-width";
    case BinningKind::EqualMass:
      return "equal-mass";
    case BinningKind::Sweep:
      return "sweep";
  }
  return "?";
}

BinningScheme scheme_from_json(const ordered_json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "equal-width") return BinningScheme::equal_width(j.at("num_bins").get<int>());
  if (kind == "equal-mass") return BinningScheme::equal_mass(j.at("num_bins").get<int>());
  if (kind == "sweep") return BinningScheme::sweep();
  throw SchemaError("unknown binning kind '" + kind + "'");
}

ordered_json nullable(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> from_nullable(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ordered_json bin_rows_json(const std::vector<ReportBin>& bins) {
  ordered_json rows = ordered_json::array();
  for (size_t b = 0; b < bins.size(); ++b) {
    const ReportBin& bin = bins[b];
    ordered_json row;
    row["index"] = b;
    row["lo"] = nullable(bin.lo);
    row["hi"] = nullable(bin.hi);
    row["count"] = bin.count;
    row["weight"] = bin.weight;
    row["acc"] = nullable(bin.acc);
    row["conf"] = nullable(bin.conf);
    row["gap"] = nullable(bin.gap);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ordered_json report_json_value(const CalibrationReport& report) {
  ordered_json j;
  j["metric"] = report.metric_name;
  j["value"] = report.value;
  j["n"] = report.n;
  j["norm"] = report.norm;
  j["scheme"]["kind"] = kind_name(report.scheme.kind);
  if (report.scheme.kind != BinningKind::Sweep) {
    j["scheme"]["num_bins"] = report.scheme.num_bins;
  }
  j["num_bins_effective"] = report.num_bins_effective;
  j["bins"] = bin_rows_json(report.per_bin);
  return j;
}

ordered_json classwise_json_value(const ClasswiseReport& report) {
  ordered_json j;
  j["metric"] = "classwise-ece";
  j["mean_value"] = report.mean_value;
  j["n"] = report.n;
  j["norm"] = report.norm;
  j["scheme"]["kind"] = kind_name(report.scheme.kind);
  j["scheme"]["num_bins"] = report.scheme.num_bins;
  j["per_class"] = ordered_json::array();
  for (const ClasswiseEntry& entry : report.per_class) {
    ordered_json row;
    row["class"] = entry.class_index;
    row["present_in_data"] = entry.present_in_data;
    row["value"] = entry.value;
    row["bins"] = bin_rows_json(entry.per_bin);
    j["per_class"].push_back(std::move(row));
  }
  return j;
}

ordered_json multiclass_json_value(const MulticlassGroupReport& report) {
  ordered_json j;
  j["metric"] = "multiclass-grouping";
  j["rounding_decimals"] = report.rounding_decimals;
  j["n"] = report.n;
  j["num_classes"] = report.num_classes;
  j["groups"] = ordered_json::array();
  for (const PredictionGroup& g : report.groups) {
    ordered_json row;
    row["rounded_probs"] = g.rounded_probs;
    row["count"] = g.count;
    row["empirical_freq"] = g.empirical_freq;
    row["l1_gap"] = g.l1_gap;
    row["tvd_gap"] = g.tvd_gap;
    j["groups"].push_back(std::move(row));
  }
  return j;
}

ordered_json human_json_value(const HumanCalibReport& report) {
  ordered_json j;
  j["metric"] = "human-uncertainty";
  j["n"] = report.n;
  j["mean_abs_entce"] = report.mean_abs_entce;
  j["mean_abs_distce"] = report.mean_abs_distce;
  j["rankcs"] = report.rankcs;
  j["per_sample"] = ordered_json::array();
  for (const HumanSampleRow& row : report.per_sample) {
    ordered_json r;
    r["id"] = row.id;
    r["entce"] = row.entce;
    r["distce"] = row.distce;
    r["rank_match"] = row.rank_match;
    r["has_ties"] = row.has_ties;
    j["per_sample"].push_back(std::move(r));
  }
  return j;
}

Dataset ingest(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return ingest_stream(in, options, path);
}

Dataset ingest_stream(std::istream& in, const IngestOptions& options,
                      const std::string& source_name) {
  if (!(options.simplex_tol > 0.0) || options.simplex_tol > 0.01) {
    throw ArgumentError("simplex_tol must lie in (0, 0.01]");
  }
  int expected_k = -1;
  std::vector<PredictionRecord> records =
      options.format == FileFormat::Jsonl
          ? parse_jsonl(in, options, source_name, expected_k)
          : parse_csv(in, options, source_name, expected_k);
  if (records.empty()) {
    throw SchemaError(source_name + ": no records");
  }
  return Dataset::create(std::move(records), expected_k);
}

std::string dataset_to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const PredictionRecord& r : dataset.records()) {
    ordered_json row;
    row["id"] = r.id;
    row["probs"] = r.probs.values();
    if (r.hard_label) row["label"] = r.hard_label->index;
    if (r.hard_label_from_votes) row["label_from_votes"] = true;
    if (r.soft_label) row["soft_label"] = r.soft_label->values();
    out += row.dump();
    out += '\n';
  }
  return out;
}

void emit_dataset(const Dataset& dataset, const std::string& path) {
  write_text_atomic(path, dataset_to_jsonl(dataset));
}

std::string report_to_json(const CalibrationReport& report) {
  return report_json_value(report).dump(2) + "\n";
}

CalibrationReport report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  try {
    CalibrationReport report;
    report.metric_name = j.at("metric").get<std::string>();
    report.value = j.at("value").get<double>();
    report.n = j.at("n").get<std::int64_t>();
    report.norm = j.at("norm").get<int>();
    report.scheme = scheme_from_json(j.at("scheme"));
    report.num_bins_effective = j.at("num_bins_effective").get<int>();
    for (const auto& row : j.at("bins")) {
      ReportBin bin;
      bin.lo = from_nullable(row.at("lo"));
      bin.hi = from_nullable(row.at("hi"));
      bin.count = row.at("count").get<std::int64_t>();
      bin.weight = row.at("weight").get<double>();
      bin.acc = from_nullable(row.at("acc"));
      bin.conf = from_nullable(row.at("conf"));
      bin.gap = from_nullable(row.at("gap"));
      report.per_bin.push_back(std::move(bin));
    }
    return report;
  } catch (const ordered_json::exception& e) {
    throw SchemaError(std::string("report JSON: ") + e.what());
  }
}

std::string report_to_csv(const CalibrationReport& report) {
  std::string out = "bin,lo,hi,count,weight,acc,conf,gap\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (size_t b = 0; b < report.per_bin.size(); ++b) {
    const ReportBin& bin = report.per_bin[b];
    out += std::to_string(b) + ',' + cell(bin.lo) + ',' + cell(bin.hi) + ',' +
           std::to_string(bin.count) + ',' + format_double(bin.weight) + ',' +
           cell(bin.acc) + ',' + cell(bin.conf) + ',' + cell(bin.gap) + '\n';
  }
  return out;
}

void emit_report(const CalibrationReport& report, ReportFormat format,
                 const std::string& path) {
  write_text_atomic(path, format == ReportFormat::Json ? report_to_json(report)
                                                       : report_to_csv(report));
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code rc;
      fs::remove(tmp, rc);
      throw IoError("failed while writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code rc;
    fs::remove(tmp, rc);
    throw IoError("cannot move '" + tmp.string() + "' to '" + target.string() +
                  "': " + ec.message());
  }
}

}  // namespace caleval
