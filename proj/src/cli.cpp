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

#include "caleval/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "caleval/classwise.hpp"
#include "caleval/confidence.hpp"
#include "caleval/core.hpp"
#include "caleval/human.hpp"
#include "caleval/io.hpp"
#include "caleval/svg.hpp"
#include "caleval/synth.hpp"

namespace caleval {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIngest = 3;
constexpr int kExitPrecondition = 4;

bool color_enabled() { return std::getenv("CALIB_NO_COLOR") == nullptr; }

std::string bold(const std::string& s) {
  return color_enabled() ? "\x1b[1m" + s + "\x1b[0m" : s;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct EvalFlags {
  std::string input;
  std::string output;
  std::string input_format = "jsonl";
  std::string report_format = "json";
  int bins = 10;
  std::string scheme = "equal-width";
  std::string norm = "l1";
  std::vector<std::string> metrics{"ece"};
  int rounding_decimals = 1;
  bool derive_votes = false;
  double simplex_tol = 1e-6;
};

struct DiagramFlags {
  std::string input;
  std::string output;
  std::string report_path;
  std::string input_format = "jsonl";
  int bins = 10;
  std::string scheme = "equal-width";
  bool derive_votes = false;
  double simplex_tol = 1e-6;
};

struct SynthMajorityFlags {
  std::vector<std::int64_t> counts;
  double confidence = 0.0;
  bool strict = false;
  std::string output;
};

struct SynthWorldFlags {
  std::int64_t n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double temperature = 1.0;
  std::string output;
};

struct InspectFlags {
  std::string input;
  std::string input_format = "jsonl";
  bool derive_votes = false;
  double simplex_tol = 1e-6;
};

IngestOptions ingest_options(const std::string& format, bool derive, double tol) {
  IngestOptions options;
  options.format = format == "csv" ? FileFormat::Csv : FileFormat::Jsonl;
  options.derive_hard_from_votes = derive;
  options.simplex_tol = tol;
  return options;
}

BinningScheme scheme_of(const std::string& name, int bins) {
  if (name == "equal-mass") return BinningScheme::equal_mass(bins);
  if (name == "sweep") return BinningScheme::sweep();
  return BinningScheme::equal_width(bins);
}

/// The metric set in canonical report order, with "all" expanded.
std::vector<std::string> expand_metrics(const std::vector<std::string>& requested) {
  static const std::vector<std::string> canon{"ece",   "classwise-ece", "multiclass",
                                             "entce", "rankcs",        "distce"};
  const std::set<std::string> set(requested.begin(), requested.end());
  if (set.count("all")) return canon;
  std::vector<std::string> out;
  for (const std::string& m : canon) {
    if (set.count(m)) out.push_back(m);
  }
  return out;
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

int write_or_fail(const std::string& path, const std::string& content, std::ostream& err) {
  try {
    write_text_atomic(path, content);
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_evaluate(const EvalFlags& flags, bool bins_given, std::ostream& out,
                 std::ostream& err) {
  const bool sweep = flags.scheme == "sweep";
  const std::vector<std::string> wanted = expand_metrics(flags.metrics);
  if (sweep && bins_given) {
    err << "warning: --bins is ignored with --scheme sweep\n";
  }
  if (sweep &&
      std::find(wanted.begin(), wanted.end(), "classwise-ece") != wanted.end()) {
    err << "error: classwise-ece needs a fixed binning; combine it with "
           "--scheme equal-width or equal-mass\n";
    return kExitUsage;
  }
  const int norm = flags.norm == "l2" ? 2 : 1;

  Dataset dataset = [&] {
    try {
      return ingest(flags.input,
                    ingest_options(flags.input_format, flags.derive_votes, flags.simplex_tol));
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      throw kExitIngest;
    }
  }();

  ordered_json doc;
  doc["n"] = dataset.size();
  doc["num_classes"] = dataset.num_classes();
  doc["metrics"] = ordered_json::object();
  std::vector<std::string> summaries;
  const std::string n_tag = "n=" + std::to_string(dataset.size());

  try {
    const bool want_human = std::find(wanted.begin(), wanted.end(), "entce") != wanted.end() ||
                            std::find(wanted.begin(), wanted.end(), "rankcs") != wanted.end() ||
                            std::find(wanted.begin(), wanted.end(), "distce") != wanted.end();
    for (const std::string& metric : wanted) {
      if (metric == "ece") {
        const CalibrationReport report =
            sweep ? ece_sweep(dataset, norm)
                  : ece(dataset, scheme_of(flags.scheme, flags.bins), norm);
        doc["metrics"]["ece"] = report_json_value(report);
        std::string tag = report.scheme.describe();
        if (sweep) tag += "(b=" + std::to_string(report.num_bins_effective) + ")";
        summaries.push_back(bold(report.metric_name) + " = " + num(report.value) + "  [" +
                            tag + ", norm=" + flags.norm + ", " + n_tag + "]");
      } else if (metric == "classwise-ece") {
        const ClasswiseReport report =
            classwise_ece(dataset, scheme_of(flags.scheme, flags.bins), norm);
        doc["metrics"]["classwise_ece"] = classwise_json_value(report);
        summaries.push_back(bold("classwise-ece") + " = " + num(report.mean_value) + "  [" +
                            report.scheme.describe() + ", norm=" + flags.norm + ", K=" +
                            std::to_string(dataset.num_classes()) + ", " + n_tag + "]");
      } else if (metric == "multiclass") {
        const MulticlassGroupReport report =
            multiclass_report(dataset, flags.rounding_decimals);
        doc["metrics"]["multiclass"] = multiclass_json_value(report);
        double worst = 0.0;
        for (const PredictionGroup& g : report.groups) worst = std::max(worst, g.l1_gap);
        summaries.push_back(bold("multiclass") + " max-l1-gap = " + num(worst) + "  [d=" +
                            std::to_string(report.rounding_decimals) + ", groups=" +
                            std::to_string(report.groups.size()) + ", " + n_tag + "]");
      }
    }
    if (want_human) {
      const HumanCalibReport report = human_report(dataset);
      doc["metrics"]["human"] = human_json_value(report);
      for (const std::string& metric : wanted) {
        if (metric == "entce") {
          summaries.push_back(bold("mean_abs_entce") + " = " + num(report.mean_abs_entce) +
                              "  [" + n_tag + "]");
        } else if (metric == "rankcs") {
          summaries.push_back(bold("rankcs") + " = " + num(report.rankcs) + "  [" + n_tag +
                              "]");
        } else if (metric == "distce") {
          summaries.push_back(bold("mean_abs_distce") + " = " + num(report.mean_abs_distce) +
                              "  [" + n_tag + "]");
        }
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }

  if (!flags.output.empty()) {
    const int rc = write_or_fail(flags.output, doc.dump(2) + "\n", err);
    if (rc != kExitOk) return rc;
  }
  for (const std::string& s : summaries) out << s << "\n";
  return kExitOk;
}

int run_diagram(const DiagramFlags& flags, bool bins_given, std::ostream& out,
                std::ostream& err) {
  const bool sweep = flags.scheme == "sweep";
  if (sweep && bins_given) {
    err << "warning: --bins is ignored with --scheme sweep\n";
  }
  Dataset dataset = [&] {
    try {
      return ingest(flags.input,
                    ingest_options(flags.input_format, flags.derive_votes, flags.simplex_tol));
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      throw kExitIngest;
    }
  }();

  CalibrationReport report;
  try {
    report = sweep ? ece_sweep(dataset, 1)
                   : reliability_data(dataset, scheme_of(flags.scheme, flags.bins));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }

  int rc = write_or_fail(flags.output, reliability_svg(report), err);
  if (rc != kExitOk) return rc;
  if (!flags.report_path.empty()) {
    rc = write_or_fail(flags.report_path, report_to_json(report), err);
    if (rc != kExitOk) return rc;
  }
  out << bold("reliability") << " = " << num(report.value) << "  ["
      << report.scheme.describe() << ", n=" << report.n << "]\n";
  return kExitOk;
}

int run_synth_majority(const SynthMajorityFlags& flags, std::ostream& out,
                       std::ostream& err) {
  Dataset dataset = [&] {
    try {
      return gen_majority_pathology(
          MajorityPathologySpec{flags.counts, flags.confidence, flags.strict});
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      throw kExitUsage;
    }
  }();

  int rc = write_or_fail(flags.output, dataset_to_jsonl(dataset), err);
  if (rc != kExitOk) return rc;

  ordered_json meta;
  meta["spec"]["kind"] = "majority";
  meta["spec"]["class_counts"] = flags.counts;
  meta["spec"]["confidence"] = flags.confidence;
  meta["spec"]["strict"] = flags.strict;
  meta["generated_at"] = timestamp_utc();
  rc = write_or_fail(flags.output + ".meta.json", meta.dump(2) + "\n", err);
  if (rc != kExitOk) return rc;

  out << bold("synth majority") << ": n=" << dataset.size()
      << ", K=" << dataset.num_classes() << " -> " << flags.output << "\n";
  return kExitOk;
}

int run_synth_world(const SynthWorldFlags& flags, bool temperature_given, std::ostream& out,
                    std::ostream& err) {
  Dataset dataset = [&] {
    try {
      Dataset world = gen_calibrated_world(CalibratedWorldSpec{flags.n, flags.k, flags.seed});
      if (temperature_given) world = distort_temperature(world, flags.temperature);
      return world;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      throw kExitUsage;
    }
  }();

  int rc = write_or_fail(flags.output, dataset_to_jsonl(dataset), err);
  if (rc != kExitOk) return rc;

  ordered_json meta;
  meta["spec"]["kind"] = "world";
  meta["spec"]["n"] = flags.n;
  meta["spec"]["k"] = flags.k;
  meta["spec"]["seed"] = flags.seed;
  if (temperature_given) meta["spec"]["temperature"] = flags.temperature;
  meta["generated_at"] = timestamp_utc();
  rc = write_or_fail(flags.output + ".meta.json", meta.dump(2) + "\n", err);
  if (rc != kExitOk) return rc;

  out << bold("synth world") << ": n=" << dataset.size() << ", K=" << dataset.num_classes()
      << ", seed=" << flags.seed << " -> " << flags.output << "\n";
  return kExitOk;
}

int run_inspect(const InspectFlags& flags, std::ostream& out, std::ostream& err) {
  Dataset dataset = [&] {
    try {
      return ingest(flags.input,
                    ingest_options(flags.input_format, flags.derive_votes, flags.simplex_tol));
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      throw kExitIngest;
    }
  }();

  std::int64_t hard = 0;
  std::int64_t soft = 0;
  for (const PredictionRecord& r : dataset.records()) {
    if (r.hard_label) ++hard;
    if (r.soft_label) ++soft;
  }
  out << "n = " << dataset.size() << "\n";
  out << "K = " << dataset.num_classes() << "\n";
  out << "hard labels = " << hard << "/" << dataset.size() << "\n";
  out << "soft labels = " << soft << "/" << dataset.size() << "\n";

  const std::vector<double> confs = top_confidences(dataset);
  const BinAssignment cells = assign_equal_width(confs, 10);
  std::vector<std::int64_t> counts(10, 0);
  for (int cell : cells.bin_of) ++counts[static_cast<size_t>(cell)];
  const std::int64_t peak = *std::max_element(counts.begin(), counts.end());
  out << "confidence histogram (10 equal-width cells):\n";
  const std::vector<double> edges = equal_width_edges(10);
  for (int c = 0; c < 10; ++c) {
    char label[32];
    std::snprintf(label, sizeof(label), "%c%.1f,%.1f]", c == 0 ? '[' : '(',
                  edges[static_cast<size_t>(c)], edges[static_cast<size_t>(c) + 1]);
    const int width =
        peak > 0 ? static_cast<int>((40 * counts[static_cast<size_t>(c)] + peak - 1) / peak)
                 : 0;
    out << "  " << label << "  " << counts[static_cast<size_t>(c)];
    if (width > 0) out << "  " << std::string(static_cast<size_t>(width), '#');
    out << "\n";
  }

  if (soft > 0) {
    std::vector<double> entropies;
    entropies.reserve(static_cast<size_t>(soft));
    for (const PredictionRecord& r : dataset.records()) {
      if (r.soft_label) entropies.push_back(entropy(*r.soft_label));
    }
    out << "mean soft-label entropy = "
        << num(compensated_sum(entropies) / static_cast<double>(soft)) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"calibration evaluation for probabilistic classifiers"};
  app.name("caleval");
  app.require_subcommand(1);

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Compute calibration metrics");
  eval_cmd->add_option("input", eval.input, "Prediction file (JSONL or CSV)")->required();
  eval_cmd->add_option("-o,--output", eval.output, "Write the combined JSON report here");
  eval_cmd->add_option("--format", eval.input_format, "Input format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  CLI::Option* eval_bins = eval_cmd->add_option("--bins", eval.bins, "Bin count M")
                               ->check(CLI::Range(1, 1000000));
  eval_cmd->add_option("--scheme", eval.scheme, "Binning scheme")
      ->check(CLI::IsMember({"equal-width", "equal-mass", "sweep"}));
  eval_cmd->add_option("--norm", eval.norm, "Gap norm")->check(CLI::IsMember({"l1", "l2"}));
  eval_cmd->add_option("--metrics", eval.metrics, "Metrics to compute (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"ece", "classwise-ece", "multiclass", "entce", "rankcs",
                             "distce", "all"}));
  eval_cmd
      ->add_option("--rounding-decimals", eval.rounding_decimals,
                   "Multiclass grouping precision")
      ->check(CLI::Range(1, 9));
  eval_cmd->add_flag("--derive-hard-from-votes", eval.derive_votes,
                     "Fill missing hard labels by majority vote");
  eval_cmd->add_option("--simplex-tol", eval.simplex_tol, "Simplex validation tolerance")
      ->check(CLI::Range(1e-300, 0.01));

  DiagramFlags diagram;
  CLI::App* diagram_cmd = app.add_subcommand("diagram", "Render a reliability diagram");
  diagram_cmd->add_option("input", diagram.input, "Prediction file")->required();
  diagram_cmd->add_option("-o,--output", diagram.output, "SVG output path")->required();
  diagram_cmd->add_option("--report", diagram.report_path,
                          "Also write the reliability data as JSON here");
  diagram_cmd->add_option("--format", diagram.input_format, "Input format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  CLI::Option* diagram_bins = diagram_cmd->add_option("--bins", diagram.bins, "Bin count M")
                                  ->check(CLI::Range(1, 1000000));
  diagram_cmd->add_option("--scheme", diagram.scheme, "Binning scheme")
      ->check(CLI::IsMember({"equal-width", "equal-mass", "sweep"}));
  diagram_cmd->add_flag("--derive-hard-from-votes", diagram.derive_votes,
                        "Fill missing hard labels by majority vote");
  diagram_cmd->add_option("--simplex-tol", diagram.simplex_tol,
                          "Simplex validation tolerance")
      ->check(CLI::Range(1e-300, 0.01));

  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate synthetic datasets");
  synth_cmd->require_subcommand(1);

  SynthMajorityFlags majority;
  CLI::App* majority_cmd =
      synth_cmd->add_subcommand("majority", "Majority-class pathology dataset");
  majority_cmd->add_option("--counts", majority.counts, "Per-class label counts")
      ->delimiter(',')
      ->required();
  majority_cmd->add_option("--confidence", majority.confidence, "Predicted top probability")
      ->required();
  majority_cmd->add_flag("--strict", majority.strict,
                         "Require confidence == majority prevalence");
  majority_cmd->add_option("-o,--output", majority.output, "JSONL output path")->required();

  SynthWorldFlags world;
  CLI::App* world_cmd = synth_cmd->add_subcommand("world", "Calibrated-by-construction world");
  world_cmd->add_option("--n", world.n, "Number of records")->required();
  world_cmd->add_option("--k", world.k, "Number of classes")->required();
  world_cmd->add_option("--seed", world.seed, "Generator seed");
  CLI::Option* world_temp = world_cmd->add_option(
      "--temperature", world.temperature, "Distort predictions by temperature T");
  world_cmd->add_option("-o,--output", world.output, "JSONL output path")->required();

  InspectFlags inspect;
  CLI::App* inspect_cmd = app.add_subcommand("inspect", "Summarize a prediction file");
  inspect_cmd->add_option("input", inspect.input, "Prediction file")->required();
  inspect_cmd->add_option("--format", inspect.input_format, "Input format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  inspect_cmd->add_flag("--derive-hard-from-votes", inspect.derive_votes,
                        "Fill missing hard labels by majority vote");
  inspect_cmd->add_option("--simplex-tol", inspect.simplex_tol,
                          "Simplex validation tolerance")
      ->check(CLI::Range(1e-300, 0.01));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::Error& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval_cmd) return run_evaluate(eval, eval_bins->count() > 0, out, err);
    if (*diagram_cmd) return run_diagram(diagram, diagram_bins->count() > 0, out, err);
    if (*majority_cmd) return run_synth_majority(majority, out, err);
    if (*world_cmd) return run_synth_world(world, world_temp->count() > 0, out, err);
    if (*inspect_cmd) return run_inspect(inspect, out, err);
  } catch (int code) {
    return code;
  }
  return kExitUsage;
}

}  // namespace caleval
