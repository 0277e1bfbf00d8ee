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

// Shared helpers for the test binaries: dataset builders, seeded random
// generators, and deliberately naive oracle reimplementations of the binned
// metrics. The oracles avoid the library's binning and summation code paths
// entirely so agreement is meaningful.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "caleval/binning.hpp"
#include "caleval/core.hpp"

namespace testutil {

/// Unique scratch directory, removed (best effort) on destruction.
class TempDir {
 public:
  TempDir() {
    const std::filesystem::path base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::filesystem::path candidate =
          base / ("caleval-test-" + std::to_string(rd()) + "-" + std::to_string(attempt));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = std::move(candidate);
        return;
      }
    }
    throw std::runtime_error("TempDir: could not create a scratch directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("write_file failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file failed: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline caleval::PredictionRecord rec(std::string id, std::vector<double> probs, int label) {
  return caleval::PredictionRecord{std::move(id),
                                   caleval::ProbVector::validated(std::move(probs)),
                                   caleval::HardLabel{label}, std::nullopt, false};
}

inline caleval::PredictionRecord soft_rec(std::string id, std::vector<double> probs,
                                          std::vector<double> soft) {
  return caleval::PredictionRecord{std::move(id),
                                   caleval::ProbVector::validated(std::move(probs)),
                                   std::nullopt,
                                   caleval::ProbVector::validated(std::move(soft)), false};
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Random simplex point via normalized exponentials (flat Dirichlet), an
/// intentionally different construction from the library's generator.
inline std::vector<double> random_simplex(std::mt19937_64& rng, int k) {
  std::vector<double> v(static_cast<size_t>(k));
  double sum = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - uniform01(rng)) + 1e-9;
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

/// n records with random prediction vectors and uniform random hard labels
/// (independent of the predictions; oracle checks need no calibration).
inline caleval::Dataset random_hard_dataset(std::mt19937_64& rng, std::int64_t n, int k) {
  std::vector<caleval::PredictionRecord> records;
  records.reserve(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    records.push_back(rec("r" + std::to_string(i), random_simplex(rng, k), label));
  }
  return caleval::Dataset::create(std::move(records), k);
}

inline caleval::Dataset random_soft_dataset(std::mt19937_64& rng, std::int64_t n, int k) {
  std::vector<caleval::PredictionRecord> records;
  records.reserve(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    records.push_back(soft_rec("r" + std::to_string(i), random_simplex(rng, k),
                               random_simplex(rng, k)));
  }
  return caleval::Dataset::create(std::move(records), k);
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Equal-width bin of c by scanning every interval, first bin closed at 0.
inline int oracle_equal_width_bin(double c, int m) {
  for (int i = 0; i < m; ++i) {
    const double lo = static_cast<double>(i) / m;
    const double hi = i + 1 == m ? 1.0 : static_cast<double>(i + 1) / m;
    if ((i == 0 && c <= hi) || (c > lo && c <= hi)) return i;
  }
  return m - 1;
}

/// Equal-mass cut values at the nominal group boundaries: the first
/// (n mod m) groups take ceil(n/m) values. A sample's bin is the number of
/// cut values strictly below it, recomputed here by linear scan.
inline std::vector<int> oracle_equal_mass_bins(const std::vector<double>& values, int m) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  std::vector<double> cuts;
  std::int64_t pos = 0;
  for (int g = 0; g + 1 < m; ++g) {
    pos += n / m + (g < n % m ? 1 : 0);
    cuts.push_back(sorted[static_cast<size_t>(pos - 1)]);
  }
  std::vector<int> bins(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    int b = 0;
    for (double cut : cuts) {
      if (cut < values[i]) ++b;
    }
    bins[i] = b;
  }
  return bins;
}

struct OracleBin {
  std::int64_t count = 0;
  std::int64_t correct = 0;
  double conf_sum = 0.0;
};

inline double oracle_binned_gap(const std::vector<double>& values,
                                const std::vector<bool>& hits,
                                const std::vector<int>& bins, int num_bins, int norm) {
  std::vector<OracleBin> stats(static_cast<size_t>(num_bins));
  for (size_t i = 0; i < values.size(); ++i) {
    OracleBin& s = stats[static_cast<size_t>(bins[i])];
    s.count += 1;
    s.correct += hits[i] ? 1 : 0;
    s.conf_sum += values[i];
  }
  const double n = static_cast<double>(values.size());
  double total = 0.0;
  for (const OracleBin& s : stats) {
    if (s.count == 0) continue;
    const double acc = static_cast<double>(s.correct) / static_cast<double>(s.count);
    const double conf = s.conf_sum / static_cast<double>(s.count);
    const double w = static_cast<double>(s.count) / n;
    total += norm == 1 ? w * std::abs(acc - conf) : w * (acc - conf) * (acc - conf);
  }
  return norm == 1 ? total : std::sqrt(total);
}

inline std::vector<int> oracle_bins(const std::vector<double>& values,
                                    const caleval::BinningScheme& scheme) {
  if (scheme.kind == caleval::BinningKind::EqualWidth) {
    std::vector<int> bins(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
      bins[i] = oracle_equal_width_bin(values[i], scheme.num_bins);
    }
    return bins;
  }
  return oracle_equal_mass_bins(values, scheme.num_bins);
}

/// Confidence-ECE recomputed from scratch: top confidence by max scan,
/// correctness by first-max argmax, naive sums.
inline double oracle_ece(const caleval::Dataset& dataset,
                         const caleval::BinningScheme& scheme, int norm) {
  std::vector<double> values;
  std::vector<bool> hits;
  for (const caleval::PredictionRecord& r : dataset.records()) {
    double best = r.probs[0];
    int arg = 0;
    for (int k = 1; k < r.probs.size(); ++k) {
      if (r.probs[k] > best) {
        best = r.probs[k];
        arg = k;
      }
    }
    values.push_back(best);
    hits.push_back(arg == r.hard_label->index);
  }
  return oracle_binned_gap(values, hits, oracle_bins(values, scheme), scheme.num_bins,
                           norm);
}

/// Class-wise ECE recomputed from scratch; returns the per-class mean.
inline double oracle_classwise_ece(const caleval::Dataset& dataset,
                                   const caleval::BinningScheme& scheme, int norm) {
  double sum = 0.0;
  for (int k = 0; k < dataset.num_classes(); ++k) {
    std::vector<double> values;
    std::vector<bool> hits;
    for (const caleval::PredictionRecord& r : dataset.records()) {
      values.push_back(r.probs[k]);
      hits.push_back(r.hard_label->index == k);
    }
    sum += oracle_binned_gap(values, hits, oracle_bins(values, scheme), scheme.num_bins,
                             norm);
  }
  return sum / dataset.num_classes();
}

}  // namespace testutil
