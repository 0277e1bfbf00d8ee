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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "caleval/classwise.hpp"
#include "test_util.hpp"

using namespace caleval;

TEST_CASE("classwise_ece bins every sample by its class probability") {
  // Ten identical [0.1, 0.9] predictions, labels split 5/5: class 1 puts
  // all samples at p=0.9 with empirical frequency 0.5, gap 0.4; class 0
  // mirrors it at p=0.1.
  std::vector<PredictionRecord> records;
  for (int i = 0; i < 10; ++i) {
    records.push_back(testutil::rec("r" + std::to_string(i), {0.1, 0.9}, i < 5 ? 0 : 1));
  }
  const Dataset ds = Dataset::create(std::move(records), 2);
  const ClasswiseReport report = classwise_ece(ds, BinningScheme::equal_width(10));
  REQUIRE(report.per_class.size() == 2);
  CHECK(std::abs(report.per_class[0].value - 0.4) <= 1e-12);
  CHECK(std::abs(report.per_class[1].value - 0.4) <= 1e-12);
  CHECK(std::abs(report.mean_value - 0.4) <= 1e-12);
  CHECK(report.per_class[0].present_in_data);
  CHECK(report.per_class[1].present_in_data);
  CHECK(report.n == 10);

  // class 1: all mass in bin (0.8, 0.9]
  const ClasswiseEntry& c1 = report.per_class[1];
  CHECK(c1.per_bin[8].count == 10);
  CHECK(*c1.per_bin[8].acc == 0.5);
  CHECK(*c1.per_bin[8].conf == 0.9);
}

TEST_CASE("classwise_ece marks classes absent from the labels") {
  std::vector<PredictionRecord> records;
  records.push_back(testutil::rec("a", {0.5, 0.3, 0.2}, 0));
  records.push_back(testutil::rec("b", {0.2, 0.6, 0.2}, 1));
  const Dataset ds = Dataset::create(std::move(records), 3);
  const ClasswiseReport report = classwise_ece(ds, BinningScheme::equal_width(5));
  CHECK(report.per_class[0].present_in_data);
  CHECK(report.per_class[1].present_in_data);
  CHECK_FALSE(report.per_class[2].present_in_data);
  // absent class still evaluated: its empirical frequency is 0 everywhere,
  // so its value is the weighted mean of its predicted probabilities
  CHECK(std::abs(report.per_class[2].value - 0.2) <= 1e-12);
}

TEST_CASE("classwise_ece validates inputs") {
  const Dataset ds = Dataset::create({testutil::rec("a", {0.6, 0.4}, 0)}, 2);
  CHECK_THROWS_AS(classwise_ece(ds, BinningScheme::sweep()), ArgumentError);
  CHECK_THROWS_AS(classwise_ece(ds, BinningScheme::equal_width(5), 0), ArgumentError);

  const Dataset soft = Dataset::create(
      {testutil::soft_rec("s", {0.6, 0.4}, {0.5, 0.5})}, 2);
  CHECK_THROWS_AS(classwise_ece(soft, BinningScheme::equal_width(5)), MissingLabelError);
}

TEST_CASE("classwise_ece matches the naive oracle on random data") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 60; ++it) {
    const int n = 2 + static_cast<int>(rng() % 40);
    const int k = 2 + static_cast<int>(rng() % 4);
    const Dataset ds = testutil::random_hard_dataset(rng, n, k);
    const int m_mass = 1 + static_cast<int>(rng() % n);
    for (const int norm : {1, 2}) {
      const BinningScheme ew = BinningScheme::equal_width(1 + static_cast<int>(rng() % 15));
      const BinningScheme em = BinningScheme::equal_mass(m_mass);
      CHECK(std::abs(classwise_ece(ds, ew, norm).mean_value -
                     testutil::oracle_classwise_ece(ds, ew, norm)) <= 1e-12);
      CHECK(std::abs(classwise_ece(ds, em, norm).mean_value -
                     testutil::oracle_classwise_ece(ds, em, norm)) <= 1e-12);
    }
  }
}

TEST_CASE("classwise mean recomputes from per-class values") {
  std::mt19937_64 rng(32);
  const Dataset ds = testutil::random_hard_dataset(rng, 25, 4);
  const ClasswiseReport report = classwise_ece(ds, BinningScheme::equal_width(7), 2);
  double sum = 0.0;
  for (const ClasswiseEntry& entry : report.per_class) sum += entry.value;
  CHECK(std::abs(report.mean_value - sum / 4.0) <= 1e-12);
}

TEST_CASE("multiclass_report groups identical prediction vectors") {
  // One shared vector [0.1,0.2,0.7]; labels 1x class0, 5x class1, 4x class2.
  std::vector<PredictionRecord> records;
  for (int i = 0; i < 10; ++i) {
    const int label = i < 1 ? 0 : i < 6 ? 1 : 2;
    records.push_back(testutil::rec("r" + std::to_string(i), {0.1, 0.2, 0.7}, label));
  }
  const Dataset ds = Dataset::create(std::move(records), 3);
  const MulticlassGroupReport report = multiclass_report(ds, 1);
  REQUIRE(report.groups.size() == 1);
  const PredictionGroup& g = report.groups[0];
  CHECK(g.count == 10);
  CHECK(g.rounded_probs == std::vector<double>{0.1, 0.2, 0.7});
  CHECK(g.empirical_freq == std::vector<double>{0.1, 0.5, 0.4});
  CHECK(std::abs(g.l1_gap - 0.6) <= 1e-12);
  CHECK(std::abs(g.tvd_gap - 0.3) <= 1e-12);
}

TEST_CASE("multiclass_report rounds to the requested decimals") {
  std::vector<PredictionRecord> records;
  records.push_back(testutil::rec("a", {0.123, 0.456, 0.421}, 1));
  records.push_back(testutil::rec("b", {0.110, 0.470, 0.420}, 2));  // same key at d=1
  records.push_back(testutil::rec("c", {0.310, 0.270, 0.420}, 0));  // different key
  const Dataset ds = Dataset::create(std::move(records), 3);

  const MulticlassGroupReport coarse = multiclass_report(ds, 1);
  CHECK(coarse.groups.size() == 2);
  std::int64_t total = 0;
  for (const PredictionGroup& g : coarse.groups) total += g.count;
  CHECK(total == 3);
  // groups are sorted by rounded vector, ascending
  CHECK(coarse.groups[0].rounded_probs[0] == doctest::Approx(0.1));
  CHECK(coarse.groups[1].rounded_probs[0] == doctest::Approx(0.3));

  const MulticlassGroupReport fine = multiclass_report(ds, 3);
  CHECK(fine.groups.size() == 3);
}

TEST_CASE("multiclass_report validates inputs") {
  const Dataset ds = Dataset::create({testutil::rec("a", {0.6, 0.4}, 0)}, 2);
  CHECK_THROWS_AS(multiclass_report(ds, 0), ArgumentError);
  CHECK_THROWS_AS(multiclass_report(ds, 10), ArgumentError);

  const Dataset soft = Dataset::create(
      {testutil::soft_rec("s", {0.6, 0.4}, {0.5, 0.5})}, 2);
  CHECK_THROWS_AS(multiclass_report(soft, 1), MissingLabelError);
}

TEST_CASE("multiclass group frequencies are per-group class shares") {
  std::mt19937_64 rng(33);
  const Dataset ds = testutil::random_hard_dataset(rng, 50, 3);
  const MulticlassGroupReport report = multiclass_report(ds, 1);
  std::int64_t total = 0;
  for (const PredictionGroup& g : report.groups) {
    total += g.count;
    double freq_sum = 0.0;
    for (double f : g.empirical_freq) freq_sum += f;
    CHECK(std::abs(freq_sum - 1.0) <= 1e-12);
    double l1 = 0.0;
    for (size_t k = 0; k < g.empirical_freq.size(); ++k) {
      l1 += std::abs(g.empirical_freq[k] - g.rounded_probs[k]);
    }
    CHECK(std::abs(g.l1_gap - l1) <= 1e-12);
    CHECK(std::abs(g.tvd_gap - 0.5 * l1) <= 1e-12);
  }
  CHECK(total == 50);
}
