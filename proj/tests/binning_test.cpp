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

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "caleval/binning.hpp"
#include "test_util.hpp"

using namespace caleval;

TEST_CASE("equal_width_edges spans [0,1] with representable steps") {
  const std::vector<double> edges = equal_width_edges(5);
  REQUIRE(edges.size() == 6);
  CHECK(edges[0] == 0.0);
  CHECK(edges[1] == 0.2);
  CHECK(edges[3] == 0.6);
  CHECK(edges[5] == 1.0);
  CHECK_THROWS_AS(equal_width_edges(0), ArgumentError);
}

TEST_CASE("equal-width assignment: half-open bins, bin 0 closed at 0") {
  const std::vector<double> confs{0.0, 1e-9, 0.1, 0.1000000001, 0.65, 1.0};
  const BinAssignment a = assign_equal_width(confs, 10);
  CHECK(a.bin_of == std::vector<int>{0, 0, 0, 1, 6, 9});
  CHECK(a.num_bins == 10);
}

TEST_CASE("equal-width assignment rejects out-of-range confidences") {
  CHECK_THROWS_AS(assign_equal_width(std::vector<double>{-0.1}, 5), ArgumentError);
  CHECK_THROWS_AS(assign_equal_width(std::vector<double>{1.1}, 5), ArgumentError);
}

TEST_CASE("equal-width assignment matches the interval-scan oracle") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const int m = 1 + static_cast<int>(rng() % 20);
    std::vector<double> confs(50);
    for (double& c : confs) c = testutil::uniform01(rng);
    confs.push_back(0.0);
    confs.push_back(1.0);
    confs.push_back(0.5);
    const BinAssignment a = assign_equal_width(confs, m);
    for (size_t i = 0; i < confs.size(); ++i) {
      CHECK(a.bin_of[i] == testutil::oracle_equal_width_bin(confs[i], m));
    }
  }
}

TEST_CASE("equal-mass assignment balances distinct values") {
  const std::vector<double> confs{0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6};
  const BinAssignment a = assign_equal_mass(confs, 3);
  std::map<int, int> counts;
  for (int b : a.bin_of) counts[b] += 1;
  CHECK(counts == std::map<int, int>{{0, 3}, {1, 3}, {2, 3}});
  CHECK(a.bin_of[1] == 0);  // 0.1 in the lowest bin
  CHECK(a.bin_of[0] == 2);  // 0.9 in the highest bin
}

TEST_CASE("equal-mass assignment keeps ties together") {
  const std::vector<double> all_tied{0.5, 0.5, 0.5};
  const BinAssignment a = assign_equal_mass(all_tied, 3);
  CHECK(a.bin_of == std::vector<int>{0, 0, 0});
  CHECK(a.num_bins == 3);

  // 0.6's run crosses the nominal cut at position 2, so the cut snaps and
  // the bins split 3+1 rather than 2+2.
  const std::vector<double> crossing{0.6, 0.6, 0.6, 0.9};
  const BinAssignment b = assign_equal_mass(crossing, 2);
  CHECK(b.bin_of == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("equal-mass assignment validates M") {
  const std::vector<double> confs{0.1, 0.2};
  CHECK_THROWS_AS(assign_equal_mass(confs, 0), ArgumentError);
  CHECK_THROWS_AS(assign_equal_mass(confs, 3), ArgumentError);
}

TEST_CASE("equal-mass assignment is permutation invariant") {
  std::mt19937_64 rng(12);
  std::vector<double> confs(40);
  for (double& c : confs) c = testutil::uniform01(rng);
  confs[5] = confs[17];  // inject ties
  confs[30] = confs[17];
  const BinAssignment base = assign_equal_mass(confs, 7);
  std::map<double, int> bin_of_value;
  for (size_t i = 0; i < confs.size(); ++i) bin_of_value[confs[i]] = base.bin_of[i];

  std::vector<double> shuffled = confs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const BinAssignment again = assign_equal_mass(shuffled, 7);
  for (size_t i = 0; i < shuffled.size(); ++i) {
    CHECK(again.bin_of[i] == bin_of_value.at(shuffled[i]));
  }
}

TEST_CASE("equal-mass counts differ by at most one on distinct values") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + static_cast<int>(rng() % 60);
    const int m = 1 + static_cast<int>(rng() % n);
    std::vector<double> confs(static_cast<size_t>(n));
    for (double& c : confs) c = testutil::uniform01(rng);  // distinct a.s.
    const BinAssignment a = assign_equal_mass(confs, m);
    std::vector<int> counts(static_cast<size_t>(m), 0);
    for (int b : a.bin_of) counts[static_cast<size_t>(b)] += 1;
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("equal-mass assignment matches the cut-scan oracle") {
  std::mt19937_64 rng(14);
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + static_cast<int>(rng() % 50);
    const int m = 1 + static_cast<int>(rng() % n);
    std::vector<double> confs(static_cast<size_t>(n));
    for (double& c : confs) c = testutil::uniform01(rng);
    if (n > 3 && rng() % 2 == 0) {  // force tie runs half the time
      confs[1] = confs[0];
      confs[3] = confs[2];
    }
    const BinAssignment a = assign_equal_mass(confs, m);
    CHECK(a.bin_of == testutil::oracle_equal_mass_bins(confs, m));
  }
}

TEST_CASE("assign dispatches on scheme kind and rejects sweep") {
  const std::vector<double> confs{0.2, 0.8};
  CHECK(assign(BinningScheme::equal_width(4), confs).num_bins == 4);
  CHECK(assign(BinningScheme::equal_mass(2), confs).num_bins == 2);
  CHECK_THROWS_AS(assign(BinningScheme::sweep(), confs), ArgumentError);
}

TEST_CASE("bin_stats aggregates counts, accuracy, confidence, weight") {
  const std::vector<double> confs{0.55, 0.6, 0.8, 0.9};
  const std::vector<bool> correct{false, true, true, true};
  const BinAssignment a = assign_equal_width(confs, 2);
  const std::vector<BinStats> stats = bin_stats(a, correct, confs);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].count == 0);
  CHECK_FALSE(stats[0].acc.has_value());
  CHECK_FALSE(stats[0].conf.has_value());
  CHECK(stats[0].weight == 0.0);
  CHECK(stats[1].count == 4);
  CHECK(*stats[1].acc == 0.75);
  CHECK(*stats[1].conf == doctest::Approx(0.7125).epsilon(1e-12));
  CHECK(stats[1].weight == 1.0);
}

TEST_CASE("bin_stats means are exact for identical members") {
  const std::vector<double> confs(10, 0.7);
  const std::vector<bool> correct(10, true);
  const BinAssignment a = assign_equal_width(confs, 5);
  const std::vector<BinStats> stats = bin_stats(a, correct, confs);
  CHECK(*stats[3].conf == 0.7);  // exactly, not approximately
}

TEST_CASE("bin_stats validates parallel array lengths") {
  const std::vector<double> confs{0.5, 0.6};
  const BinAssignment a = assign_equal_width(confs, 2);
  CHECK_THROWS_AS(bin_stats(a, std::vector<bool>{true}, confs), DimensionError);
}

TEST_CASE("scheme factories validate and describe themselves") {
  CHECK_THROWS_AS(BinningScheme::equal_width(0), ArgumentError);
  CHECK_THROWS_AS(BinningScheme::equal_mass(-1), ArgumentError);
  CHECK(BinningScheme::equal_width(10).describe() == "equal-width(10)");
  CHECK(BinningScheme::equal_mass(3).describe() == "equal-mass(3)");
  CHECK(BinningScheme::sweep().describe() == "sweep");
}
