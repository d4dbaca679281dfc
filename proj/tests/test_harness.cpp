// SPDX-License-Identifier: Apache-2.0
//
// zfsel: user selection for zero-forcing multi-user MIMO downlink
// Copyright (C) 2026 The zfsel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "test_common.hpp"
#include "zfsel/harness.hpp"

using namespace zfsel;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.antennas = 3;
  c.users = {4, 6};
  c.snr_db = {0.0, 15.0};
  c.trials = 40;
  c.algorithms = {Algorithm::zfs, Algorithm::guss, Algorithm::exhaustive};
  c.record_timing = false;
  return c;
}

}  // namespace

TEST(Harness, FixedExampleChannel) {
  SimConfig c;
  c.fixed_channel = fixtures::three_user_channel();
  c.snr_db = {20.0};
  c.trials = 1;
  c.algorithms = {Algorithm::zfs, Algorithm::guss, Algorithm::exhaustive};
  const auto rows = run_simulation(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].algorithm, "zfs");
  EXPECT_EQ(rows[0].antennas, 3);
  EXPECT_EQ(rows[0].users, 3);
  EXPECT_NEAR(rows[1].mean_rate, rows[2].mean_rate, 1e-9);
  EXPECT_GT(rows[2].mean_rate, rows[0].mean_rate + 1.0);
  EXPECT_EQ(rows[1].mean_swaps_a, 1.0);
  EXPECT_EQ(rows[1].ratio_local_escaped, 1.0);
  ASSERT_TRUE(rows[1].frac_of_exhaustive.has_value());
  EXPECT_NEAR(*rows[1].frac_of_exhaustive, 1.0, 1e-12);
}

TEST(Harness, RowOrderAndFields) {
  const auto rows = run_simulation(small_config());
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].users, 4);
  EXPECT_EQ(rows[0].snr_db, 0.0);
  EXPECT_EQ(rows[3].snr_db, 15.0);
  EXPECT_EQ(rows[6].users, 6);
  EXPECT_EQ(rows[5].algorithm, "exhaustive");
  for (const auto& r : rows) {
    EXPECT_EQ(r.trials, 40);
    EXPECT_EQ(r.wall_time_s, 0.0);
    EXPECT_LE(r.mean_set_size, 3.0);
    EXPECT_LE(*r.frac_of_exhaustive, 1.0 + 1e-12);
  }
}

TEST(Harness, NoExhaustiveMeansNoFraction) {
  SimConfig c = small_config();
  c.algorithms = {Algorithm::zfs};
  for (const auto& r : run_simulation(c)) EXPECT_FALSE(r.frac_of_exhaustive.has_value());
}

TEST(Harness, DeterministicAcrossRunsAndWorkers) {
  SimConfig c = small_config();
  const std::string first = format_csv(run_simulation(c));
  EXPECT_EQ(first, format_csv(run_simulation(c)));
  c.workers = 4;
  EXPECT_EQ(first, format_csv(run_simulation(c)));
}

TEST(Harness, PairedTrialsAcrossAlgorithms) {
  // Every algorithm sees the same channel per trial, so the exhaustive
  // mean bounds all others cell by cell.
  const auto rows = run_simulation(small_config());
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    EXPECT_LE(rows[i].mean_rate, rows[i + 2].mean_rate + 1e-9);
    EXPECT_LE(rows[i + 1].mean_rate, rows[i + 2].mean_rate + 1e-9);
    EXPECT_LE(rows[i].mean_rate, rows[i + 1].mean_rate + 1e-9);
  }
}

TEST(Harness, TrialSeedsDistinct) {
  EXPECT_NE(trial_seed(RngSeed{1}, 4, 0, 0), trial_seed(RngSeed{1}, 4, 0, 1));
  EXPECT_NE(trial_seed(RngSeed{1}, 4, 0, 0), trial_seed(RngSeed{1}, 6, 0, 0));
  EXPECT_NE(trial_seed(RngSeed{1}, 4, 0, 0), trial_seed(RngSeed{1}, 4, 1, 0));
}

TEST(Harness, FractionOfExhaustiveSmallScale) {
  SimConfig c;
  c.antennas = 4;
  c.users = {8};
  c.snr_db = {10.0};
  c.trials = 2000;
  c.algorithms = {Algorithm::guss, Algorithm::exhaustive};
  c.record_timing = false;
  const auto rows = run_simulation(c);
  EXPECT_GE(*rows[0].frac_of_exhaustive, 0.99);
}

TEST(Harness, Validation) {
  SimConfig c = small_config();
  c.trials = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.algorithms.clear();
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.sus_alpha = 1.5;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.antennas = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.users = {30};
  c.antennas = 20;
  EXPECT_THROW(validate(c), BudgetExceeded);
  c = small_config();
  c.fixed_channel = fixtures::three_user_channel();
  c.users = {5};
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(Csv, HeaderOnlyForNoRows) {
  EXPECT_EQ(format_csv({}), std::string(kCsvHeader) + "\n");
  EXPECT_TRUE(parse_csv(format_csv({})).empty());
}

TEST(Csv, OneRowTwoLines) {
  ResultRow r;
  r.algorithm = "guss";
  r.antennas = 10;
  r.users = 15;
  r.snr_db = 15.0;
  r.trials = 3;
  r.mean_rate = 36.358126712345;
  const std::string text = format_csv({r});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find("guss,10,15,15,3,36.3581267,"), std::string::npos);
  EXPECT_NE(text.find(",,0\n"), std::string::npos);
}

TEST(Csv, RoundTripAtNineDigits) {
  const auto rows = run_simulation(small_config());
  const auto back = parse_csv(format_csv(rows));
  ASSERT_EQ(back.size(), rows.size());
  const auto close = [](double a, double b) { return std::abs(a - b) <= 5e-9 * std::max(1.0, std::abs(b)); };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].algorithm, rows[i].algorithm);
    EXPECT_EQ(back[i].users, rows[i].users);
    EXPECT_TRUE(close(back[i].mean_rate, rows[i].mean_rate));
    EXPECT_TRUE(close(back[i].mean_set_size, rows[i].mean_set_size));
    EXPECT_TRUE(close(back[i].mean_swaps_a, rows[i].mean_swaps_a));
    EXPECT_TRUE(close(*back[i].frac_of_exhaustive, *rows[i].frac_of_exhaustive));
  }
  EXPECT_EQ(format_csv(back), format_csv(rows));
}

TEST(Csv, WriteAndParseFile) {
  const std::string path = ::testing::TempDir() + "zfsel_rows.csv";
  const auto rows = run_simulation(small_config());
  write_csv(rows, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), format_csv(rows));
  std::remove(path.c_str());
  EXPECT_THROW(parse_csv("nope\n"), ParseError);
  EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nzfs,1,2\n"), ParseError);
}
