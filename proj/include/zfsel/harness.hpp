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

#pragma once

// Monte Carlo runner: sweeps (K, P) grids over random channels with paired
// per-trial seeds and aggregates selection metrics into CSV rows.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zfsel/channel.hpp"
#include "zfsel/selectors.hpp"

namespace zfsel {

struct SimConfig {
  Index antennas = 0;
  std::vector<Index> users;
  std::vector<double> snr_db;
  std::int64_t trials = 2000;
  std::vector<Algorithm> algorithms;
  double sus_alpha = kDefaultSusAlpha;
  RngSeed master_seed{1};
  std::uint64_t exhaustive_budget = kDefaultExhaustiveBudget;
  unsigned workers = 1;
  /// Every trial reuses this channel instead of drawing one.
  std::optional<ChannelMatrix> fixed_channel;
  /// When false, wall_time_s is written as 0 so output is byte-reproducible.
  bool record_timing = true;
  SelectorOptions options;
};

struct ResultRow {
  std::string algorithm;
  Index antennas = 0;
  Index users = 0;
  double snr_db = 0.0;
  std::int64_t trials = 0;
  double mean_rate = 0.0;
  double mean_set_size = 0.0;
  double ratio_redundant_eliminated = 0.0;
  double ratio_local_escaped = 0.0;
  double mean_swaps_a = 0.0;
  double mean_deletes_b = 0.0;
  std::optional<double> frac_of_exhaustive;
  double wall_time_s = 0.0;
};

/// Throws std::invalid_argument or BudgetExceeded describing the first problem.
void validate(const SimConfig& config);

/// Seed of trial `trial` in grid cell (users, snr_index).
std::uint64_t trial_seed(RngSeed master, Index users, std::size_t snr_index, std::int64_t trial);

/// One row per (K, P, algorithm), in that nesting order. Output does not
/// depend on the worker count.
std::vector<ResultRow> run_simulation(const SimConfig& config);

inline constexpr const char* kCsvHeader =
    "algorithm,M,K,P_db,trials,mean_rate,mean_set_size,ratio_redundant_eliminated,"
    "ratio_local_escaped,mean_swaps_a,mean_deletes_b,frac_of_exhaustive,wall_time_s";

/// Header plus one line per row; reals at 9 significant digits, an empty
/// field for a missing frac_of_exhaustive.
std::string format_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> parse_csv(const std::string& text);

}  // namespace zfsel
