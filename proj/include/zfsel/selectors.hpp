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

// User-selection algorithms over a fixed channel realization.
//
// All entry points take the total transmit SNR as a linear power ratio.
// User indices are 0-based in this API; serializers convert to 1-based.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zfsel/channel.hpp"
#include "zfsel/ecv_state.hpp"
#include "zfsel/zfbf.hpp"

namespace zfsel {

enum class Operation { add, remove, swap };

std::string_view to_string(Operation op);

struct TraceStep {
  Operation op = Operation::add;
  std::vector<Index> users;  // add/remove: {user}; swap: {outgoing, incoming}
  double delta_rate = 0.0;
  double rate_after = 0.0;
};

struct SelectionTrace {
  std::vector<TraceStep> steps;
  std::vector<Index> final_set;  // ascending user order
  double final_rate = 0.0;
  std::int64_t swap_count = 0;    // accepted swaps (a)
  std::int64_t delete_count = 0;  // accepted deletes (b)
  // Swap-step invocations, the final unsuccessful one included; equals
  // swap_count + 1 for a GUSS run. Not serialized.
  std::int64_t swap_search_count = 0;
  bool redundant_user_eliminated = false;
  bool local_optimum_escaped = false;
  bool zero_power_delete_seen = false;
};

struct AlgoResult {
  SelectionTrace trace;
  std::optional<Precoder> precoder;  // absent for an empty set or any zero-power user
  GainMap gains;                     // selection order, matching precoder columns
};

struct SelectorOptions {
  /// Skip candidates whose full set would leave some user without power,
  /// and score the rest with the closed-form water level.
  bool prune = true;
  /// Exclude the most recently added or deleted user from swap candidacy.
  bool swap_exclusion = true;
  /// A move is accepted only when it raises the rate by more than this (bits/s/Hz).
  double min_improvement = 1e-12;
  StateOptions state;
};

inline constexpr double kDefaultSusAlpha = 0.44;
inline constexpr std::uint64_t kDefaultExhaustiveBudget = std::uint64_t{1} << 21;

/// Greedy add-only selection; the first pick maximizes ||h||^2.
AlgoResult zfs(const ChannelMatrix& channel, double power, const SelectorOptions& options = {});

/// zfs followed by removal of zero-power users, one at a time.
AlgoResult swf(const ChannelMatrix& channel, double power, const SelectorOptions& options = {});

/// Semi-orthogonal selection with threshold alpha in (0, 1]; independent of power.
AlgoResult sus(const ChannelMatrix& channel, double power, double alpha = kDefaultSusAlpha,
               const SelectorOptions& options = {});

/// Alternating greedy add and delete phases, no swaps.
AlgoResult gus_ns(const ChannelMatrix& channel, double power, const SelectorOptions& options = {});

/// Greedy add, delete and one-for-one swap.
AlgoResult guss(const ChannelMatrix& channel, double power, const SelectorOptions& options = {});

/// Number of nonempty subsets with at most min(M, K) users, saturating.
std::uint64_t exhaustive_subset_count(Index users, Index antennas);

/// Best subset by full enumeration. Ties go to the smaller set, then the
/// lexicographically smaller one. Throws BudgetExceeded when the subset
/// count exceeds `budget`.
AlgoResult exhaustive(const ChannelMatrix& channel, double power,
                      std::uint64_t budget = kDefaultExhaustiveBudget);

/// Sum rate of an arbitrary user set from direct gains; 0 for the empty set.
double set_rate(const ChannelMatrix& channel, std::span<const Index> users, double power);

struct DeleteComparison {
  double base_rate = 0.0;
  Index best_delete = -1;
  double best_delete_rate = 0.0;
  std::vector<double> delete_rates;      // R(S \ {j}) for j in the given order
  std::vector<Index> zero_power_users;   // users with p_i = 0 under waterfilling on S
  Index min_power_user = -1;             // smallest received SNR factor, ties by order
  double min_power_delete_rate = 0.0;
};

/// Compares the best single deletion against deleting zero- or minimum-power
/// users. Requires |users| >= 2.
DeleteComparison best_delete_vs_zero_power(const ChannelMatrix& channel, double power,
                                           std::span<const Index> users);

struct NeighborhoodBest {
  double rate = 0.0;
  std::vector<Index> set;
  Operation op = Operation::add;
};

/// Best set one add, delete or one-for-one swap away from `users`, by direct
/// enumeration. `rate` is 0 with an empty `set` when no neighbour exists.
NeighborhoodBest best_neighbor(const ChannelMatrix& channel, std::span<const Index> users,
                               double power);

enum class Algorithm { zfs, swf, sus, gus_ns, guss, exhaustive };

std::string_view to_string(Algorithm algorithm);
/// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct AlgorithmParams {
  SelectorOptions options;
  double sus_alpha = kDefaultSusAlpha;
  std::uint64_t exhaustive_budget = kDefaultExhaustiveBudget;
};

AlgoResult run_algorithm(Algorithm algorithm, const ChannelMatrix& channel, double power,
                         const AlgorithmParams& params = {});

}  // namespace zfsel
