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

#include "zfsel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "zfsel/channel.hpp"
#include "zfsel/ecv_state.hpp"
#include "zfsel/zfbf.hpp"

namespace zfsel {

namespace {

// Max relative difference between two gain maps over the same users.
double gain_gap(const GainMap& a, const GainMap& b) {
  if (a.size() != b.size()) return INFINITY;
  double gap = 0.0;
  for (Index r = 0; r < a.size(); ++r) {
    const double other = b.at(a.users[static_cast<std::size_t>(r)]);
    gap = std::max(gap, std::abs(a.lambda(r) - other) / std::abs(other));
  }
  return gap;
}

class Checker {
 public:
  Checker(const VerifyConfig& config, VerifyReport& report) : config_(config), report_(report) {}

  void expect(double value, double& slot, const char* what, std::int64_t seq) {
    slot = std::max(slot, value);
    if (!(value <= config_.tolerance) && report_.failures.size() < 10) {
      report_.failures.push_back("sequence " + std::to_string(seq) + ": " + what + " " +
                                 std::to_string(value));
    }
  }

 private:
  const VerifyConfig& config_;
  VerifyReport& report_;
};

}  // namespace

VerifyReport verify_engine(const VerifyConfig& config) {
  VerifyReport report;
  Checker check(config, report);
  std::mt19937_64 rng(config.seed);
  auto uniform_index = [&](Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(rng);
  };

  for (std::int64_t seq = 0; seq < config.sequences; ++seq) {
    const Index k_users = uniform_index(2, std::max<Index>(2, config.max_users));
    const Index m = uniform_index(1, std::max<Index>(1, config.max_antennas));
    const ChannelMatrix channel = generate_rayleigh(k_users, m, RngSeed{rng()});
    SelectionState state(channel, StateOptions{0});

    for (std::int64_t op = 0; op < config.ops_per_sequence; ++op) {
      std::vector<Index> outside;
      std::vector<Index> addable;
      for (Index u = 0; u < k_users; ++u) {
        if (state.contains(u)) continue;
        outside.push_back(u);
        if (state.is_candidate(u) && state.size() < m) addable.push_back(u);
      }
      enum { kAdd, kDelete, kSwap } kind;
      const int roll = static_cast<int>(uniform_index(0, 2));
      if (state.empty()) {
        kind = kAdd;
      } else if (roll == 0 && !addable.empty()) {
        kind = kAdd;
      } else if (roll == 1 || outside.empty()) {
        kind = kDelete;
      } else {
        kind = kSwap;
      }

      GainMap predicted;
      if (kind == kAdd) {
        const Index w = addable[static_cast<std::size_t>(uniform_index(0, static_cast<Index>(addable.size()) - 1))];
        predicted = state.eval_add(w);
        state.apply_add(w);
      } else if (kind == kDelete) {
        const auto& sel = state.selected();
        const Index w = sel[static_cast<std::size_t>(uniform_index(0, state.size() - 1))];
        if (state.size() >= 2) predicted = state.eval_delete(w);
        state.apply_delete(w);
      } else {
        const auto& sel = state.selected();
        const Index k = sel[static_cast<std::size_t>(uniform_index(0, state.size() - 1))];
        const Index l = outside[static_cast<std::size_t>(uniform_index(0, static_cast<Index>(outside.size()) - 1))];
        try {
          predicted = state.eval_swap(k, l);
          if (state.is_candidate(l)) {
            check.expect(gain_gap(predicted, state.eval_swap_delete_first(k, l)),
                         report.max_swap_route_gap, "swap route gap", seq);
          }
          state.apply_swap(k, l);
        } catch (const CandidateInfeasible&) {
          continue;
        }
      }
      ++report.operations;

      const GainMap incremental = state.gains();
      if (!predicted.empty()) {
        check.expect(gain_gap(predicted, incremental), report.max_eval_apply_gap, "eval/apply gap", seq);
      }
      if (!incremental.empty()) {
        const GainMap direct = effective_gains_direct(channel, state.selected());
        check.expect(gain_gap(incremental, direct), report.max_gain_error, "gain error", seq);
      }
      const InvariantReport inv = state.check_invariants();
      check.expect(std::max({inv.nu_orthogonality, inv.residual_orthogonality, inv.gain_consistency}),
                   report.max_orthogonality, "invariant violation", seq);
    }
    ++report.sequences;
  }
  return report;
}

}  // namespace zfsel
