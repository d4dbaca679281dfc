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

// Randomized cross-check of the incremental ECV engine against the direct
// projector formulas.

#include <cstdint>
#include <string>
#include <vector>

#include "zfsel/linalg.hpp"

namespace zfsel {

struct VerifyConfig {
  std::int64_t sequences = 1000;
  Index max_users = 12;
  Index max_antennas = 8;
  double tolerance = 1e-9;
  std::int64_t ops_per_sequence = 20;
  std::uint64_t seed = 20240901;
};

struct VerifyReport {
  std::int64_t sequences = 0;
  std::int64_t operations = 0;
  double max_gain_error = 0.0;        // incremental vs direct, relative
  double max_eval_apply_gap = 0.0;    // eval_* prediction vs state after apply_*, relative
  double max_swap_route_gap = 0.0;    // add-first vs delete-first swap, relative
  double max_orthogonality = 0.0;     // worst InvariantReport entry
  std::vector<std::string> failures;  // first few offending cases

  bool passed() const noexcept { return failures.empty(); }
};

/// Runs `sequences` random add/delete/swap sequences with automatic rebuilds
/// disabled and checks every step at `tolerance`.
VerifyReport verify_engine(const VerifyConfig& config);

}  // namespace zfsel
