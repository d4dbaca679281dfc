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

// Zero-forcing evaluation: effective channel gains, waterfilling, sum rate
// and precoder construction. All powers here are linear; convert dB inputs
// once with db_to_linear at the boundary.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "zfsel/channel.hpp"
#include "zfsel/linalg.hpp"

namespace zfsel {

class SelectionState;

/// Effective channel gains lambda_i keyed by user, in the order the users
/// were supplied (selection order for gains taken from a SelectionState).
struct GainMap {
  std::vector<Index> users;
  Eigen::VectorXd lambda;

  Index size() const noexcept { return lambda.size(); }
  bool empty() const noexcept { return lambda.size() == 0; }
  double at(Index user) const;
};

struct PowerAllocation {
  double mu = 0.0;                 // water level
  Eigen::VectorXd p;               // received SNR factors, (mu lambda_i - 1)^+
  Eigen::VectorXd transmit_power;  // lambda_i^{-1} p_i
  Eigen::Array<bool, Eigen::Dynamic, 1> active;  // carries power
  Index active_count = 0;
};

/// Beams as columns (M x n), scaled by the square root of each user's power.
struct Precoder {
  CMatrix columns;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// lambda_i = ||h_i P_i^perp||^2 with P_i^perp built from the other users in
/// `users`. Throws SingularityError for dependent rows.
GainMap effective_gains_direct(const ChannelMatrix& channel, std::span<const Index> users);

/// Optimal power split maximizing sum log(1 + p_i) under
/// sum lambda_i^{-1} p_i <= power. Requires power > 0 and nonempty gains.
PowerAllocation waterfill(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power);
inline PowerAllocation waterfill(const GainMap& gains, double power) {
  return waterfill(gains.lambda, power);
}

/// Sum rate in bits/s/Hz under waterfilling; 0 for empty gains.
double sum_rate(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power);
inline double sum_rate(const GainMap& gains, double power) { return sum_rate(gains.lambda, power); }

/// True iff waterfilling over the full set gives every user positive power:
/// n / min(lambda) < power + sum(1 / lambda).
bool all_positive_feasible(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power);

/// Water level (power + sum 1/lambda) / n assuming every user is active.
double all_active_water_level(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power);

/// Sum rate assuming every user is active; only meaningful when
/// all_positive_feasible holds. Bit-identical to sum_rate in that case.
double all_active_rate(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power);

/// Column i = sqrt(mu lambda_i - 1) / lambda_i * nu_i^*, in selection order.
/// Throws InvalidStateError if the state is empty or some user would get
/// zero power.
Precoder build_precoder(const SelectionState& state, double power);

}  // namespace zfsel
