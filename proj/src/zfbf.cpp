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

#include "zfsel/zfbf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "zfsel/ecv_state.hpp"

namespace zfsel {

double GainMap::at(Index user) const {
  for (std::size_t r = 0; r < users.size(); ++r)
    if (users[r] == user) return lambda(static_cast<Index>(r));
  throw InvalidStateError("GainMap: user " + std::to_string(user + 1) + " not present");
}

GainMap effective_gains_direct(const ChannelMatrix& channel, std::span<const Index> users) {
  GainMap out{std::vector<Index>(users.begin(), users.end()),
              Eigen::VectorXd(static_cast<Index>(users.size()))};
  if (static_cast<Index>(users.size()) > channel.antenna_count()) {
    throw SingularityError("effective_gains_direct: more users than antennas");
  }
  // Dependence among the users only shows up in the joint Gram matrix.
  if (users.size() > 1) (void)gram_inverse(select_rows(channel.rows(), users));
  std::vector<Index> others;
  for (std::size_t r = 0; r < users.size(); ++r) {
    others.clear();
    for (std::size_t o = 0; o < users.size(); ++o)
      if (o != r) others.push_back(users[o]);
    const auto h = channel.row(users[r]);
    if (others.empty()) {
      out.lambda(static_cast<Index>(r)) = h.squaredNorm();
      continue;
    }
    const CMatrix proj = projector_complement(select_rows(channel.rows(), others));
    out.lambda(static_cast<Index>(r)) = (h * proj).squaredNorm();
  }
  return out;
}

namespace {

// Indices of `lambda` sorted by decreasing gain, ties by position.
std::vector<Index> descending_order(const Eigen::Ref<const Eigen::VectorXd>& lambda) {
  std::vector<Index> order(static_cast<std::size_t>(lambda.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return lambda(a) > lambda(b); });
  return order;
}

void check_gains(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power) {
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw InvalidStateError("waterfill: total power must be positive and finite");
  }
  for (Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda(i) > 0.0) || !std::isfinite(lambda(i))) {
      throw InvalidStateError("waterfill: gains must be positive and finite");
    }
  }
}

}  // namespace

bool all_positive_feasible(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power) {
  if (lambda.size() == 0) return false;
  const double n = static_cast<double>(lambda.size());
  return n / lambda.minCoeff() < power + lambda.cwiseInverse().sum();
}

double all_active_water_level(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power) {
  return (power + lambda.cwiseInverse().sum()) / static_cast<double>(lambda.size());
}

double all_active_rate(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power) {
  const double mu = all_active_water_level(lambda, power);
  double rate = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) rate += std::log2(mu * lambda(i));
  return rate;
}

PowerAllocation waterfill(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power) {
  if (lambda.size() == 0) throw InvalidStateError("waterfill: empty gain set");
  check_gains(lambda, power);

  const std::vector<Index> order = descending_order(lambda);
  Index active = lambda.size();
  double inv_sum = lambda.cwiseInverse().sum();
  // Drop the weakest user while the remaining set cannot all be active.
  while (active > 1) {
    const double weakest = lambda(order[static_cast<std::size_t>(active - 1)]);
    if (static_cast<double>(active) / weakest < power + inv_sum) break;
    inv_sum -= 1.0 / weakest;
    --active;
  }

  PowerAllocation out;
  out.active_count = active;
  out.mu = (power + inv_sum) / static_cast<double>(active);
  out.p = Eigen::VectorXd::Zero(lambda.size());
  out.active = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(lambda.size(), false);
  for (Index r = 0; r < active; ++r) {
    const Index i = order[static_cast<std::size_t>(r)];
    out.p(i) = out.mu * lambda(i) - 1.0;
    out.active(i) = true;
  }
  out.transmit_power = out.p.cwiseQuotient(lambda);
  return out;
}

double sum_rate(const Eigen::Ref<const Eigen::VectorXd>& lambda, double power) {
  if (lambda.size() == 0) return 0.0;
  const PowerAllocation alloc = waterfill(lambda, power);
  double rate = 0.0;
  for (Index i = 0; i < lambda.size(); ++i)
    if (alloc.active(i)) rate += std::log2(alloc.mu * lambda(i));
  return rate;
}

Precoder build_precoder(const SelectionState& state, double power) {
  if (state.empty()) throw InvalidStateError("build_precoder: empty selection");
  const GainMap gains = state.gains();
  const PowerAllocation alloc = waterfill(gains, power);
  if (alloc.active_count != gains.size()) {
    throw InvalidStateError("build_precoder: some selected user receives zero power");
  }
  Precoder out{CMatrix(state.antenna_count(), gains.size())};
  for (Index r = 0; r < gains.size(); ++r) {
    const double lam = gains.lambda(r);
    const double amplitude = std::sqrt(alloc.mu * lam - 1.0) / lam;
    out.columns.col(r) = amplitude * state.nu(gains.users[static_cast<std::size_t>(r)]).adjoint();
  }
  return out;
}

}  // namespace zfsel
