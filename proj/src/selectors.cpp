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

#include "zfsel/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zfsel {

std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::add: return "add";
    case Operation::remove: return "delete";
    case Operation::swap: return "swap";
  }
  return "?";
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::zfs: return "zfs";
    case Algorithm::swf: return "swf";
    case Algorithm::sus: return "sus";
    case Algorithm::gus_ns: return "gus_ns";
    case Algorithm::guss: return "guss";
    case Algorithm::exhaustive: return "exhaustive";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::zfs, Algorithm::swf, Algorithm::sus, Algorithm::gus_ns,
                      Algorithm::guss, Algorithm::exhaustive}) {
    if (name == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

namespace {

constexpr double kNoRate = -std::numeric_limits<double>::infinity();
// Candidates closer than this to the incumbent best do not displace it, so
// exact ties resolve to the lowest index.
constexpr double kTieTolerance = 1e-12;

std::vector<Index> sorted_copy(std::vector<Index> users) {
  std::sort(users.begin(), users.end());
  return users;
}

// Shared machinery for the greedy selectors: candidate scoring, move
// acceptance and trace bookkeeping over one SelectionState.
class GreedySearch {
 public:
  GreedySearch(const ChannelMatrix& channel, double power, const SelectorOptions& options)
      : power_(power),
        options_(options),
        state_(channel, options.state),
        op_cap_(10 * channel.user_count() * channel.antenna_count()) {
    if (!(power > 0.0)) throw InvalidStateError("selector: power must be positive");
  }

  SelectionState& state() { return state_; }
  double rate() const { return rate_; }

  double score(const GainMap& gains) const {
    if (gains.empty()) return 0.0;
    if (options_.prune) {
      return all_positive_feasible(gains.lambda, power_) ? all_active_rate(gains.lambda, power_)
                                                         : kNoRate;
    }
    return sum_rate(gains, power_);
  }

  bool try_add() {
    if (state_.size() >= state_.antenna_count()) return false;
    Index best = -1;
    double best_rate = kNoRate;
    for (Index w = 0; w < state_.user_count(); ++w) {
      if (!state_.is_candidate(w)) continue;
      const double r = score(state_.eval_add(w));
      if (r > best_rate + kTieTolerance || (best < 0 && r > kNoRate)) {
        best = w;
        best_rate = r;
      }
    }
    if (best < 0 || !(best_rate - rate_ > options_.min_improvement)) return false;
    state_.apply_add(best);
    record(Operation::add, {best});
    last_touched_ = best;
    return true;
  }

  bool try_delete() {
    if (state_.size() <= 1) return false;
    const std::vector<Index> order = sorted_copy(state_.selected());
    Index best = -1;
    double best_rate = kNoRate;
    for (Index w : order) {
      const double r = score(state_.eval_delete(w));
      if (r > best_rate + kTieTolerance || (best < 0 && r > kNoRate)) {
        best = w;
        best_rate = r;
      }
    }
    if (best < 0 || !(best_rate - rate_ > options_.min_improvement)) return false;
    remove(best);
    last_touched_ = best;
    return true;
  }

  bool try_swap() {
    if (state_.empty()) return false;
    const Index n = state_.size();
    const std::vector<Index>& sel = state_.selected();
    Index best_k = -1;
    Index best_l = -1;
    double best_rate = kNoRate;
    // Score every pair, then pick in lexicographic (k, l) order for ties.
    std::vector<std::vector<double>> rates(
        static_cast<std::size_t>(state_.user_count()),
        std::vector<double>(static_cast<std::size_t>(state_.user_count()), kNoRate));
    for (Index l = 0; l < state_.user_count(); ++l) {
      if (state_.contains(l)) continue;
      if (options_.swap_exclusion && l == last_touched_) continue;
      if (state_.is_candidate(l)) {
        const std::vector<GainMap> all = state_.eval_swaps_with(l);
        for (Index r = 0; r < n; ++r) {
          const Index k = sel[static_cast<std::size_t>(r)];
          if (options_.swap_exclusion && k == last_touched_) continue;
          rates[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
              score(all[static_cast<std::size_t>(r)]);
        }
      } else {
        for (Index k : sel) {
          if (options_.swap_exclusion && k == last_touched_) continue;
          try {
            rates[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
                score(state_.eval_swap_delete_first(k, l));
          } catch (const CandidateInfeasible&) {
          }
        }
      }
    }
    for (Index k : sorted_copy(sel)) {
      for (Index l = 0; l < state_.user_count(); ++l) {
        const double r = rates[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
        if (r == kNoRate) continue;
        if (r > best_rate + kTieTolerance || best_k < 0) {
          best_k = k;
          best_l = l;
          best_rate = r;
        }
      }
    }
    if (best_k < 0 || !(best_rate - rate_ > options_.min_improvement)) return false;
    state_.apply_swap(best_k, best_l);
    record(Operation::swap, {best_k, best_l});
    ++trace_.swap_count;
    last_touched_ = -1;
    return true;
  }

  // Accepted delete of `k`, with zero-power bookkeeping.
  void remove(Index k) {
    const GainMap before = state_.gains();
    const PowerAllocation alloc = waterfill(before, power_);
    for (Index r = 0; r < before.size(); ++r)
      if (before.users[static_cast<std::size_t>(r)] == k && !alloc.active(r))
        trace_.zero_power_delete_seen = true;
    state_.apply_delete(k);
    record(Operation::remove, {k});
    ++trace_.delete_count;
  }

  // Add/delete oscillation, optionally closed by swaps.
  void run_local_search(bool with_swap) {
    enum class Phase { add, remove, swap };
    Phase phase = Phase::add;
    bool add_failed = false;
    bool delete_failed = false;
    for (;;) {
      if (phase == Phase::add) {
        if (try_add()) {
          add_failed = delete_failed = false;
          continue;
        }
        add_failed = true;
        phase = delete_failed ? Phase::swap : Phase::remove;
      } else if (phase == Phase::remove) {
        if (try_delete()) {
          add_failed = delete_failed = false;
          continue;
        }
        delete_failed = true;
        phase = add_failed ? Phase::swap : Phase::add;
      } else {
        if (!with_swap) return;
        ++trace_.swap_search_count;
        if (!try_swap()) return;
        add_failed = delete_failed = false;
        phase = Phase::add;
      }
    }
  }

  AlgoResult finish() {
    AlgoResult out;
    if (!state_.empty()) state_.rebuild();
    out.gains = state_.gains();
    trace_.final_set = sorted_copy(state_.selected());
    trace_.final_rate = sum_rate(out.gains, power_);
    trace_.redundant_user_eliminated = trace_.delete_count > 0;
    trace_.local_optimum_escaped = trace_.swap_count > 0;
    if (!out.gains.empty() && waterfill(out.gains, power_).active_count == out.gains.size()) {
      out.precoder = build_precoder(state_, power_);
    }
    out.trace = std::move(trace_);
    return out;
  }

 private:
  void record(Operation op, std::vector<Index> users) {
    const double before = rate_;
    rate_ = state_.empty() ? 0.0 : sum_rate(state_.gains(), power_);
    trace_.steps.push_back({op, std::move(users), rate_ - before, rate_});
    if (static_cast<Index>(trace_.steps.size()) > op_cap_) {
      throw Error("selector exceeded " + std::to_string(op_cap_) +
                  " accepted operations; rate is not increasing reliably");
    }
  }

  double power_;
  SelectorOptions options_;
  SelectionState state_;
  Index op_cap_;
  double rate_ = 0.0;
  Index last_touched_ = -1;
  SelectionTrace trace_;
};

}  // namespace

AlgoResult zfs(const ChannelMatrix& channel, double power, const SelectorOptions& options) {
  GreedySearch search(channel, power, options);
  while (search.try_add()) {
  }
  return search.finish();
}

AlgoResult swf(const ChannelMatrix& channel, double power, const SelectorOptions& options) {
  GreedySearch search(channel, power, options);
  while (search.try_add()) {
  }
  SelectionState& state = search.state();
  while (state.size() > 1) {
    const GainMap gains = state.gains();
    const PowerAllocation alloc = waterfill(gains, power);
    if (alloc.active_count == gains.size()) break;
    Index weakest = -1;
    for (Index r = 0; r < gains.size(); ++r) {
      if (alloc.active(r)) continue;
      if (weakest < 0 || gains.lambda(r) < gains.lambda(weakest)) weakest = r;
    }
    search.remove(gains.users[static_cast<std::size_t>(weakest)]);
  }
  return search.finish();
}

AlgoResult gus_ns(const ChannelMatrix& channel, double power, const SelectorOptions& options) {
  GreedySearch search(channel, power, options);
  search.run_local_search(false);
  return search.finish();
}

AlgoResult guss(const ChannelMatrix& channel, double power, const SelectorOptions& options) {
  GreedySearch search(channel, power, options);
  search.run_local_search(true);
  AlgoResult out = search.finish();
  if (!out.gains.empty() && !out.precoder) {
    throw InvalidStateError("guss: final set contains a zero-power user");
  }
  return out;
}

AlgoResult sus(const ChannelMatrix& channel, double power, double alpha,
               const SelectorOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("sus: alpha must be in (0, 1]");
  GreedySearch search(channel, power, options);
  SelectionState& state = search.state();

  std::vector<Index> pool;
  for (Index k = 0; k < channel.user_count(); ++k) pool.push_back(k);

  while (!pool.empty() && state.size() < channel.antenna_count()) {
    Index best = -1;
    double best_norm = -1.0;
    for (Index k : pool) {
      if (!state.is_candidate(k)) continue;
      const double norm = state.residual(k).squaredNorm();
      if (norm > best_norm) {
        best = k;
        best_norm = norm;
      }
    }
    if (best < 0) break;
    const CVector direction = state.residual(best);
    const double dir_norm = std::sqrt(best_norm);
    state.apply_add(best);

    std::vector<Index> next;
    for (Index k : pool) {
      if (k == best) continue;
      const auto h = channel.row(k);
      const double corr = std::abs(inner(h, direction)) / (std::sqrt(h.squaredNorm()) * dir_norm);
      if (corr < alpha) next.push_back(k);
    }
    pool = std::move(next);
  }
  // SUS picks by residual norm, not by rate, so its trace carries no steps.
  return search.finish();
}

double set_rate(const ChannelMatrix& channel, std::span<const Index> users, double power) {
  if (users.empty()) return 0.0;
  return sum_rate(effective_gains_direct(channel, users), power);
}

std::uint64_t exhaustive_subset_count(Index users, Index antennas) {
  const Index top = std::min(users, antennas);
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (Index i = 1; i <= top; ++i) {
    // binom = C(users, i), computed incrementally; saturate on overflow.
    const auto num = static_cast<std::uint64_t>(users - i + 1);
    if (binom > kMax / num) return kMax;
    binom = binom * num / static_cast<std::uint64_t>(i);
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

AlgoResult exhaustive(const ChannelMatrix& channel, double power, std::uint64_t budget) {
  const Index k_users = channel.user_count();
  const Index top = std::min(k_users, channel.antenna_count());
  const std::uint64_t count = exhaustive_subset_count(k_users, channel.antenna_count());
  if (count > budget) {
    throw BudgetExceeded("exhaustive: " + std::to_string(count) + " subsets exceed budget " +
                         std::to_string(budget));
  }

  std::vector<Index> best_set;
  double best_rate = kNoRate;
  std::vector<Index> subset;
  for (Index size = 1; size <= top; ++size) {
    // Lexicographic combinations of `size` users.
    subset.resize(static_cast<std::size_t>(size));
    for (Index i = 0; i < size; ++i) subset[static_cast<std::size_t>(i)] = i;
    for (;;) {
      double r = kNoRate;
      try {
        r = set_rate(channel, subset, power);
      } catch (const SingularityError&) {
      }
      if (r > best_rate + kTieTolerance) {
        best_rate = r;
        best_set = subset;
      }
      Index pos = size - 1;
      while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == k_users - size + pos) --pos;
      if (pos < 0) break;
      ++subset[static_cast<std::size_t>(pos)];
      for (Index q = pos + 1; q < size; ++q)
        subset[static_cast<std::size_t>(q)] = subset[static_cast<std::size_t>(q - 1)] + 1;
    }
  }

  AlgoResult out;
  out.trace.final_set = best_set;
  if (best_set.empty()) return out;
  SelectionState state(channel);
  for (Index k : best_set) state.apply_add(k);
  state.rebuild();
  out.gains = state.gains();
  out.trace.final_rate = sum_rate(out.gains, power);
  if (waterfill(out.gains, power).active_count == out.gains.size()) {
    out.precoder = build_precoder(state, power);
  }
  return out;
}

DeleteComparison best_delete_vs_zero_power(const ChannelMatrix& channel, double power,
                                           std::span<const Index> users) {
  if (users.size() < 2) throw InvalidStateError("best_delete_vs_zero_power: needs >= 2 users");
  DeleteComparison out;
  const GainMap gains = effective_gains_direct(channel, users);
  const PowerAllocation alloc = waterfill(gains, power);
  out.base_rate = sum_rate(gains, power);

  double min_power = 0.0;
  std::vector<Index> rest;
  for (std::size_t j = 0; j < users.size(); ++j) {
    rest.clear();
    for (std::size_t o = 0; o < users.size(); ++o)
      if (o != j) rest.push_back(users[o]);
    const double r = set_rate(channel, rest, power);
    out.delete_rates.push_back(r);
    if (out.best_delete < 0 || r > out.best_delete_rate) {
      out.best_delete = users[j];
      out.best_delete_rate = r;
    }
    const auto row = static_cast<Index>(j);
    if (!alloc.active(row)) out.zero_power_users.push_back(users[j]);
    if (out.min_power_user < 0 || alloc.p(row) < min_power) {
      min_power = alloc.p(row);
      out.min_power_user = users[j];
      out.min_power_delete_rate = r;
    }
  }
  return out;
}

NeighborhoodBest best_neighbor(const ChannelMatrix& channel, std::span<const Index> users,
                               double power) {
  NeighborhoodBest best;
  best.rate = kNoRate;
  const Index k_users = channel.user_count();
  const Index m = channel.antenna_count();
  std::vector<Index> base(users.begin(), users.end());
  auto in_base = [&](Index u) { return std::find(base.begin(), base.end(), u) != base.end(); };
  auto consider = [&](std::vector<Index> candidate, Operation op) {
    double r = kNoRate;
    try {
      r = set_rate(channel, candidate, power);
    } catch (const SingularityError&) {
      return;
    }
    if (r > best.rate) {
      best.rate = r;
      best.set = std::move(candidate);
      best.op = op;
    }
  };

  if (static_cast<Index>(base.size()) < m) {
    for (Index w = 0; w < k_users; ++w) {
      if (in_base(w)) continue;
      auto c = base;
      c.push_back(w);
      consider(std::move(c), Operation::add);
    }
  }
  for (std::size_t j = 0; j < base.size(); ++j) {
    auto c = base;
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(j));
    consider(std::move(c), Operation::remove);
  }
  for (std::size_t j = 0; j < base.size(); ++j) {
    for (Index l = 0; l < k_users; ++l) {
      if (in_base(l)) continue;
      auto c = base;
      c[j] = l;
      consider(std::move(c), Operation::swap);
    }
  }
  if (best.rate == kNoRate) best.rate = 0.0;
  return best;
}

AlgoResult run_algorithm(Algorithm algorithm, const ChannelMatrix& channel, double power,
                         const AlgorithmParams& params) {
  switch (algorithm) {
    case Algorithm::zfs: return zfs(channel, power, params.options);
    case Algorithm::swf: return swf(channel, power, params.options);
    case Algorithm::sus: return sus(channel, power, params.sus_alpha, params.options);
    case Algorithm::gus_ns: return gus_ns(channel, power, params.options);
    case Algorithm::guss: return guss(channel, power, params.options);
    case Algorithm::exhaustive: return exhaustive(channel, power, params.exhaustive_budget);
  }
  throw std::invalid_argument("run_algorithm: unknown algorithm");
}

}  // namespace zfsel
