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

// Incremental effective-channel-vector engine.
//
// For every selected user i the state keeps the ECV nu_i (the part of h_i
// orthogonal to the other selected channels) and its gain lambda_i = ||nu_i||^2.
// For every unselected user j it keeps the residual g_j (the part of h_j
// orthogonal to all selected channels). Add, delete and one-for-one swap
// update these in O(M) per affected pair; the eval_* members return the
// gains a move would produce without touching the state.

#include <cstddef>
#include <vector>

#include "zfsel/channel.hpp"
#include "zfsel/linalg.hpp"
#include "zfsel/zfbf.hpp"

namespace zfsel {

/// Candidates with ||g_w||^2 <= kDegeneracyTolerance * ||h_w||^2 are treated
/// as lying inside the span of the selected set.
inline constexpr double kDegeneracyTolerance = 1e-10;

/// Delete updates whose denominator lambda_i lambda_k - |nu_i nu_k^*|^2 drops
/// below this fraction of lambda_i lambda_k are recomputed from scratch.
inline constexpr double kDeleteGuardTolerance = 1e-12;

struct StateOptions {
  /// Run rebuild() after this many mutations; 0 disables.
  std::size_t rebuild_period = 64;
};

struct InvariantReport {
  double nu_orthogonality = 0.0;        // max |nu_i h_j^*| / (||nu_i|| ||h_j||), i != j in S
  double residual_orthogonality = 0.0;  // max |g_j h_i^*| / (||g_j|| ||h_i||), i in S, j not in S
  double gain_consistency = 0.0;        // max |lambda_i - ||nu_i||^2| / lambda_i
};

class SelectionState {
 public:
  /// Empty selection; g_j = h_j for every user. The channel must outlive the state.
  explicit SelectionState(const ChannelMatrix& channel, StateOptions options = {});

  const ChannelMatrix& channel() const noexcept { return *channel_; }
  Index user_count() const noexcept { return channel_->user_count(); }
  Index antenna_count() const noexcept { return channel_->antenna_count(); }

  /// Selected users in selection order.
  const std::vector<Index>& selected() const noexcept { return selected_; }
  Index size() const noexcept { return static_cast<Index>(selected_.size()); }
  bool empty() const noexcept { return selected_.empty(); }
  bool contains(Index user) const;

  /// ECV of a selected user.
  CVector nu(Index user) const;
  /// Orthogonal residual of an unselected user.
  CVector residual(Index user) const;
  double gain(Index user) const;
  GainMap gains() const;

  /// w is unselected and its residual is not degenerate.
  bool is_candidate(Index w) const;

  GainMap eval_add(Index w) const;
  void apply_add(Index k);

  /// Requires |S| >= 2.
  GainMap eval_delete(Index w) const;
  void apply_delete(Index k);

  /// Gains of S u {l} \ {k}, ordered as selected() without k, then l.
  ///
  /// Composes add-of-l then delete-of-k. When l's residual is degenerate
  /// (for instance |S| = M) the composition falls back to delete-first.
  GainMap eval_swap(Index k, Index l) const;

  /// eval_swap(k, l) for every k in selected() order, sharing the add-of-l
  /// intermediate. Requires is_candidate(l).
  std::vector<GainMap> eval_swaps_with(Index l) const;

  /// Delete-of-k then add-of-l. Kept as an independent route for verification.
  GainMap eval_swap_delete_first(Index k, Index l) const;

  void apply_swap(Index k, Index l);

  /// Recomputes every nu_i, g_j and lambda_i through projector_complement and
  /// returns the largest relative deviation from the stored values (vectors
  /// relative to ||h||, gains relative to the recomputed gain).
  double rebuild();

  InvariantReport check_invariants() const;

  std::size_t mutation_count() const noexcept { return mutations_; }

 private:
  friend struct SelectionStateTestAccess;

  void check_user(Index user) const;
  double degeneracy_floor(Index user) const;
  GainMap direct_gains_without(Index removed, Index added) const;
  void add_impl(Index k);
  void delete_impl(Index k);
  void note_mutation();

  const ChannelMatrix* channel_;
  StateOptions options_;
  // Row j holds nu_j when j is selected and g_j otherwise.
  CMatrix vectors_;
  Eigen::VectorXd lambda_;
  std::vector<Index> selected_;
  std::vector<bool> in_set_;
  std::size_t mutations_ = 0;
};

}  // namespace zfsel
