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

#include "zfsel/ecv_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zfsel {

SelectionState::SelectionState(const ChannelMatrix& channel, StateOptions options)
    : channel_(&channel),
      options_(options),
      vectors_(channel.rows()),
      lambda_(Eigen::VectorXd::Zero(channel.user_count())),
      in_set_(static_cast<std::size_t>(channel.user_count()), false) {}

void SelectionState::check_user(Index user) const {
  if (user < 0 || user >= user_count()) {
    throw DimensionError("user index " + std::to_string(user) + " out of range");
  }
}

bool SelectionState::contains(Index user) const {
  check_user(user);
  return in_set_[static_cast<std::size_t>(user)];
}

CVector SelectionState::nu(Index user) const {
  if (!contains(user)) throw InvalidStateError("nu: user is not selected");
  return vectors_.row(user);
}

CVector SelectionState::residual(Index user) const {
  if (contains(user)) throw InvalidStateError("residual: user is selected");
  return vectors_.row(user);
}

double SelectionState::gain(Index user) const {
  if (!contains(user)) throw InvalidStateError("gain: user is not selected");
  return lambda_(user);
}

GainMap SelectionState::gains() const {
  GainMap out{selected_, Eigen::VectorXd(size())};
  for (Index r = 0; r < size(); ++r) out.lambda(r) = lambda_(selected_[static_cast<std::size_t>(r)]);
  return out;
}

double SelectionState::degeneracy_floor(Index user) const {
  return kDegeneracyTolerance * channel_->row(user).squaredNorm();
}

bool SelectionState::is_candidate(Index w) const {
  if (contains(w)) return false;
  return vectors_.row(w).squaredNorm() > degeneracy_floor(w);
}

GainMap SelectionState::direct_gains_without(Index removed, Index added) const {
  std::vector<Index> users;
  for (Index i : selected_)
    if (i != removed) users.push_back(i);
  if (added >= 0) users.push_back(added);
  return effective_gains_direct(*channel_, users);
}

// ---------- add ----------

GainMap SelectionState::eval_add(Index w) const {
  if (contains(w)) throw InvalidStateError("eval_add: user already selected");
  const auto g_w = vectors_.row(w);
  const double g2 = g_w.squaredNorm();
  if (!(g2 > degeneracy_floor(w))) {
    throw CandidateInfeasible("eval_add: user " + std::to_string(w + 1) +
                              " lies in the span of the selected set");
  }
  const auto h_w = channel_->row(w);
  GainMap out;
  out.users = selected_;
  out.users.push_back(w);
  out.lambda.resize(size() + 1);
  for (Index r = 0; r < size(); ++r) {
    const Index i = selected_[static_cast<std::size_t>(r)];
    const double lam = lambda_(i);
    const double c2 = std::norm(inner(vectors_.row(i), h_w));
    out.lambda(r) = lam * lam * g2 / (lam * g2 + c2);
  }
  out.lambda(size()) = g2;
  return out;
}

void SelectionState::add_impl(Index k) {
  if (contains(k)) throw InvalidStateError("apply_add: user already selected");
  const CVector g_k = vectors_.row(k);
  const double g2 = g_k.squaredNorm();
  if (!(g2 > degeneracy_floor(k))) {
    throw CandidateInfeasible("apply_add: user " + std::to_string(k + 1) +
                              " lies in the span of the selected set");
  }
  const auto h_k = channel_->row(k);
  for (Index i : selected_) {
    const double lam = lambda_(i);
    const Complex c = inner(vectors_.row(i), h_k);
    const double scale = lam * g2 / (lam * g2 + std::norm(c));
    vectors_.row(i) = scale * (vectors_.row(i) - (c / g2) * g_k);
    lambda_(i) = vectors_.row(i).squaredNorm();
  }
  for (Index j = 0; j < user_count(); ++j) {
    if (in_set_[static_cast<std::size_t>(j)] || j == k) continue;
    const Complex c = inner(vectors_.row(j), g_k);
    vectors_.row(j) -= (c / g2) * g_k;
  }
  // nu_k = g_k: the row already holds it.
  lambda_(k) = g2;
  selected_.push_back(k);
  in_set_[static_cast<std::size_t>(k)] = true;
}

void SelectionState::apply_add(Index k) {
  add_impl(k);
  note_mutation();
}

// ---------- delete ----------

GainMap SelectionState::eval_delete(Index w) const {
  if (!contains(w)) throw InvalidStateError("eval_delete: user is not selected");
  if (size() < 2) throw InvalidStateError("eval_delete: needs at least two selected users");
  const auto nu_w = vectors_.row(w);
  const double lam_w = lambda_(w);
  GainMap out;
  out.lambda.resize(size() - 1);
  Index r = 0;
  for (Index i : selected_) {
    if (i == w) continue;
    const double lam = lambda_(i);
    const double den = lam * lam_w - std::norm(inner(vectors_.row(i), nu_w));
    if (!(den > kDeleteGuardTolerance * lam * lam_w)) return direct_gains_without(w, -1);
    out.users.push_back(i);
    out.lambda(r++) = lam * lam * lam_w / den;
  }
  return out;
}

void SelectionState::delete_impl(Index k) {
  if (!contains(k)) throw InvalidStateError("apply_delete: user is not selected");

  if (size() == 1) {
    vectors_ = channel_->rows();
    lambda_.setZero();
    selected_.clear();
    std::fill(in_set_.begin(), in_set_.end(), false);
    return;
  }

  for (int attempt = 0;; ++attempt) {
    const double lam_k = lambda_(k);
    bool guarded = false;
    for (Index i : selected_) {
      if (i == k) continue;
      const double lam = lambda_(i);
      const double den = lam * lam_k - std::norm(inner(vectors_.row(i), vectors_.row(k)));
      if (!(den > kDeleteGuardTolerance * lam * lam_k)) guarded = true;
    }
    if (!guarded) break;
    if (attempt > 0) {
      throw SingularityError("apply_delete: update denominator vanished after rebuild");
    }
    rebuild();
  }

  const CVector nu_k = vectors_.row(k);
  const double lam_k = lambda_(k);
  for (Index i : selected_) {
    if (i == k) continue;
    const double lam = lambda_(i);
    const Complex c = inner(vectors_.row(i), nu_k);
    const double scale = lam * lam_k / (lam * lam_k - std::norm(c));
    vectors_.row(i) = scale * (vectors_.row(i) - (c / lam_k) * nu_k);
  }
  for (Index j = 0; j < user_count(); ++j) {
    if (in_set_[static_cast<std::size_t>(j)]) continue;
    const Complex c = inner(channel_->row(j), nu_k);
    vectors_.row(j) += (c / lam_k) * nu_k;
  }
  // g_k = nu_k: the row already holds it.
  lambda_(k) = 0.0;
  in_set_[static_cast<std::size_t>(k)] = false;
  selected_.erase(std::find(selected_.begin(), selected_.end(), k));

  if (selected_.size() == 1) {
    const Index last = selected_.front();
    vectors_.row(last) = channel_->row(last);
  }
  for (Index i : selected_) lambda_(i) = vectors_.row(i).squaredNorm();
}

void SelectionState::apply_delete(Index k) {
  delete_impl(k);
  note_mutation();
}

// ---------- swap ----------

std::vector<GainMap> SelectionState::eval_swaps_with(Index l) const {
  if (contains(l)) throw InvalidStateError("eval_swap: incoming user already selected");
  const double g2 = vectors_.row(l).squaredNorm();
  if (!(g2 > degeneracy_floor(l))) {
    throw CandidateInfeasible("eval_swap: user " + std::to_string(l + 1) +
                              " lies in the span of the selected set");
  }
  const Index n = size();
  const auto g_l = vectors_.row(l);
  const auto h_l = channel_->row(l);

  // Intermediate ECVs of S u {l}; row n is the incoming user.
  CMatrix plus(n + 1, antenna_count());
  Eigen::VectorXd lam_plus(n + 1);
  for (Index r = 0; r < n; ++r) {
    const Index i = selected_[static_cast<std::size_t>(r)];
    const double lam = lambda_(i);
    const Complex c = inner(vectors_.row(i), h_l);
    const double scale = lam * g2 / (lam * g2 + std::norm(c));
    plus.row(r) = scale * (vectors_.row(i) - (c / g2) * g_l);
    lam_plus(r) = plus.row(r).squaredNorm();
  }
  plus.row(n) = g_l;
  lam_plus(n) = g2;

  // gram(a, b) = nu_a+ nu_b+^*
  const CMatrix gram = plus * plus.adjoint();

  std::vector<GainMap> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index kr = 0; kr < n; ++kr) {
    const Index k = selected_[static_cast<std::size_t>(kr)];
    const double lam_k = lam_plus(kr);
    GainMap gm;
    gm.lambda.resize(n);
    bool guarded = false;
    Index r = 0;
    for (Index ir = 0; ir <= n; ++ir) {
      if (ir == kr) continue;
      const double lam = lam_plus(ir);
      const double den = lam * lam_k - std::norm(gram(ir, kr));
      if (!(den > kDeleteGuardTolerance * lam * lam_k)) {
        guarded = true;
        break;
      }
      gm.lambda(r++) = lam * lam * lam_k / den;
      gm.users.push_back(ir == n ? l : selected_[static_cast<std::size_t>(ir)]);
    }
    if (guarded) gm = direct_gains_without(k, l);
    out.push_back(std::move(gm));
  }
  return out;
}

GainMap SelectionState::eval_swap_delete_first(Index k, Index l) const {
  if (!contains(k)) throw InvalidStateError("eval_swap: outgoing user is not selected");
  if (contains(l)) throw InvalidStateError("eval_swap: incoming user already selected");
  const auto nu_k = vectors_.row(k);
  const double lam_k = lambda_(k);
  const auto h_l = channel_->row(l);

  // Residual of l once k has left the set.
  const CVector g_l = vectors_.row(l) + (inner(h_l, nu_k) / lam_k) * nu_k;
  const double g2 = g_l.squaredNorm();
  if (!(g2 > degeneracy_floor(l))) {
    throw CandidateInfeasible("eval_swap: user " + std::to_string(l + 1) +
                              " lies in the span of the remaining set");
  }

  GainMap out;
  out.lambda.resize(size());
  Index r = 0;
  for (Index i : selected_) {
    if (i == k) continue;
    const double lam = lambda_(i);
    double lam_minus = lam;
    CVector nu_minus = vectors_.row(i);
    if (size() > 1) {
      const Complex c = inner(vectors_.row(i), nu_k);
      const double den = lam * lam_k - std::norm(c);
      if (!(den > kDeleteGuardTolerance * lam * lam_k)) return direct_gains_without(k, l);
      nu_minus = (lam * lam_k / den) * (vectors_.row(i) - (c / lam_k) * nu_k);
      lam_minus = nu_minus.squaredNorm();
    }
    const double c2 = std::norm(inner(nu_minus, h_l));
    out.users.push_back(i);
    out.lambda(r++) = lam_minus * lam_minus * g2 / (lam_minus * g2 + c2);
  }
  out.users.push_back(l);
  out.lambda(r) = g2;
  return out;
}

GainMap SelectionState::eval_swap(Index k, Index l) const {
  if (!contains(k)) throw InvalidStateError("eval_swap: outgoing user is not selected");
  if (!is_candidate(l)) return eval_swap_delete_first(k, l);
  const auto all = eval_swaps_with(l);
  const auto pos = std::find(selected_.begin(), selected_.end(), k) - selected_.begin();
  return all[static_cast<std::size_t>(pos)];
}

void SelectionState::apply_swap(Index k, Index l) {
  if (!contains(k)) throw InvalidStateError("apply_swap: outgoing user is not selected");
  if (contains(l)) throw InvalidStateError("apply_swap: incoming user already selected");
  if (is_candidate(l)) {
    add_impl(l);
    delete_impl(k);
  } else {
    // l's residual is degenerate against S; delete first so the
    // intermediate set stays full rank. Throws before mutating if l is
    // degenerate against S \ {k} too.
    (void)eval_swap_delete_first(k, l);
    delete_impl(k);
    add_impl(l);
  }
  note_mutation();
}

// ---------- drift control ----------

double SelectionState::rebuild() {
  const Index m = antenna_count();
  CMatrix fresh = vectors_;
  Eigen::VectorXd fresh_lambda = Eigen::VectorXd::Zero(user_count());

  const CMatrix h_s = select_rows(channel_->rows(), selected_);
  const CMatrix p_all = projector_complement(h_s);
  for (Index j = 0; j < user_count(); ++j) {
    if (in_set_[static_cast<std::size_t>(j)]) continue;
    fresh.row(j) = channel_->row(j) * p_all;
  }
  std::vector<Index> others;
  for (Index i : selected_) {
    others.clear();
    for (Index o : selected_)
      if (o != i) others.push_back(o);
    const CMatrix p_i = others.empty() ? CMatrix(CMatrix::Identity(m, m))
                                       : projector_complement(select_rows(channel_->rows(), others));
    fresh.row(i) = channel_->row(i) * p_i;
    fresh_lambda(i) = fresh.row(i).squaredNorm();
  }

  double deviation = 0.0;
  for (Index j = 0; j < user_count(); ++j) {
    const double scale = std::sqrt(channel_->row(j).squaredNorm());
    deviation = std::max(deviation, (vectors_.row(j) - fresh.row(j)).norm() / scale);
  }
  for (Index i : selected_) {
    deviation = std::max(deviation, std::abs(lambda_(i) - fresh_lambda(i)) / fresh_lambda(i));
  }
  vectors_ = std::move(fresh);
  lambda_ = std::move(fresh_lambda);
  return deviation;
}

void SelectionState::note_mutation() {
  ++mutations_;
  if (options_.rebuild_period > 0 && mutations_ % options_.rebuild_period == 0) rebuild();
}

InvariantReport SelectionState::check_invariants() const {
  InvariantReport report;
  for (Index i : selected_) {
    const double nu_norm = std::sqrt(vectors_.row(i).squaredNorm());
    for (Index j : selected_) {
      if (i == j) continue;
      const double hj = std::sqrt(channel_->row(j).squaredNorm());
      report.nu_orthogonality = std::max(
          report.nu_orthogonality, std::abs(inner(vectors_.row(i), channel_->row(j))) / (nu_norm * hj));
    }
    report.gain_consistency =
        std::max(report.gain_consistency,
                 std::abs(lambda_(i) - vectors_.row(i).squaredNorm()) / lambda_(i));
  }
  for (Index j = 0; j < user_count(); ++j) {
    if (in_set_[static_cast<std::size_t>(j)] || !is_candidate(j)) continue;
    const double g_norm = std::sqrt(vectors_.row(j).squaredNorm());
    for (Index i : selected_) {
      const double hi = std::sqrt(channel_->row(i).squaredNorm());
      report.residual_orthogonality =
          std::max(report.residual_orthogonality,
                   std::abs(inner(vectors_.row(j), channel_->row(i))) / (g_norm * hi));
    }
  }
  return report;
}

}  // namespace zfsel
