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

// Small dense complex kernel. Channels are row vectors; u v^* is the inner
// product, so ||h||^2 = h h^*.

#include <complex>
#include <span>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "zfsel/errors.hpp"

namespace zfsel {

using Index = Eigen::Index;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

using Complex = std::complex<double>;
using CVector = RowVector<Complex>;
using CMatrix = DenseMatrix<Complex>;

// Relative pivot floor for the Gram Cholesky factor.
inline constexpr double kGramPivotTolerance = 1e-12;

/// u v^*, conjugate-linear in v.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar inner(const Eigen::MatrixBase<DerivedU>& u,
                                const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size()) {
    throw DimensionError("inner: length mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
  }
  // Eigen's dot conjugates its left operand.
  return v.dot(u);
}

template <typename Derived>
RealOf<typename Derived::Scalar> norm_sq(const Eigen::MatrixBase<Derived>& v) {
  return v.squaredNorm();
}

/// (H H^*)^{-1} for the rows of H.
///
/// Factors the Hermitian Gram matrix with Cholesky. Throws SingularityError
/// when a squared pivot falls below kGramPivotTolerance times the largest
/// diagonal entry. An empty row set yields a 0x0 matrix.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> gram_inverse(const Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  using Real = RealOf<Scalar>;
  using Mat = DenseMatrix<Scalar>;

  const Index n = rows.rows();
  if (n == 0) return Mat(0, 0);

  const Mat gram = rows * rows.adjoint();
  const Real max_diag = gram.diagonal().real().maxCoeff();
  if (!(max_diag > Real(0))) throw SingularityError("gram_inverse: all rows are zero");

  const Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularityError("gram_inverse: Gram matrix is not positive definite");
  }
  const Mat& factor = llt.matrixLLT();
  for (Index i = 0; i < n; ++i) {
    const Real pivot = std::norm(factor(i, i));
    if (pivot < Real(kGramPivotTolerance) * max_diag) {
      throw SingularityError("gram_inverse: rows are numerically dependent (pivot " +
                             std::to_string(i) + ")");
    }
  }
  Mat inv = llt.solve(Mat::Identity(n, n));
  return (inv + inv.adjoint()) * Real(0.5);
}

/// P^perp = I_M - H^* (H H^*)^{-1} H, the projector onto the orthogonal
/// complement of the row space. `rows` may have zero rows.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> projector_complement(
    const Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseMatrix<Scalar>;
  const Index m = rows.cols();
  Mat proj = Mat::Identity(m, m);
  if (rows.rows() == 0) return proj;
  const Mat ginv = gram_inverse(rows);
  proj.noalias() -= rows.adjoint() * ginv * rows;
  return proj;
}

/// H^dagger = H^* (H H^*)^{-1}; satisfies H H^dagger = I.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> pseudo_inverse(const Eigen::MatrixBase<Derived>& rows) {
  using Mat = DenseMatrix<typename Derived::Scalar>;
  const Mat ginv = gram_inverse(rows);
  return rows.adjoint() * ginv;
}

/// Rows of `matrix` picked by `indices`, in the given order.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> select_rows(const Eigen::MatrixBase<Derived>& matrix,
                                                  std::span<const Index> indices) {
  DenseMatrix<typename Derived::Scalar> out(static_cast<Index>(indices.size()), matrix.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const Index src = indices[r];
    if (src < 0 || src >= matrix.rows()) throw DimensionError("select_rows: row index out of range");
    out.row(static_cast<Index>(r)) = matrix.row(src);
  }
  return out;
}

}  // namespace zfsel
