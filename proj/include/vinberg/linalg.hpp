#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "vinberg/types.hpp"

namespace vinberg::linalg {

// Gaussian elimination over either field. Rational inputs are handled exactly;
// double inputs use partial pivoting and treat entries below eps * scale as zero.

template <typename Scalar>
struct Echelon {
  Matrix<Scalar> reduced;   ///< reduced row echelon form
  std::vector<int> pivots;  ///< pivot column of each nonzero row
};

template <typename Scalar>
double pivot_threshold(const Matrix<Scalar>& m, double eps) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return 0.0;
  } else {
    double scale = m.size() == 0 ? 1.0 : std::max(1.0, m.cwiseAbs().maxCoeff());
    return eps * scale;
  }
}

template <typename Scalar>
Echelon<Scalar> rref(Matrix<Scalar> m, double eps = kDefaultEps) {
  using T = ScalarTraits<Scalar>;
  const double tol = pivot_threshold(m, eps);
  std::vector<int> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index best = -1;
    if constexpr (T::exact) {
      for (Eigen::Index r = row; r < m.rows(); ++r)
        if (m(r, col) != 0) { best = r; break; }
    } else {
      double best_abs = tol;
      for (Eigen::Index r = row; r < m.rows(); ++r)
        if (std::abs(m(r, col)) > best_abs) { best_abs = std::abs(m(r, col)); best = r; }
    }
    if (best < 0) continue;
    m.row(row).swap(m.row(best));
    const Scalar p = m(row, col);
    m.row(row) /= p;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const Scalar f = m(r, col);
      if (T::is_zero(f, 0.0)) continue;
      m.row(r) -= f * m.row(row);
    }
    if constexpr (!T::exact) {
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (r != row) m(r, col) = 0.0;
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  if constexpr (!T::exact) {
    for (Eigen::Index r = row; r < m.rows(); ++r) m.row(r).setZero();
  }
  return {std::move(m), std::move(pivots)};
}

template <typename Scalar>
int rank(const Matrix<Scalar>& m, double eps = kDefaultEps) {
  return static_cast<int>(rref(m, eps).pivots.size());
}

/// Columns form a basis of {x : m x = 0}.
template <typename Scalar>
Matrix<Scalar> nullspace(const Matrix<Scalar>& m, double eps = kDefaultEps) {
  const auto e = rref(m, eps);
  const Eigen::Index n = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<int> free_cols;
  for (Eigen::Index c = 0; c < n; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(static_cast<int>(c));
  Matrix<Scalar> basis = Matrix<Scalar>::Zero(n, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const int f = free_cols[k];
    basis(f, static_cast<Eigen::Index>(k)) = Scalar(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      basis(e.pivots[r], static_cast<Eigen::Index>(k)) = -e.reduced(static_cast<Eigen::Index>(r), f);
  }
  return basis;
}

template <typename Scalar>
Scalar determinant(Matrix<Scalar> m, double eps = kDefaultEps) {
  using T = ScalarTraits<Scalar>;
  if (m.rows() != m.cols()) throw PreconditionError("determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  Scalar det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index best = -1;
    if constexpr (T::exact) {
      for (Eigen::Index r = c; r < n; ++r)
        if (m(r, c) != 0) { best = r; break; }
    } else {
      double best_abs = 0.0;
      for (Eigen::Index r = c; r < n; ++r)
        if (std::abs(m(r, c)) > best_abs) { best_abs = std::abs(m(r, c)); best = r; }
      if (best_abs == 0.0) best = -1;
    }
    if (best < 0) return Scalar(0);
    if (best != c) { m.row(c).swap(m.row(best)); det = -det; }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const Scalar f = m(r, c) / m(c, c);
      if (T::is_zero(f, 0.0)) continue;
      m.row(r) -= f * m.row(c);
    }
  }
  (void)eps;
  return det;
}

/// One solution of m x = rhs (free variables set to zero), or nullopt if inconsistent.
template <typename Scalar>
std::optional<Matrix<Scalar>> solve(const Matrix<Scalar>& m, const Matrix<Scalar>& rhs,
                                    double eps = kDefaultEps) {
  Matrix<Scalar> aug(m.rows(), m.cols() + rhs.cols());
  aug << m, rhs;
  const auto e = rref(aug, eps);
  for (int p : e.pivots)
    if (p >= m.cols()) return std::nullopt;
  Matrix<Scalar> x = Matrix<Scalar>::Zero(m.cols(), rhs.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    x.row(e.pivots[r]) = e.reduced.block(static_cast<Eigen::Index>(r), m.cols(), 1, rhs.cols());
  return x;
}

/// Indices of a maximal linearly independent subset of the rows, chosen greedily in order.
template <typename Scalar>
std::vector<int> independent_rows(const Matrix<Scalar>& m, double eps = kDefaultEps) {
  const auto e = rref(Matrix<Scalar>(m.transpose()), eps);
  return e.pivots;
}

template <typename Scalar>
Matrix<Scalar> principal_submatrix(const Matrix<Scalar>& m, const IndexSet& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix<Scalar> out(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

template <typename Scalar>
Matrix<Scalar> select_rows(const Matrix<Scalar>& m, const IndexSet& idx) {
  Matrix<Scalar> out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

template <typename Scalar>
Matrix<Scalar> select_cols(const Matrix<Scalar>& m, const IndexSet& idx) {
  Matrix<Scalar> out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = m.col(idx[i]);
  return out;
}

template <typename Scalar>
bool is_zero_matrix(const Matrix<Scalar>& m, double eps) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!ScalarTraits<Scalar>::is_zero(m(i, j), eps)) return false;
  return true;
}

}  // namespace vinberg::linalg
