#pragma once

#include <limits>
#include <vector>

#include "vinberg/types.hpp"

namespace vinberg::lp {

enum class Status { Optimal, Unbounded };

template <typename Scalar>
struct Result {
  Status status = Status::Optimal;
  Scalar value{0};
  Vector<Scalar> x;  ///< primal solution (original variables only)
};

/**
 * Dense tableau simplex for
 *
 *     maximize c.x  subject to  A x <= b,  x >= 0,
 *
 * with b >= 0 so that the origin is a feasible starting vertex. Pivoting follows
 * Bland's rule, which cannot cycle. Over Rational the result is exact; over
 * double, reduced costs and pivot entries below eps count as zero.
 */
template <typename Scalar>
Result<Scalar> maximize(const Matrix<Scalar>& A, const Vector<Scalar>& b, const Vector<Scalar>& c,
                        double eps = kDefaultEps) {
  using T = ScalarTraits<Scalar>;
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  for (Eigen::Index i = 0; i < m; ++i)
    if (T::sign(b(i), eps) < 0) throw PreconditionError("lp::maximize requires b >= 0");

  // Columns: n structural, m slack, then rhs.
  Matrix<Scalar> tab = Matrix<Scalar>::Zero(m + 1, n + m + 1);
  tab.block(0, 0, m, n) = A;
  for (Eigen::Index i = 0; i < m; ++i) {
    tab(i, n + i) = Scalar(1);
    tab(i, n + m) = b(i);
  }
  for (Eigen::Index j = 0; j < n; ++j) tab(m, j) = -c(j);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  Result<Scalar> out;
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j)
      if (T::sign(tab(m, j), eps) < 0) { enter = j; break; }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    Scalar best_ratio{0};
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T::sign(tab(i, enter), eps) <= 0) continue;
      const Scalar ratio = tab(i, n + m) / tab(i, enter);
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      out.status = Status::Unbounded;
      return out;
    }
    const Scalar p = tab(leave, enter);
    tab.row(leave) /= p;
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const Scalar f = tab(i, enter);
      if (T::is_zero(f, 0.0)) continue;
      tab.row(i) -= f * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  out.value = tab(m, n + m);
  out.x = Vector<Scalar>::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = basis[static_cast<std::size_t>(i)];
    if (j < n) out.x(j) = tab(i, n + m);
  }
  return out;
}

/**
 * Same problem with every variable free (x in R^n): each variable is split into
 * a difference of two nonnegative ones. The caller keeps the problem bounded.
 */
template <typename Scalar>
Result<Scalar> maximize_free(const Matrix<Scalar>& A, const Vector<Scalar>& b, const Vector<Scalar>& c,
                             double eps = kDefaultEps) {
  const Eigen::Index n = A.cols();
  Matrix<Scalar> split(A.rows(), 2 * n);
  split << A, -A;
  Vector<Scalar> cs(2 * n);
  cs << c, -c;
  auto r = maximize<Scalar>(split, b, cs, eps);
  if (r.status == Status::Optimal) r.x = (r.x.head(n) - r.x.tail(n)).eval();
  return r;
}

}  // namespace vinberg::lp
