#ifndef LIESYM_LINALG_HPP
#define LIESYM_LINALG_HPP

#include "liesym/rational.hpp"

#include <Eigen/Core>

#include <vector>

namespace liesym {

/// Clears denominators and divides out the content of an exact row, making the
/// first nonzero entry positive. Rows of integers stay integers.
template <class RowT>
void make_primitive(RowT&& row) {
  const Eigen::Index n = row.size();
  mpz_class l = 1, g = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Rational& q = row(j);
    if (q.is_zero()) continue;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.raw().get_den_mpz_t());
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (row(j).is_zero()) continue;
    row(j) = row(j) * Rational(l);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row(j).raw().get_num_mpz_t());
  }
  if (g == 0) return;
  Eigen::Index lead = 0;
  while (row(lead).is_zero()) ++lead;
  if (row(lead).sign() < 0) g = -g;
  if (g == 1) return;
  Rational inv(mpz_class(1), g);
  for (Eigen::Index j = 0; j < n; ++j)
    if (!row(j).is_zero()) row(j) = row(j) * inv;
}

/// Fraction-free forward elimination: row_i <- p*row_i - a*row_r, followed by
/// content removal, so integer input stays integral throughout. Rows whose
/// pivot-column entry is already zero are left alone, which keeps sparse
/// systems cheap. Returns the pivot columns; A is left in row echelon form with
/// rank(A) leading nonzero rows.
template <class Derived>
std::vector<Eigen::Index> fraction_free_echelon(Eigen::MatrixBase<Derived>& A) {
  using S = typename Derived::Scalar;
  std::vector<Eigen::Index> pivots;
  const Eigen::Index rows = A.rows(), cols = A.cols();
  for (Eigen::Index i = 0; i < rows; ++i) make_primitive(A.row(i));
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (A(i, c) == S(0)) continue;
      // prefer the sparsest candidate row, then the smallest pivot
      if (p < 0) {
        p = i;
        continue;
      }
      auto nz = [&](Eigen::Index k) {
        Eigen::Index n = 0;
        for (Eigen::Index j = c; j < cols; ++j) n += A(k, j) == S(0) ? 0 : 1;
        return n;
      };
      if (nz(i) < nz(p)) p = i;
    }
    if (p < 0) continue;
    if (p != r) A.row(p).swap(A.row(r));
    const S piv = A(r, c);
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (A(i, c) == S(0)) continue;
      const S a = A(i, c);
      for (Eigen::Index j = c; j < cols; ++j) {
        if (A(r, j) == S(0)) {
          if (!(A(i, j) == S(0))) A(i, j) = piv * A(i, j);
        } else {
          A(i, j) = piv * A(i, j) - a * A(r, j);
        }
      }
      make_primitive(A.row(i));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Reduced row echelon form (pivots 1, zeros above and below). Returns pivots.
template <class Derived>
std::vector<Eigen::Index> rref(Eigen::MatrixBase<Derived>& A) {
  using S = typename Derived::Scalar;
  std::vector<Eigen::Index> pivots = fraction_free_echelon(A);
  const Eigen::Index cols = A.cols();
  for (Eigen::Index k = static_cast<Eigen::Index>(pivots.size()); k-- > 0;) {
    const Eigen::Index c = pivots[static_cast<std::size_t>(k)];
    const S inv = S(1) / A(k, c);
    for (Eigen::Index j = c; j < cols; ++j)
      if (!(A(k, j) == S(0))) A(k, j) = A(k, j) * inv;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (A(i, c) == S(0)) continue;
      const S a = A(i, c);
      for (Eigen::Index j = c; j < cols; ++j)
        if (!(A(k, j) == S(0))) A(i, j) = A(i, j) - a * A(k, j);
    }
  }
  for (Eigen::Index i = static_cast<Eigen::Index>(pivots.size()); i < A.rows(); ++i) A.row(i).setZero();
  return pivots;
}

/// Basis of {v : A v = 0}, one vector per free column, in column order. Each
/// vector has 1 at its free column and zeros at the other free columns.
inline std::vector<VectorQ> nullspace(MatrixQ A) {
  std::vector<Eigen::Index> pivots = rref(A);
  std::vector<bool> is_pivot(static_cast<std::size_t>(A.cols()), false);
  for (auto c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<VectorQ> basis;
  for (Eigen::Index f = 0; f < A.cols(); ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    VectorQ v = VectorQ::Zero(A.cols());
    v(f) = Rational(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v(pivots[k]) = -A(static_cast<Eigen::Index>(k), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Eigen::Index rank(MatrixQ A) { return static_cast<Eigen::Index>(fraction_free_echelon(A).size()); }

/// Solves A x = b exactly; false when inconsistent. Free variables are set to 0.
inline bool solve_exact(const MatrixQ& A, const VectorQ& b, VectorQ& x) {
  MatrixQ aug(A.rows(), A.cols() + 1);
  aug << A, b;
  std::vector<Eigen::Index> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == A.cols()) return false;
  x = VectorQ::Zero(A.cols());
  for (std::size_t k = 0; k < pivots.size(); ++k) x(pivots[k]) = aug(static_cast<Eigen::Index>(k), A.cols());
  return true;
}

}  // namespace liesym

#endif  // LIESYM_LINALG_HPP
