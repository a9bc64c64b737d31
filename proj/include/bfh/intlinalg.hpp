#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bfh/exact.hpp"

namespace Eigen {

template <>
struct NumTraits<bfh::exact::Int> : GenericNumTraits<bfh::exact::Int> {
  typedef bfh::exact::Int Real;
  typedef double NonInteger;
  typedef bfh::exact::Int Nested;
  typedef bfh::exact::Int Literal;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 80,
  };
  static inline Real epsilon() { return bfh::exact::Int(0); }
  static inline Real dummy_precision() { return bfh::exact::Int(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<bfh::exact::Rat> : GenericNumTraits<bfh::exact::Rat> {
  typedef bfh::exact::Rat Real;
  typedef bfh::exact::Rat NonInteger;
  typedef bfh::exact::Rat Nested;
  typedef bfh::exact::Rat Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 120,
    MulCost = 160,
  };
  static inline Real epsilon() { return bfh::exact::Rat(0); }
  static inline Real dummy_precision() { return bfh::exact::Rat(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace bfh::linalg {

using exact::Int;
using exact::Rat;

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

namespace detail {
inline void div_mod(const Int& a, const Int& b, Int& q, Int& r) { Int::div_mod(a, b, q, r); }
inline void div_mod(long long a, long long b, long long& q, long long& r) {
  q = a / b;
  r = a % b;
}
inline Int abs_of(const Int& v) { return exact::abs(v); }
inline long long abs_of(long long v) { return v < 0 ? -v : v; }
}  // namespace detail

template <class T>
bool is_zero(const Mat<T>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!(m(i, j) == T(0))) return false;
  return true;
}

// Column-style Hermite reduction: unimodular column operations only, so the
// column span (as a lattice) is preserved. Returns the echelon matrix and, if
// requested, accumulates the same operations on *ops (ncols x ncols identity
// on entry).
template <class T>
Mat<T> column_echelon(Mat<T> m, Mat<T>* ops = nullptr) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (ops) *ops = Mat<T>::Identity(cols, cols);
  Eigen::Index lead = 0;
  for (Eigen::Index r = 0; r < rows && lead < cols; ++r) {
    while (true) {
      // pick the nonzero entry of smallest magnitude in row r among columns >= lead
      Eigen::Index pivot = -1;
      for (Eigen::Index c = lead; c < cols; ++c) {
        if (m(r, c) == T(0)) continue;
        if (pivot < 0 || detail::abs_of(m(r, c)) < detail::abs_of(m(r, pivot))) pivot = c;
      }
      if (pivot < 0) break;
      if (pivot != lead) {
        m.col(pivot).swap(m.col(lead));
        if (ops) ops->col(pivot).swap(ops->col(lead));
      }
      bool reduced = true;
      for (Eigen::Index c = lead + 1; c < cols; ++c) {
        if (m(r, c) == T(0)) continue;
        T q, rem;
        detail::div_mod(m(r, c), m(r, lead), q, rem);
        if (!(q == T(0))) {
          m.col(c) -= m.col(lead) * q;
          if (ops) ops->col(c) -= ops->col(lead) * q;
        }
        if (!(m(r, c) == T(0))) reduced = false;
      }
      if (reduced) {
        ++lead;
        break;
      }
    }
  }
  return m;
}

/// Basis of the column span lattice: echelon columns with zero columns dropped.
template <class T>
Mat<T> lattice_basis(const Mat<T>& gens) {
  Mat<T> e = column_echelon<T>(gens);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < e.cols(); ++c) {
    bool nz = false;
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      if (!(e(i, c) == T(0))) {
        nz = true;
        break;
      }
    if (nz) keep.push_back(c);
  }
  Mat<T> out(e.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = e.col(keep[k]);
  return out;
}

/// Basis of the integer kernel {v : M v = 0}. The kernel of an integer matrix
/// is saturated, so these columns generate it exactly.
template <class T>
Mat<T> kernel_basis(const Mat<T>& m) {
  Mat<T> ops;
  Mat<T> e = column_echelon<T>(m, &ops);
  std::vector<Eigen::Index> zero_cols;
  for (Eigen::Index c = 0; c < e.cols(); ++c) {
    bool nz = false;
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      if (!(e(i, c) == T(0))) {
        nz = true;
        break;
      }
    if (!nz) zero_cols.push_back(c);
  }
  Mat<T> out(m.cols(), static_cast<Eigen::Index>(zero_cols.size()));
  for (size_t k = 0; k < zero_cols.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = ops.col(zero_cols[k]);
  return out;
}

template <class T>
struct SmithResult {
  Mat<T> U, V;            // unimodular, U * M * V = diag
  std::vector<T> diag;    // nonnegative, d[i] | d[i+1]
  Eigen::Index rank = 0;  // number of nonzero diagonal entries
};

namespace detail {

// Diagonalize by unimodular row/column operations, smallest pivot first.
// Remainders re-enter the block strictly smaller, so this terminates.
template <class T>
Eigen::Index diagonalize(Mat<T>& m, Mat<T>& u, Mat<T>& v) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index t = 0;
  while (t < rows && t < cols) {
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = t; i < rows; ++i)
      for (Eigen::Index j = t; j < cols; ++j) {
        if (m(i, j) == T(0)) continue;
        if (pi < 0 || detail::abs_of(m(i, j)) < detail::abs_of(m(pi, pj))) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    if (pi != t) {
      m.row(pi).swap(m.row(t));
      u.row(pi).swap(u.row(t));
    }
    if (pj != t) {
      m.col(pj).swap(m.col(t));
      v.col(pj).swap(v.col(t));
    }
    bool clean = true;
    for (Eigen::Index i = t + 1; i < rows; ++i) {
      if (m(i, t) == T(0)) continue;
      T q, r;
      detail::div_mod(m(i, t), m(t, t), q, r);
      if (!(q == T(0))) {
        m.row(i) -= m.row(t) * q;
        u.row(i) -= u.row(t) * q;
      }
      if (!(m(i, t) == T(0))) clean = false;
    }
    for (Eigen::Index j = t + 1; j < cols; ++j) {
      if (m(t, j) == T(0)) continue;
      T q, r;
      detail::div_mod(m(t, j), m(t, t), q, r);
      if (!(q == T(0))) {
        m.col(j) -= m.col(t) * q;
        v.col(j) -= v.col(t) * q;
      }
      if (!(m(t, j) == T(0))) clean = false;
    }
    if (!clean) continue;  // remainders appeared, re-pivot on a smaller entry
    ++t;
  }
  return t;
}

}  // namespace detail

/// Smith normal form with transforms, suitable for small exact matrices.
template <class T>
SmithResult<T> smith(Mat<T> m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  SmithResult<T> res;
  res.U = Mat<T>::Identity(rows, rows);
  res.V = Mat<T>::Identity(cols, cols);
  Eigen::Index t = 0;
  for (int guard = 0;; ++guard) {
    if (guard > 100000) throw std::logic_error("smith: divisibility repair did not settle");
    t = detail::diagonalize(m, res.U, res.V);
    for (Eigen::Index i = 0; i < t; ++i) {
      if (m(i, i) < T(0)) {
        m.row(i) = -m.row(i);
        res.U.row(i) = -res.U.row(i);
      }
    }
    // repair one divisibility failure by folding the column in; the gcd
    // strictly shrinks the earlier pivot, so finitely many rounds suffice
    Eigen::Index bad = -1;
    for (Eigen::Index i = 0; i + 1 < t; ++i) {
      T q, r;
      detail::div_mod(m(i + 1, i + 1), m(i, i), q, r);
      if (!(r == T(0))) {
        bad = i;
        break;
      }
    }
    if (bad < 0) break;
    m.col(bad) += m.col(bad + 1);
    res.V.col(bad) += res.V.col(bad + 1);
  }
  res.rank = t;
  res.diag.reserve(t);
  for (Eigen::Index i = 0; i < t; ++i) res.diag.push_back(m(i, i));
  return res;
}

/// Solve A X = B exactly over the integers (A need not be square). Returns
/// nullopt when no integral solution exists.
template <class T>
std::optional<Mat<T>> solve_exact(const Mat<T>& a, const Mat<T>& b) {
  SmithResult<T> s = smith<T>(a);
  Mat<T> ub = s.U * b;
  Mat<T> y = Mat<T>::Zero(a.cols(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < ub.rows(); ++i) {
      if (i < s.rank) {
        T q, r;
        detail::div_mod(ub(i, j), s.diag[i], q, r);
        if (!(r == T(0))) return std::nullopt;
        y(i, j) = q;
      } else if (!(ub(i, j) == T(0))) {
        return std::nullopt;
      }
    }
  }
  return s.V * y;
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
template <class T>
Eigen::Index rank_rational(Mat<T> m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index rank = 0;
  T prev(1);
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = rank; i < rows; ++i)
      if (!(m(i, c) == T(0))) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank) m.row(pivot).swap(m.row(rank));
    for (Eigen::Index i = rank + 1; i < rows; ++i) {
      for (Eigen::Index j = c + 1; j < cols; ++j) {
        T num = m(rank, c) * m(i, j) - m(i, c) * m(rank, j);
        T q, r;
        detail::div_mod(num, prev, q, r);
        m(i, j) = q;  // Bareiss division is exact
      }
      m(i, c) = T(0);
    }
    prev = m(rank, c);
    ++rank;
  }
  return rank;
}

/// Determinant of a square integer matrix, fraction-free. det of the empty
/// matrix is 1.
template <class T>
T det_bareiss(Mat<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix not square");
  const Eigen::Index n = m.rows();
  if (n == 0) return T(1);
  T prev(1);
  int sign = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == T(0)) {
      Eigen::Index pivot = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (!(m(i, k) == T(0))) {
          pivot = i;
          break;
        }
      if (pivot < 0) return T(0);
      m.row(pivot).swap(m.row(k));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        T num = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        T q, r;
        detail::div_mod(num, prev, q, r);
        m(i, j) = q;
      }
      m(i, k) = T(0);
    }
    prev = m(k, k);
  }
  return sign < 0 ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

}  // namespace bfh::linalg
