#pragma once

// Exact integer-lattice linear algebra over Z^n and Q^n.
//
// Coordinates are fixed once: G = R^n / Z^n, the integral lattice is Z^n and
// the dual of the Lie algebra is Q^n. Everything here is a pure function of
// its arguments.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "toric/error.hpp"

namespace toric {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) fail(ErrorCode::DimensionMismatch, "ragged matrix literal");
      for (long x : r) data_.emplace_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Builds a matrix whose rows are the given vectors; `cols` is used when
  /// the list is empty.
  static Matrix from_rows(std::span<const std::vector<T>> rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        fail(ErrorCode::DimensionMismatch, "row length differs from ambient dimension");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& factor) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const T& factor) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorCode::DimensionMismatch, "matrix product shape");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<T> apply(std::span<const T> x) const {
    if (x.size() != cols_) fail(ErrorCode::DimensionMismatch, "matrix-vector shape");
    std::vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

inline RatVector to_rational(std::span<const Integer> v) {
  return RatVector(v.begin(), v.end());
}

// ---------------------------------------------------------------------------
// Formatting

inline std::string to_string(const Integer& x) { return x.get_str(); }

inline std::string to_string(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  return c.get_str();
}

template <class T>
std::string to_string(std::span<const T> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_string(v[i]);
  os << ')';
  return os.str();
}
inline std::string to_string(const IntVector& v) { return to_string(std::span<const Integer>(v)); }
inline std::string to_string(const RatVector& v) { return to_string(std::span<const Rational>(v)); }

// ---------------------------------------------------------------------------
// Smith normal form

/// U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ... .
struct SNFResult {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  /// Nonzero diagonal entries of D, in order.
  std::vector<Integer> invariant_factors() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      if (D(i, i) != 0) out.push_back(D(i, i));
    return out;
  }
  std::size_t rank() const { return invariant_factors().size(); }
};

namespace detail {

// Smallest |entry| in the trailing submatrix, earliest in row-major order.
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_pivot(
    const IntMatrix& d, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Integer best_abs;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Integer a = abs(d(i, j));
      if (!best || a < best_abs) {
        best = {i, j};
        best_abs = a;
      }
    }
  return best;
}

}  // namespace detail

/// Deterministic Smith normal form: the pivot is always the nonzero entry of
/// smallest absolute value in the remaining block (earliest on ties), and
/// pivots are made positive at the end of each step.
inline SNFResult smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix d = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    bool empty = false;
    for (;;) {
      auto piv = detail::smallest_pivot(d, t);
      if (!piv) {
        empty = true;
        break;
      }
      d.swap_rows(t, piv->first);
      u.swap_rows(t, piv->first);
      d.swap_cols(t, piv->second);
      v.swap_cols(t, piv->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(t + 0, t) == 0 || d(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        if (q != 0) {
          d.add_row(i, t, -q);
          u.add_row(i, t, -q);
        }
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        if (q != 0) {
          d.add_col(j, t, -q);
          v.add_col(j, t, -q);
        }
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce the divisibility chain.
      bool fixed = false;
      for (std::size_t i = t + 1; i < rows && !fixed; ++i)
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) continue;
          d.add_row(t, i, Integer(1));
          u.add_row(t, i, Integer(1));
          fixed = true;
          break;
        }
      if (!fixed) break;
    }
    if (empty) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(u), std::move(d), std::move(v)};
}

// ---------------------------------------------------------------------------
// Determinants, ranks, inverses

/// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntMatrix a) {
  if (a.rows() != a.cols()) fail(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline Rational determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  RatMatrix a = m;
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(k, p);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      a.add_row(i, k, -f);
    }
  }
  return det;
}

/// Reduced row echelon form over Q; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    Rational inv = 1 / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != r && a(i, c) != 0) a.add_row(i, r, Rational(-a(i, c)));
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(const RatMatrix& m) {
  RatMatrix a = m;
  return row_reduce(a).size();
}
inline std::size_t rank(const IntMatrix& m) { return rank(to_rational(m)); }

/// Inverse over Q, or nullopt when singular.
inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Inverse of a unimodular integer matrix (exact, integer valued).
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  auto inv = inverse(to_rational(m));
  if (!inv) fail(ErrorCode::NotUnimodular, "matrix is singular");
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if ((*inv)(i, j).get_den() != 1) fail(ErrorCode::NotUnimodular, "inverse is not integral");
      out(i, j) = (*inv)(i, j).get_num();
    }
  return out;
}

/// Basis of the rational null space {x : m x = 0}, one vector per free column.
inline std::vector<RatVector> null_space(const RatMatrix& m) {
  RatMatrix a = m;
  auto piv = row_reduce(a);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector x(m.cols(), Rational(0));
    x[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -a(r, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Unique solution of the square system m x = b, or nullopt when singular.
inline std::optional<RatVector> solve_square(const RatMatrix& m, std::span<const Rational> b) {
  const std::size_t n = m.rows();
  if (m.cols() != n || b.size() != n) fail(ErrorCode::DimensionMismatch, "square solve shape");
  RatMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n) = b[i];
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

// ---------------------------------------------------------------------------
// Lattice vectors

inline Integer content(std::span<const Integer> v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

/// Splits v = g * p with p primitive and g = gcd of the entries of v.
inline std::pair<IntVector, Integer> primitive(std::span<const Integer> v) {
  Integer g = content(v);
  if (g == 0) fail(ErrorCode::ZeroVector, "primitive part of the zero vector");
  IntVector p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mpz_divexact(p[i].get_mpz_t(), v[i].get_mpz_t(), g.get_mpz_t());
  return {std::move(p), g};
}

inline bool is_primitive(std::span<const Integer> v) { return content(v) == 1; }

/// Exact canonical pairing between a covector and a lattice vector.
inline Rational dual_pairing(std::span<const Rational> eta, std::span<const Integer> v) {
  if (eta.size() != v.size()) fail(ErrorCode::DimensionMismatch, "pairing dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += eta[i] * v[i];
  return s;
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot product dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::size_t common_dimension(std::span<const IntVector> vs) {
  if (vs.empty()) return 0;
  for (const auto& v : vs)
    if (v.size() != vs.front().size())
      fail(ErrorCode::DimensionMismatch, "vectors of different ambient dimension");
  return vs.front().size();
}

/// True iff the vectors extend to a Z-basis of Z^n, i.e. every Smith
/// invariant factor of the k x n matrix they form equals 1. The empty system
/// is unimodular.
inline bool is_unimodular_system(std::span<const IntVector> vs) {
  if (vs.empty()) return true;
  const std::size_t n = common_dimension(vs);
  if (vs.size() > n) return false;
  auto snf = smith_normal_form(IntMatrix::from_rows(vs, n));
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (snf.D(i, i) != 1) return false;
  return true;
}

/// Completes a unimodular system to a Z-basis of Z^n: the inputs first, then
/// n - k completion vectors. `n` is only consulted when `vs` is empty.
inline std::vector<IntVector> extend_to_basis(std::span<const IntVector> vs, std::size_t n) {
  if (!vs.empty()) n = common_dimension(vs);
  const std::size_t k = vs.size();
  if (k > n) fail(ErrorCode::NotUnimodular, "more vectors than the ambient dimension");
  std::vector<IntVector> out(vs.begin(), vs.end());
  if (k == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      IntVector e(n, Integer(0));
      e[i] = 1;
      out.push_back(std::move(e));
    }
    return out;
  }
  auto snf = smith_normal_form(IntMatrix::from_rows(vs, n));
  for (std::size_t i = 0; i < k; ++i)
    if (snf.D(i, i) != 1)
      fail(ErrorCode::NotUnimodular, "invariant factor " + to_string(snf.D(i, i)) + " != 1");
  // A = U^{-1} [I 0] V^{-1}; the trailing rows of V^{-1} complete the basis.
  IntMatrix vinv = unimodular_inverse(snf.V);
  for (std::size_t i = k; i < n; ++i) out.push_back(vinv.row(i));
  return out;
}

}  // namespace toric
