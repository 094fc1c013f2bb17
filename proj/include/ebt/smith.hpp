#pragma once

#include <cstddef>
#include <vector>

#include "ebt/integer.hpp"
#include "ebt/matrix.hpp"

namespace ebt {

struct SnfOptions {
  bool compute_v = true;
  bool compute_u_inverse = true;
};

/// U * A * V = D with D diagonal, diag[i] | diag[i+1] and zeros trailing.
/// `u_inverse` is U^{-1}, tracked alongside U so callers can lift SNF
/// coordinates back to generator coordinates without a second inversion.
template <class T>
struct SmithForm {
  Matrix<T> U;
  Matrix<T> V;
  Matrix<T> u_inverse;
  std::vector<T> diag;  // length min(rows, cols)
  std::size_t rank = 0;  // number of nonzero diagonal entries
  bool has_v = true;
  bool has_u_inverse = true;

  std::size_t rows() const { return U.rows(); }

  Matrix<T> D(std::size_t cols) const {
    Matrix<T> d(U.rows(), cols);
    for (std::size_t i = 0; i < diag.size(); ++i) d(i, i) = diag[i];
    return d;
  }
};

namespace detail {

template <class T>
int compare_abs(const T& a, const T& b) {
  const T x = abs_value(a), y = abs_value(b);
  return x < y ? -1 : (y < x ? 1 : 0);
}

template <class T>
class SmithReducer {
 public:
  SmithReducer(Matrix<T> a, SnfOptions opts) : a_(std::move(a)), opts_(opts) {
    const std::size_t m = a_.rows(), n = a_.cols();
    u_ = Matrix<T>::identity(m);
    if (opts_.compute_u_inverse) uinv_ = Matrix<T>::identity(m);
    if (opts_.compute_v) v_ = Matrix<T>::identity(n);
  }

  SmithForm<T> run() {
    const std::size_t m = a_.rows(), n = a_.cols();
    const std::size_t k = std::min(m, n);
    std::size_t t = 0;
    for (; t < k; ++t) {
      if (!place_global_pivot(t)) break;
      reduce_pivot(t);
      if (sign(a_(t, t)) < 0) negate_row(t);
    }
    SmithForm<T> f;
    f.rank = t;
    f.diag.assign(k, T(0));
    for (std::size_t i = 0; i < t; ++i) f.diag[i] = a_(i, i);
    f.has_v = opts_.compute_v;
    f.has_u_inverse = opts_.compute_u_inverse;
    f.U = std::move(u_);
    f.V = std::move(v_);
    f.u_inverse = std::move(uinv_);
    return f;
  }

 private:
  // Least |a(i,j)| over the trailing block, ties to lowest row then column.
  bool place_global_pivot(std::size_t t) {
    bool found = false;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = t; i < a_.rows(); ++i) {
      for (std::size_t j = t; j < a_.cols(); ++j) {
        if (is_zero(a_(i, j))) continue;
        if (!found || compare_abs(a_(i, j), a_(pi, pj)) < 0) {
          found = true;
          pi = i;
          pj = j;
        }
      }
    }
    if (!found) return false;
    swap_rows(t, pi);
    swap_cols(t, pj);
    return true;
  }

  void reduce_pivot(std::size_t t) {
    const std::size_t m = a_.rows(), n = a_.cols();
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (is_zero(a_(i, t))) continue;
        const T q = floor_div(a_(i, t), a_(t, t));
        add_row(i, t, -q);
        if (!is_zero(a_(i, t))) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (is_zero(a_(t, j))) continue;
        const T q = floor_div(a_(t, j), a_(t, t));
        add_col(j, t, -q);
        if (!is_zero(a_(t, j))) clean = false;
      }
      if (!clean) {
        // A remainder survived: move the smallest one into the pivot slot.
        std::size_t best_i = t, best_j = t;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (!is_zero(a_(i, t)) && compare_abs(a_(i, t), a_(best_i, best_j)) < 0) {
            best_i = i;
            best_j = t;
          }
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (!is_zero(a_(t, j)) && compare_abs(a_(t, j), a_(best_i, best_j)) < 0) {
            best_i = t;
            best_j = j;
          }
        }
        swap_rows(t, best_i);
        swap_cols(t, best_j);
        continue;
      }
      if (abs_value(a_(t, t)) == T(1)) return;
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (!divides(a_(t, t), a_(i, j))) {
            add_row(t, i, T(1));
            fixed = true;
            break;
          }
        }
      }
      if (!fixed) return;
    }
  }

  // row[dst] += q * row[src], mirrored into U and U^{-1}.
  void add_row(std::size_t dst, std::size_t src, const T& q) {
    a_.add_row_multiple(dst, src, q);
    u_.add_row_multiple(dst, src, q);
    if (opts_.compute_u_inverse) uinv_.add_col_multiple(src, dst, -q);
  }
  void add_col(std::size_t dst, std::size_t src, const T& q) {
    a_.add_col_multiple(dst, src, q);
    if (opts_.compute_v) v_.add_col_multiple(dst, src, q);
  }
  void swap_rows(std::size_t x, std::size_t y) {
    if (x == y) return;
    a_.swap_rows(x, y);
    u_.swap_rows(x, y);
    if (opts_.compute_u_inverse) uinv_.swap_cols(x, y);
  }
  void swap_cols(std::size_t x, std::size_t y) {
    if (x == y) return;
    a_.swap_cols(x, y);
    if (opts_.compute_v) v_.swap_cols(x, y);
  }
  void negate_row(std::size_t t) {
    a_.negate_row(t);
    u_.negate_row(t);
    if (opts_.compute_u_inverse) uinv_.negate_col(t);
  }

  Matrix<T> a_;
  Matrix<T> u_, v_, uinv_;
  SnfOptions opts_;
};

}  // namespace detail

/// Smith normal form with unimodular transforms. Deterministic: pivots are
/// chosen by least absolute value, ties broken by lowest row then column.
template <class T>
SmithForm<T> smith_normal_form(const Matrix<T>& a, SnfOptions opts = {}) {
  return detail::SmithReducer<T>(a, opts).run();
}

/// Free rank and torsion invariants of Z^rows / (column span of A).
struct CokernelStructure {
  std::size_t rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1, divisibility order

  friend bool operator==(const CokernelStructure&, const CokernelStructure&) = default;
};

template <class T>
CokernelStructure cokernel_from_smith(const SmithForm<T>& f, std::size_t rows) {
  CokernelStructure c;
  c.rank = rows - f.rank;
  for (std::size_t i = 0; i < f.rank; ++i) {
    if (detail::abs_value(f.diag[i]) != T(1)) c.torsion.push_back(Integer(f.diag[i]));
  }
  return c;
}

inline CokernelStructure cokernel_structure(const IntMatrix& a) {
  SnfOptions opts;
  opts.compute_v = false;
  opts.compute_u_inverse = false;
  return cokernel_from_smith(smith_normal_form(a, opts), a.rows());
}

inline CokernelStructure cokernel_structure(const SparseMatrix& a) {
  return cokernel_structure(a.to_dense());
}

/// Whether b lies in the integer column span of A, given A's SNF.
inline bool in_column_span(const SmithForm<Integer>& f, const IntVector& b) {
  const IntVector y = f.U * b;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i < f.rank) {
      if (!detail::divides(f.diag[i], y[i])) return false;
    } else if (sgn(y[i]) != 0) {
      return false;
    }
  }
  return true;
}

/// Whether A x = b has a solution modulo `modulus`, given A's SNF.
inline bool solvable_mod(const SmithForm<Integer>& f, const IntVector& b, const Integer& modulus) {
  const IntVector y = f.U * b;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Integer d = i < f.rank ? gcd(f.diag[i], modulus) : modulus;
    if (!detail::divides(d, y[i])) return false;
  }
  return true;
}

}  // namespace ebt
