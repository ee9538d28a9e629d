#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "morgan/matrix.hpp"

namespace morgan {

namespace detail {

// Rows scaled by the lcm of their denominators, as big integers.
inline std::vector<std::vector<mpz_class>> integer_rows(const RationalMatrix& m,
                                                        mpz_class* scale_product = nullptr) {
  std::vector<std::vector<mpz_class>> out(m.rows(), std::vector<mpz_class>(m.cols()));
  if (scale_product) *scale_product = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).raw().get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).numerator() * (l / m(i, j).denominator());
    if (scale_product) *scale_product *= l;
  }
  return out;
}

// Fraction-free elimination in place; returns the rank and the sign of the row permutation.
inline std::size_t bareiss(std::vector<std::vector<mpz_class>>& a, std::size_t cols, int* sign = nullptr) {
  std::size_t rows = a.size();
  std::size_t r = 0;
  mpz_class prev = 1;
  int s = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      s = -s;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  if (sign) *sign = s;
  return r;
}

}  // namespace detail

inline std::size_t rank(const RationalMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  auto a = detail::integer_rows(m);
  return detail::bareiss(a, m.cols());
}

inline Rational determinant(const RationalMatrix& m) {
  if (!m.square()) throw DimensionError("determinant of a non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return Rational(1);
  mpz_class scale;
  auto a = detail::integer_rows(m, &scale);
  int sign = 1;
  if (detail::bareiss(a, n, &sign) < n) return Rational();
  return Rational(mpz_class(sign * a[n - 1][n - 1]), scale);
}

struct Rref {
  RationalMatrix matrix;
  std::vector<std::size_t> pivot_cols;  // pivot column of each nonzero row
};

// Gauss-Jordan reduced row echelon form; columns are visited in `order`
// (default left to right), which decides which variables become pivots.
inline std::vector<std::size_t> iota_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

inline Rref rref(RationalMatrix m, const std::vector<std::size_t>& order) {
  Rref out;
  std::size_t r = 0;
  for (std::size_t c : order) {
    if (r == m.rows()) break;
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = m(r, c).inverse();
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.matrix = std::move(m);
  return out;
}

inline Rref rref(RationalMatrix m) {
  auto order = iota_order(m.cols());
  return rref(std::move(m), order);
}

inline std::optional<RationalMatrix> try_inverse(const RationalMatrix& m) {
  if (!m.square()) throw DimensionError("inverse of a non-square matrix");
  std::size_t n = m.rows();
  Rref red = rref(hstack(m, RationalMatrix::identity(n)));
  if (red.pivot_cols.size() < n || red.pivot_cols[n - 1] >= n) return std::nullopt;
  return red.matrix.block(0, n, n, n);
}

inline RationalMatrix inverse(const RationalMatrix& m) {
  auto inv = try_inverse(m);
  if (!inv) throw ArithmeticError("singular matrix");
  return *inv;
}

// Affine solution set x = particular + nullspace * z of a x = b.
struct AffineSolution {
  RationalMatrix particular;            // cols(a) x 1, free variables zero
  RationalMatrix nullspace;             // cols(a) x k
  std::vector<std::size_t> free_vars;   // free variable of each nullspace column
};

// Pivot preference follows `order`; free variables are the unvisited or
// non-pivot columns, and nullspace column k has a 1 at free_vars[k].
inline std::optional<AffineSolution> solve_affine(const RationalMatrix& a, const RationalMatrix& b,
                                                  const std::vector<std::size_t>& order) {
  if (a.rows() != b.rows() || b.cols() != 1) throw DimensionError("solve_affine shape mismatch");
  std::size_t n = a.cols();
  Rref red = rref(hstack(a, b), order);
  for (std::size_t i = red.pivot_cols.size(); i < a.rows(); ++i)
    if (!red.matrix(i, n).is_zero()) return std::nullopt;
  std::vector<bool> is_pivot(n, false);
  for (auto c : red.pivot_cols) is_pivot[c] = true;
  AffineSolution sol;
  sol.particular = RationalMatrix(n, 1);
  for (std::size_t i = 0; i < red.pivot_cols.size(); ++i) sol.particular(red.pivot_cols[i], 0) = red.matrix(i, n);
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) sol.free_vars.push_back(c);
  sol.nullspace = RationalMatrix(n, sol.free_vars.size());
  for (std::size_t k = 0; k < sol.free_vars.size(); ++k) {
    std::size_t f = sol.free_vars[k];
    sol.nullspace(f, k) = 1;
    for (std::size_t i = 0; i < red.pivot_cols.size(); ++i) sol.nullspace(red.pivot_cols[i], k) = -red.matrix(i, f);
  }
  return sol;
}

inline std::optional<AffineSolution> solve_affine(const RationalMatrix& a, const RationalMatrix& b) {
  return solve_affine(a, b, iota_order(a.cols()));
}

inline RationalMatrix nullspace(const RationalMatrix& a) {
  return solve_affine(a, RationalMatrix(a.rows(), 1))->nullspace;
}

// Incrementally grown set of independent vectors with an echelon copy for membership tests.
class IncrementalBasis {
 public:
  explicit IncrementalBasis(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<std::vector<Rational>>& vectors() const { return vectors_; }

  bool contains(const std::vector<Rational>& v) const { return reduce(v).empty(); }

  // Adds v if independent of the current span; returns whether it was added.
  bool add(const std::vector<Rational>& v) {
    if (v.size() != dim_) throw DimensionError("basis vector length mismatch");
    auto red = reduce(v);
    if (red.empty()) return false;
    std::size_t p = 0;
    while (red[p].is_zero()) ++p;
    Rational inv = red[p].inverse();
    for (auto& x : red) x *= inv;
    echelon_.push_back(std::move(red));
    pivots_.push_back(p);
    vectors_.push_back(v);
    return true;
  }

  RationalMatrix as_columns() const {
    RationalMatrix m(dim_, vectors_.size());
    for (std::size_t k = 0; k < vectors_.size(); ++k)
      for (std::size_t i = 0; i < dim_; ++i) m(i, k) = vectors_[k][i];
    return m;
  }

 private:
  // Returns empty when v lies in the span, otherwise the reduced remainder.
  std::vector<Rational> reduce(std::vector<Rational> v) const {
    for (std::size_t k = 0; k < echelon_.size(); ++k) {
      const Rational f = v[pivots_[k]];
      if (f.is_zero()) continue;
      for (std::size_t i = 0; i < dim_; ++i)
        if (!echelon_[k][i].is_zero()) v[i] -= f * echelon_[k][i];
    }
    for (const auto& x : v)
      if (!x.is_zero()) return v;
    return {};
  }

  std::size_t dim_;
  std::vector<std::vector<Rational>> vectors_;
  std::vector<std::vector<Rational>> echelon_;
  std::vector<std::size_t> pivots_;
};

inline std::vector<Rational> column_vector(const RationalMatrix& m, std::size_t c) {
  std::vector<Rational> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, c);
  return v;
}

// Standard basis vectors (first-fit in index order) completing the independent
// columns of `basis` to a basis of Q^n; returned as an n x (n - cols) matrix.
inline RationalMatrix complete_basis(const RationalMatrix& basis) {
  std::size_t n = basis.rows();
  IncrementalBasis span(n);
  for (std::size_t c = 0; c < basis.cols(); ++c)
    if (!span.add(column_vector(basis, c))) throw ArithmeticError("complete_basis: dependent columns");
  std::vector<std::size_t> picked;
  for (std::size_t k = 0; k < n && span.size() < n; ++k) {
    std::vector<Rational> e(n);
    e[k] = 1;
    if (span.add(e)) picked.push_back(k);
  }
  RationalMatrix out(n, picked.size());
  for (std::size_t j = 0; j < picked.size(); ++j) out(picked[j], j) = 1;
  return out;
}

// Basis (as columns) of the smallest A-invariant subspace containing range(B).
inline RationalMatrix controllable_subspace(const RationalMatrix& A, const RationalMatrix& B) {
  std::size_t n = A.rows();
  IncrementalBasis span(n);
  std::vector<RationalMatrix> frontier;
  for (std::size_t j = 0; j < B.cols(); ++j)
    if (span.add(column_vector(B, j))) frontier.push_back(B.col(j));
  while (!frontier.empty()) {
    std::vector<RationalMatrix> next;
    for (const auto& v : frontier) {
      RationalMatrix w = A * v;
      if (span.add(column_vector(w, 0))) next.push_back(w);
    }
    frontier = std::move(next);
  }
  return span.as_columns();
}

}  // namespace morgan
