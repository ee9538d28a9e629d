#pragma once

#include <span>
#include <string>
#include <vector>

#include "morgan/linalg.hpp"
#include "morgan/matrix.hpp"
#include "morgan/poly.hpp"

namespace morgan {

// Works for any matrix whose entries expose degree() and coeff(k),
// i.e. both PolyMatrix and the parametric variant.
template <class P>
std::vector<long> row_degrees(const Matrix<P>& m) {
  std::vector<long> d(m.rows(), kZeroDegree);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i] = std::max(d[i], m(i, j).degree());
  return d;
}

template <class P>
std::vector<long> col_degrees(const Matrix<P>& m) {
  std::vector<long> d(m.cols(), kZeroDegree);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[j] = std::max(d[j], m(i, j).degree());
  return d;
}

template <class P>
auto high_row_coeff(const Matrix<P>& m, std::span<const long> degrees) {
  using C = typename P::value_type;
  if (degrees.size() != m.rows()) throw DimensionError("one degree per row expected");
  Matrix<C> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      long d = m(i, j).degree();
      if (d == kZeroDegree) continue;
      if (d > degrees[i])
        throw DegreeExceeded("entry (" + std::to_string(i) + "," + std::to_string(j) + ") has degree " +
                             std::to_string(d) + " above row degree " + std::to_string(degrees[i]));
      if (degrees[i] >= 0) out(i, j) = m(i, j).coeff(static_cast<std::size_t>(degrees[i]));
    }
  return out;
}

template <class P>
auto high_col_coeff(const Matrix<P>& m, std::span<const long> degrees) {
  if (degrees.size() != m.cols()) throw DimensionError("one degree per column expected");
  return high_row_coeff(m.transpose(), degrees).transpose();
}

// Determinant by fraction-free elimination over Q[s].
inline Poly determinant(const PolyMatrix& m) {
  if (!m.square()) throw DimensionError("determinant of a non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return Poly(1);
  PolyMatrix a = m;
  Poly prev(1);
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k).is_zero()) ++p;
    if (p == n) return Poly();
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = exact_div(a(k, k) * a(i, j) - a(i, k) * a(k, j), prev);
      a(i, k) = Poly();
    }
    prev = a(k, k);
  }
  return sign < 0 ? -a(n - 1, n - 1) : a(n - 1, n - 1);
}

struct Resolvent {
  std::vector<RationalMatrix> adjugate_coeffs;  // coefficient of s^k in adj(sI - A)
  Poly charpoly;                                // det(sI - A), monic

  PolyMatrix adjugate() const {
    std::size_t n = adjugate_coeffs.empty() ? 0 : adjugate_coeffs[0].rows();
    PolyMatrix out(n, n);
    for (std::size_t k = 0; k < adjugate_coeffs.size(); ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!adjugate_coeffs[k](i, j).is_zero()) out(i, j) += Poly::monomial(adjugate_coeffs[k](i, j), k);
    return out;
  }
};

inline constexpr std::size_t kDefaultResolventLimit = 64;

inline Rational trace(const RationalMatrix& m) {
  Rational t;
  for (std::size_t i = 0; i < m.rows() && i < m.cols(); ++i) t += m(i, i);
  return t;
}

// Faddeev-LeVerrier recurrence.
inline Resolvent resolvent(const RationalMatrix& A, std::size_t max_dim = kDefaultResolventLimit) {
  if (!A.square()) throw DimensionError("resolvent of a non-square matrix");
  std::size_t n = A.rows();
  if (n > max_dim) throw SizeLimitExceeded("resolvent limited to n <= " + std::to_string(max_dim));
  Resolvent res;
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  res.adjugate_coeffs.assign(n, RationalMatrix(n, n));
  if (n == 0) {
    res.charpoly = Poly(1);
    return res;
  }
  RationalMatrix M = RationalMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    res.adjugate_coeffs[n - k] = M;
    RationalMatrix AM = A * M;
    c[n - k] = -trace(AM) / Rational(static_cast<long>(k));
    if (k < n) {
      M = AM;
      for (std::size_t i = 0; i < n; ++i) M(i, i) += c[n - k];
    }
  }
  res.charpoly = Poly(std::move(c));
  return res;
}

inline Poly charpoly(const RationalMatrix& A) { return resolvent(A).charpoly; }

// p(A) by Horner's rule.
inline RationalMatrix evaluate(const Poly& p, const RationalMatrix& A) {
  std::size_t n = A.rows();
  RationalMatrix acc(n, n);
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = A * acc;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += c[k];
  }
  return acc;
}

// num/den in lowest terms with a monic denominator.
struct RationalFunction {
  Poly num;
  Poly den = Poly(1);

  RationalFunction() = default;
  RationalFunction(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) { normalize(); }

  bool is_zero() const { return num.is_zero(); }

  void normalize() {
    if (den.is_zero()) throw ArithmeticError("rational function with zero denominator");
    if (num.is_zero()) {
      den = Poly(1);
      return;
    }
    Poly g = gcd(num, den);
    num = exact_div(num, g);
    den = exact_div(den, g);
    Rational lc = den.leading();
    num *= lc.inverse();
    den *= lc.inverse();
  }

  std::string to_string() const {
    if (num.is_zero()) return "0";
    std::string n = num.to_string(), d = den.to_string();
    if (den == Poly(1)) return n;
    std::size_t terms = 0;
    for (const auto& x : num.coefficients()) terms += !x.is_zero();
    if (terms > 1) n = "(" + n + ")";
    return n + "/(" + d + ")";
  }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend std::ostream& operator<<(std::ostream& os, const RationalFunction& h) { return os << h.to_string(); }
};

using TransferMatrix = Matrix<RationalFunction>;

// Exact H(s) = C (sI - A - BF)^{-1} B G.
inline TransferMatrix transfer_function(const RationalMatrix& A, const RationalMatrix& B, const RationalMatrix& C,
                                        const RationalMatrix& F, const RationalMatrix& G) {
  if (!A.square() || B.rows() != A.rows() || C.cols() != A.rows() || F.rows() != B.cols() ||
      F.cols() != A.rows() || G.rows() != B.cols())
    throw DimensionError("transfer_function shape mismatch");
  Resolvent res = resolvent(A + B * F);
  RationalMatrix BG = B * G;
  std::size_t m = C.rows(), p = G.cols();
  std::vector<RationalMatrix> coeffs;
  for (const auto& Mk : res.adjugate_coeffs) coeffs.push_back(C * Mk * BG);
  TransferMatrix H(m, p);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<Rational> c(coeffs.size());
      for (std::size_t k = 0; k < coeffs.size(); ++k) c[k] = coeffs[k](i, j);
      H(i, j) = RationalFunction(Poly(std::move(c)), res.charpoly);
    }
  return H;
}

// Matrix of power columns diag([1, s, ..., s^{sigma_i - 1}]^T).
inline PolyMatrix build_S(std::span<const std::size_t> sigma) {
  std::size_t n = 0;
  for (auto x : sigma) n += x;
  PolyMatrix S(n, sigma.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t k = 0; k < sigma[i]; ++k) S(r++, i) = Poly::monomial(1, k);
  return S;
}

inline PolyMatrix s_minus(const RationalMatrix& A) {
  PolyMatrix out = to_poly(-A);
  for (std::size_t i = 0; i < A.rows(); ++i) out(i, i) += Poly::s();
  return out;
}

}  // namespace morgan
