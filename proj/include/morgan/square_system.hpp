#pragma once

#include <optional>
#include <vector>

#include "morgan/squaring.hpp"

namespace morgan {

inline constexpr long kNoRelativeDegree = -1;

// d_i = min{k : C_i A^k B != 0}, or kNoRelativeDegree when output i never sees the input.
inline std::vector<long> relative_degrees(const RationalMatrix& A, const RationalMatrix& B, const RationalMatrix& C) {
  std::vector<long> d(C.rows(), kNoRelativeDegree);
  for (std::size_t i = 0; i < C.rows(); ++i) {
    RationalMatrix ci = C.row(i);
    for (std::size_t k = 0; k < A.rows(); ++k) {
      if (!(ci * B).is_zero()) {
        d[i] = long(k);
        break;
      }
      ci = ci * A;
    }
  }
  return d;
}

// Rows C_i A^{d_i} B; zero rows where the relative degree is undefined.
inline RationalMatrix decoupling_matrix(const RationalMatrix& A, const RationalMatrix& B, const RationalMatrix& C,
                                        const std::vector<long>& d) {
  RationalMatrix out(C.rows(), B.cols());
  for (std::size_t i = 0; i < C.rows(); ++i) {
    if (d[i] == kNoRelativeDegree) continue;
    RationalMatrix ci = C.row(i);
    for (long k = 0; k < d[i]; ++k) ci = ci * A;
    out.set_block(i, 0, ci * B);
  }
  return out;
}

struct SquareSystem {
  RationalMatrix A, B, C;
  std::vector<std::size_t> sigma_tilde;
  std::size_t uncontrollable_dim = 0;
  std::vector<long> relative_degrees;
  RationalMatrix B_star;
};

inline SquareSystem make_square_system(const RationalMatrix& A, const RationalMatrix& B, const RationalMatrix& C,
                                       std::vector<std::size_t> sigma_tilde, std::size_t uncontrollable_dim) {
  SquareSystem sys{A, B, C, std::move(sigma_tilde), uncontrollable_dim, {}, {}};
  sys.relative_degrees = morgan::relative_degrees(A, B, C);
  sys.B_star = decoupling_matrix(A, B, C, sys.relative_degrees);
  return sys;
}

// A_f = Q^{-1}(A_r + B_r G_I F0) Q, B_f = Q^{-1} B_r G_I G0, C_f = C_r Q.
inline SquareSystem make_square_system(const PencilForm& pencil, const SquaringData& sq,
                                       const std::vector<std::size_t>& sigma_tilde) {
  RationalMatrix Qi = inverse(sq.Q);
  return make_square_system(Qi * (pencil.A_r + pencil.B_rG * sq.F0) * sq.Q, Qi * pencil.B_rG * sq.G0,
                            pencil.C_r * sq.Q, sigma_tilde, sq.uncontrollable_dim);
}

inline std::vector<Poly> default_diagonal_polys(const std::vector<long>& d) {
  std::vector<Poly> out;
  for (long di : d) {
    Poly p(1);
    for (long k = 0; k <= di; ++k) p *= Poly(std::vector<Rational>{1, 1});
    out.push_back(p);
  }
  return out;
}

struct DecouplingPair {
  RationalMatrix F, G;
};

// Static decoupling law u = -B*^{-1} [C_i p_i(A)] x + B*^{-1} w, giving H = diag(1/p_i).
inline DecouplingPair square_decouple(const SquareSystem& sys, const std::optional<std::vector<Poly>>& targets = {}) {
  const auto& d = sys.relative_degrees;
  std::size_t m = sys.C.rows();
  if (sys.B.cols() != m) throw DimensionError("square_decouple needs as many inputs as outputs");
  auto binv = try_inverse(sys.B_star);
  if (std::find(d.begin(), d.end(), kNoRelativeDegree) != d.end() || !binv)
    throw SingularBstar("decoupling matrix B* is singular");
  std::vector<Poly> p = targets ? *targets : default_diagonal_polys(d);
  if (p.size() != m) throw TargetDegreeMismatch("expected " + std::to_string(m) + " diagonal polynomials");
  for (std::size_t i = 0; i < m; ++i)
    if (p[i].degree() != d[i] + 1 || !p[i].is_monic())
      throw TargetDegreeMismatch("diagonal polynomial " + std::to_string(i + 1) + " must be monic of degree " +
                                 std::to_string(d[i] + 1));
  RationalMatrix stack(m, sys.A.rows());
  for (std::size_t i = 0; i < m; ++i) stack.set_block(i, 0, sys.C.row(i) * evaluate(p[i], sys.A));
  return {-(*binv * stack), *binv};
}

}  // namespace morgan
