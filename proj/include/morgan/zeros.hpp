#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "morgan/square_system.hpp"

namespace morgan {

// Characteristic polynomial of the map A induces on Q^n / <A|B>.
inline Poly uncontrollable_polynomial(const RationalMatrix& A, const RationalMatrix& B) {
  RationalMatrix K = controllable_subspace(A, B);
  std::size_t n = A.rows(), r = K.cols();
  if (r == n) return Poly(1);
  RationalMatrix T = hstack(K, complete_basis(K));
  RationalMatrix Abar = inverse(T) * A * T;
  return charpoly(Abar.block(r, r, n - r, n - r));
}

inline Poly unobservable_polynomial(const RationalMatrix& A, const RationalMatrix& C) {
  return uncontrollable_polynomial(A.transpose(), C.transpose());
}

inline Poly input_decoupling_zeros(const SquareSystem& sys) { return uncontrollable_polynomial(sys.A, sys.B); }

// det(C_f S_f(s)) divided by one gcd per row, with S_f = [0; S~(s)] in the
// quotient coordinates of the square system.
inline Poly fixed_decoupling_poles(const SquareSystem& sys) {
  std::size_t f = sys.uncontrollable_dim, n = sys.A.rows();
  PolyMatrix N = to_poly(sys.C.block(0, f, sys.C.rows(), n - f)) * build_S(sys.sigma_tilde);
  if (!N.square()) throw DimensionError("C_f S_f(s) must be square");
  Poly det = determinant(N);
  if (det.is_zero()) throw DegenerateNumerator("det(C_f S_f(s)) vanishes identically");
  for (std::size_t i = 0; i < N.rows(); ++i) {
    Poly g;
    for (std::size_t j = 0; j < N.cols(); ++j) g = gcd(g, N(i, j));
    det = exact_div(det, g);
  }
  return det.monic();
}

// Exact Routh-Hurwitz test: true iff every root has negative real part.
inline bool is_hurwitz(const Poly& p) {
  if (p.is_zero()) return false;
  long d = p.degree();
  if (d == 0) return true;
  Poly q = p.leading().sign() < 0 ? -p : p;
  for (long k = 0; k <= d; ++k)
    if (q.coeff(std::size_t(k)).sign() <= 0) return false;
  std::vector<Rational> prev, cur;
  for (long k = d; k >= 0; k -= 2) prev.push_back(q.coeff(std::size_t(k)));
  for (long k = d - 1; k >= 0; k -= 2) cur.push_back(q.coeff(std::size_t(k)));
  for (long row = 1; row <= d; ++row) {
    if (cur.empty() || cur[0].sign() <= 0) return false;
    std::vector<Rational> next;
    for (std::size_t k = 0; k + 1 < prev.size(); ++k) {
      Rational b = k + 1 < cur.size() ? cur[k + 1] : Rational();
      next.push_back((cur[0] * prev[k + 1] - prev[0] * b) / cur[0]);
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return true;
}

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class x, const mpz_class& limit) {
  x = abs(x);
  std::vector<mpz_class> out;
  if (x == 0 || x > limit) return out;
  for (mpz_class d = 1; d * d <= x; ++d)
    if (x % d == 0) {
      out.push_back(d);
      if (d * d != x) out.push_back(x / d);
    }
  return out;
}

}  // namespace detail

// Rational roots with multiplicity, in descending order.  Coefficients beyond
// 10^12 in the constant or leading term are not factored.
inline std::vector<Rational> rational_roots(Poly p) {
  std::vector<Rational> roots;
  if (p.degree() <= 0) return roots;
  while (p.degree() > 0 && p.coeff(0).is_zero()) {
    roots.push_back(Rational());
    p = exact_div(p, Poly::s());
  }
  if (p.degree() > 0) {
    mpz_class l = 1;
    for (const auto& c : p.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.raw().get_den_mpz_t());
    Rational scale_to_int{mpz_class(l)};
    Poly ip = p * scale_to_int;
    mpz_class limit("1000000000000");
    auto num = detail::divisors(ip.coeff(0).numerator(), limit);
    auto den = detail::divisors(ip.leading().numerator(), limit);
    for (const auto& a : num)
      for (const auto& b : den)
        for (int sign : {1, -1}) {
          Rational r(mpz_class(sign * a), b);
          while (p.degree() > 0 && p.eval(r).is_zero()) {
            roots.push_back(r);
            p = exact_div(p, Poly(std::vector<Rational>{-r, 1}));
          }
        }
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

// Companion matrix with first column -(c_{k-1}, ..., c_0) and ones above the diagonal.
inline RationalMatrix companion(const Poly& monic) {
  std::size_t k = std::size_t(std::max(0L, monic.degree()));
  RationalMatrix X(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    X(i, 0) = -monic.coeff(k - 1 - i);
    if (i + 1 < k) X(i, i + 1) = 1;
  }
  return X;
}

// Rational roots on the diagonal (descending), then the companion of what remains.
inline RationalMatrix target_matrix(const Poly& target) {
  auto roots = rational_roots(target);
  Poly rest = exact_div(target, Poly::from_roots(roots));
  std::size_t f = std::size_t(target.degree()), r = roots.size();
  RationalMatrix X(f, f);
  for (std::size_t i = 0; i < r; ++i) X(i, i) = roots[i];
  X.set_block(r, r, companion(rest.monic()));
  return X;
}

// K with charpoly(A - B K) = target, through the controller form of (A, B).
inline std::optional<RationalMatrix> place_poles(const RationalMatrix& A, const RationalMatrix& B, const Poly& target) {
  std::size_t n = A.rows();
  if (target.degree() != long(n) || !target.is_monic()) return std::nullopt;
  IncrementalBasis span(n);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < B.cols(); ++j)
    if (span.add(column_vector(B, j))) idx.push_back(j);
  if (idx.empty()) return std::nullopt;
  ControllerForm cf;
  try {
    cf = controller_form(A, select_cols(B, idx));
  } catch (const NotControllable&) {
    return std::nullopt;
  }
  std::size_t l = idx.size();
  RationalMatrix Fv(l, n);
  for (std::size_t b = 0; b < l; ++b) {
    RationalMatrix want(1, n);
    if (b + 1 < l) want(0, cf.ends[b] + 1) = 1;
    else
      for (std::size_t c = 0; c < n; ++c) want(0, c) = -target.coeff(c);
    Fv.set_block(b, 0, want - cf.A_r.row(cf.ends[b]));
  }
  RationalMatrix Ks = -(cf.G_I * Fv * cf.P_inv);
  RationalMatrix K(B.cols(), n);
  for (std::size_t k = 0; k < l; ++k) K.set_block(idx[k], 0, Ks.row(k));
  return K;
}

// Quotient dynamics as an affine function of the free feedback parameters:
// A11(T) = A11_0 + Bq T Cq, with T(i,k) = t_{i,k}.
struct ZeroAssignmentProblem {
  RationalMatrix A11_0, Bq, Cq;
  std::size_t rows = 0, free_per_row = 0;
  std::vector<ParamId> t_params;

  RationalMatrix T(const Assignment& t) const {
    RationalMatrix out(rows, free_per_row);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < free_per_row; ++k) {
        auto it = t.find(t_params[i * free_per_row + k]);
        if (it != t.end()) out(i, k) = it->second;
      }
    return out;
  }
  RationalMatrix A11(const Assignment& t) const { return A11_0 + Bq * T(t) * Cq; }

  ParamMatrix parametric() const {
    ParamMatrix out = A11_0.map([](const Rational& x) { return LinearForm(x); });
    for (std::size_t a = 0; a < out.rows(); ++a)
      for (std::size_t b = 0; b < out.cols(); ++b)
        for (std::size_t i = 0; i < rows; ++i)
          for (std::size_t k = 0; k < free_per_row; ++k)
            out(a, b) += LinearForm::param(t_params[i * free_per_row + k], Bq(a, i) * Cq(k, b));
    return out;
  }
};

// sq0 must be assembled with all t = 0.
inline ZeroAssignmentProblem zero_assignment_problem(const PencilForm& pencil, const RowConfig& config,
                                                     const MuSolver& mu, const SquaringData& sq0) {
  ZeroAssignmentProblem zp;
  std::size_t n = pencil.states(), f = sq0.uncontrollable_dim;
  RationalMatrix Qi = inverse(sq0.Q);
  RationalMatrix W = Qi.block(0, 0, f, n), QA = sq0.Q.block(0, 0, n, f);
  zp.A11_0 = W * (pencil.A_r + pencil.B_rG * sq0.F0) * QA;
  zp.rows = config.blocks.size();
  zp.free_per_row = mu.free_per_row;
  zp.t_params = mu.t_params();
  zp.Bq = RationalMatrix(f, zp.rows);
  for (std::size_t i = 0; i < zp.rows; ++i) zp.Bq.set_block(0, i, W.col(pencil.ends[config.blocks[i]]));
  zp.Cq = zp.free_per_row ? RationalMatrix(-(mu.directions.transpose() * QA)) : RationalMatrix(0, f);
  return zp;
}

struct BestEffortReport {
  ParamMatrix quotient;  // input decoupling zeros are det(sI - quotient(t))
  std::string reason;
};

using ZeroAssignment = std::variant<Assignment, BestEffortReport>;

inline ZeroAssignment assign_zeros(const ZeroAssignmentProblem& zp, const Poly& target) {
  std::size_t f = zp.A11_0.rows();
  if (target.degree() != long(f) || (f > 0 && !target.is_monic()))
    throw TargetDegreeMismatch("input decoupling zero target must be monic of degree " + std::to_string(f));
  if (f == 0) return Assignment{};
  std::size_t R = zp.rows, F = zp.free_per_row;
  auto to_assignment = [&](const RationalMatrix& T) {
    Assignment t;
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t k = 0; k < F; ++k) t[zp.t_params[i * F + k]] = T(i, k);
    return t;
  };

  // First try to make the quotient equal to a fixed matrix with the target charpoly.
  RationalMatrix X = target_matrix(target);
  RationalMatrix E(f * f, R * F), rhs(f * f, 1);
  for (std::size_t a = 0; a < f; ++a)
    for (std::size_t b = 0; b < f; ++b) {
      rhs(a * f + b, 0) = X(a, b) - zp.A11_0(a, b);
      for (std::size_t i = 0; i < R; ++i)
        for (std::size_t k = 0; k < F; ++k) E(a * f + b, i * F + k) = zp.Bq(a, i) * zp.Cq(k, b);
    }
  if (auto sol = solve_affine(E, rhs)) {
    RationalMatrix T(R, F);
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t k = 0; k < F; ++k) T(i, k) = sol->particular(i * F + k, 0);
    auto t = to_assignment(T);
    if (charpoly(zp.A11(t)) == target) return t;
  }

  // Otherwise place the quotient poles through (A11_0, Bq) and map back to T.
  if (F == f) {
    auto K = place_poles(zp.A11_0, zp.Bq, target);
    auto Ci = try_inverse(zp.Cq);
    if (K && Ci) {
      auto t = to_assignment(-(*K * *Ci));
      if (charpoly(zp.A11(t)) == target) return t;
    }
  }
  return BestEffortReport{zp.parametric(), "target " + target.to_string() +
                                               " is not reachable by the free feedback-row parameters"};
}

struct FixedPoleReport {
  Poly input_dz;
  Poly fixed_dec;
  std::vector<ParamId> free_params;
  Assignment t_values;
  bool input_dz_stable = true;
  bool fixed_dec_stable = true;
};

inline FixedPoleReport fixed_pole_report(const SquareSystem& sys, const std::vector<ParamId>& free_params,
                                         const Assignment& t_values) {
  FixedPoleReport r;
  r.input_dz = input_decoupling_zeros(sys);
  r.fixed_dec = fixed_decoupling_poles(sys);
  r.free_params = free_params;
  r.t_values = t_values;
  r.input_dz_stable = is_hurwitz(r.input_dz);
  r.fixed_dec_stable = is_hurwitz(r.fixed_dec);
  return r;
}

}  // namespace morgan
