#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "morgan/linalg.hpp"
#include "morgan/poly_matrix.hpp"

namespace morgan {

struct StateSpace {
  RationalMatrix A, B, C;

  std::size_t states() const { return A.rows(); }
  std::size_t inputs() const { return B.cols(); }
  std::size_t outputs() const { return C.rows(); }
};

// Lengths of the Krylov chains b_j, A b_j, ... kept when scanning
// [B, AB, A^2 B, ...] by power, then by input; indexed by original input.
inline std::vector<std::size_t> chain_lengths(const RationalMatrix& A, const RationalMatrix& B) {
  std::size_t n = A.rows(), l = B.cols();
  IncrementalBasis basis(n);
  std::vector<std::size_t> len(l, 0);
  std::vector<bool> alive(l, true);
  std::vector<RationalMatrix> power(l);
  for (std::size_t j = 0; j < l; ++j) power[j] = B.col(j);
  for (std::size_t k = 0; k < n; ++k) {
    bool any = false;
    for (std::size_t j = 0; j < l; ++j) {
      if (!alive[j]) continue;
      if (basis.add(column_vector(power[j], 0))) {
        ++len[j];
        power[j] = A * power[j];
        any = true;
      } else {
        alive[j] = false;
      }
    }
    if (!any) break;
  }
  if (basis.size() < n) throw NotControllable("controllability matrix has rank " + std::to_string(basis.size()) +
                                              " < " + std::to_string(n));
  return len;
}

inline std::vector<std::size_t> controllability_indices(const RationalMatrix& A, const RationalMatrix& B) {
  auto len = chain_lengths(A, B);
  std::sort(len.begin(), len.end());
  return len;
}

// 0-based state index of the last state of each chain.
inline std::vector<std::size_t> chain_ends(std::span<const std::size_t> sigma) {
  std::vector<std::size_t> ends;
  std::size_t acc = 0;
  for (auto s : sigma) {
    acc += s;
    ends.push_back(acc - 1);
  }
  return ends;
}

inline std::vector<std::size_t> chain_starts(std::span<const std::size_t> sigma) {
  std::vector<std::size_t> starts;
  std::size_t acc = 0;
  for (auto s : sigma) {
    starts.push_back(acc);
    acc += s;
  }
  return starts;
}

inline void validate(const StateSpace& sys) {
  std::size_t n = sys.A.rows();
  if (!sys.A.square()) throw InvalidSystem("A must be square");
  if (sys.B.rows() != n) throw InvalidSystem("B must have as many rows as A");
  if (sys.C.cols() != n) throw InvalidSystem("C must have as many columns as A");
  std::size_t l = sys.B.cols(), m = sys.C.rows();
  if (m == 0 || m > l || l > n)
    throw InvalidSystem("dimensions must satisfy 1 <= outputs <= inputs <= states (got " + std::to_string(m) +
                        ", " + std::to_string(l) + ", " + std::to_string(n) + ")");
  if (rank(sys.B) < l) throw InvalidSystem("B must have full column rank");
  chain_lengths(sys.A, sys.B);
}

// Controller (Popov) form: with T = P^{-1}, A_r = T A P has shift rows inside
// each chain, and B_r G_I = T B G_I is zero except for a unit row at each chain end.
struct ControllerForm {
  std::vector<std::size_t> sigma;        // chain lengths, nondecreasing
  std::vector<std::size_t> input_order;  // original input spanning chain i
  RationalMatrix P, P_inv, G_I;
  RationalMatrix A_r, B_r, B_rG;
  std::vector<std::size_t> ends;
};

inline ControllerForm controller_form(const RationalMatrix& A, const RationalMatrix& B) {
  std::size_t n = A.rows(), l = B.cols();
  auto len = chain_lengths(A, B);
  for (auto x : len)
    if (x == 0) throw InvalidSystem("B must have full column rank");

  // Chain vectors grouped by input, in original input order.
  RationalMatrix Mc(n, n);
  std::vector<std::size_t> offset(l);
  std::size_t col = 0;
  for (std::size_t j = 0; j < l; ++j) {
    offset[j] = col;
    RationalMatrix v = B.col(j);
    for (std::size_t k = 0; k < len[j]; ++k) {
      Mc.set_block(0, col++, v);
      v = A * v;
    }
  }
  RationalMatrix Mi = inverse(Mc);

  ControllerForm cf;
  cf.input_order.resize(l);
  std::iota(cf.input_order.begin(), cf.input_order.end(), 0);
  std::stable_sort(cf.input_order.begin(), cf.input_order.end(),
                   [&](std::size_t a, std::size_t b) { return len[a] < len[b]; });
  for (auto j : cf.input_order) cf.sigma.push_back(len[j]);

  RationalMatrix T(n, n);
  std::size_t r = 0;
  for (auto j : cf.input_order) {
    RationalMatrix q = Mi.row(offset[j] + len[j] - 1);
    for (std::size_t k = 0; k < len[j]; ++k) {
      T.set_block(r++, 0, q);
      q = q * A;
    }
  }
  cf.P_inv = T;
  cf.P = inverse(T);
  cf.A_r = T * A * cf.P;
  cf.B_r = T * B;
  cf.ends = chain_ends(cf.sigma);
  cf.G_I = inverse(select_rows(cf.B_r, cf.ends));
  cf.B_rG = cf.B_r * cf.G_I;

  std::vector<bool> is_end(n, false);
  for (auto e : cf.ends) is_end[e] = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational want = (!is_end[i] && j == i + 1) ? Rational(1) : Rational();
      if (!is_end[i] && cf.A_r(i, j) != want) throw Error("controller form: shift structure violated");
    }
    for (std::size_t j = 0; j < l; ++j) {
      Rational want = (is_end[i] && cf.ends[j] == i) ? Rational(1) : Rational();
      if (cf.B_rG(i, j) != want) throw Error("controller form: input structure violated");
    }
  }
  return cf;
}

// Pencil layout: the rows of sI - A_r split into the chain rows L(s)
// (Kronecker blocks) and the chain-end rows sK - Lambda.
struct PencilForm : ControllerForm {
  RationalMatrix C_r;
  std::vector<std::size_t> row_perm;  // pencil row k is row row_perm[k] of sI - A_r
  PolyMatrix L;
  RationalMatrix K, Lambda;

  std::size_t states() const { return A_r.rows(); }
  std::size_t inputs() const { return sigma.size(); }
  std::size_t outputs() const { return C_r.rows(); }

  PolyMatrix pencil() const {
    PolyMatrix low = to_poly(-Lambda);
    for (std::size_t i = 0; i < K.rows(); ++i)
      for (std::size_t j = 0; j < K.cols(); ++j)
        if (!K(i, j).is_zero()) low(i, j) += Poly::monomial(K(i, j), 1);
    return vstack(L, low);
  }
};

inline PencilForm to_pencil_form(const StateSpace& sys) {
  validate(sys);
  PencilForm pf;
  static_cast<ControllerForm&>(pf) = controller_form(sys.A, sys.B);
  std::size_t n = sys.states(), l = sys.inputs();
  pf.C_r = sys.C * pf.P;

  std::vector<bool> is_end(n, false);
  for (auto e : pf.ends) is_end[e] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_end[i]) pf.row_perm.push_back(i);
  pf.L = PolyMatrix(n - l, n);
  for (std::size_t k = 0; k < n - l; ++k) {
    std::size_t i = pf.row_perm[k];
    pf.L(k, i) = Poly::s();
    pf.L(k, i + 1) = Poly(-1);
  }
  pf.K = RationalMatrix(l, n);
  for (std::size_t i = 0; i < l; ++i) {
    pf.row_perm.push_back(pf.ends[i]);
    pf.K(i, pf.ends[i]) = 1;
  }
  pf.Lambda = select_rows(pf.A_r, pf.ends);

  PolyMatrix expect = s_minus(pf.A_r), got = pf.pencil();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      if (got(k, j) != expect(pf.row_perm[k], j)) throw Error("pencil form: reassembly mismatch");
  return pf;
}

inline PencilForm to_pencil_form(const RationalMatrix& A, const RationalMatrix& B, const RationalMatrix& C) {
  return to_pencil_form(StateSpace{A, B, C});
}

}  // namespace morgan
