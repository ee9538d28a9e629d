#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "morgan/admissible.hpp"
#include "morgan/canonical.hpp"
#include "morgan/param.hpp"

namespace morgan {

// Parametric basis Q_B of the closed-loop controllable subspace for a target
// index tuple.  Block (i,j) is a Toeplitz band of sigma~_j - sigma_i + 1
// parameters when sigma~_j >= sigma_i and zero otherwise.
struct QBasis {
  std::vector<std::size_t> sigma, sigma_tilde;
  std::vector<std::size_t> row_offsets, col_offsets;
  ParamMatrix QB;
  std::vector<ParamId> params;

  std::size_t states() const { return QB.rows(); }
  std::size_t width() const { return QB.cols(); }
  std::size_t last_col(std::size_t j) const { return col_offsets[j] + sigma_tilde[j] - 1; }
  std::size_t max_tilde() const { return *std::max_element(sigma_tilde.begin(), sigma_tilde.end()); }
};

inline QBasis build_QB(const std::vector<std::size_t>& sigma, const std::vector<std::size_t>& sigma_tilde) {
  QBasis qb;
  qb.sigma = sigma;
  qb.sigma_tilde = sigma_tilde;
  qb.row_offsets = chain_starts(sigma);
  qb.col_offsets = chain_starts(sigma_tilde);
  qb.QB = ParamMatrix(sum(sigma), sum(sigma_tilde));
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = 0; j < sigma_tilde.size(); ++j) {
      if (sigma_tilde[j] < sigma[i]) continue;
      std::size_t band = sigma_tilde[j] - sigma[i];
      for (std::size_t k = 0; k <= band; ++k)
        qb.params.push_back(ParamId::q(int(i + 1), int(j + 1), int(k + 1)));
      for (std::size_t r = 0; r < sigma[i]; ++r)
        for (std::size_t k = 0; k <= band; ++k)
          qb.QB(qb.row_offsets[i] + r, qb.col_offsets[j] + r + k) =
              LinearForm::param(ParamId::q(int(i + 1), int(j + 1), int(k + 1)));
    }
  std::sort(qb.params.begin(), qb.params.end());
  return qb;
}

// N^(s) = C_r Q_B S~(s) diag(s^{max sigma~ - sigma~_j}); entry (r,j) has its
// coefficients read straight off C_r Q_B.
template <class T>
Matrix<std::conditional_t<std::is_same_v<T, LinearForm>, ParamPoly, Poly>> shifted_numerator(
    const Matrix<T>& CQ, const QBasis& qb) {
  using P = std::conditional_t<std::is_same_v<T, LinearForm>, ParamPoly, Poly>;
  std::size_t top = qb.max_tilde();
  Matrix<P> out(CQ.rows(), qb.sigma_tilde.size());
  for (std::size_t r = 0; r < CQ.rows(); ++r)
    for (std::size_t j = 0; j < qb.sigma_tilde.size(); ++j) {
      std::vector<T> c(top);
      std::size_t shift = top - qb.sigma_tilde[j];
      for (std::size_t k = 0; k < qb.sigma_tilde[j]; ++k) c[shift + k] = CQ(r, qb.col_offsets[j] + k);
      out(r, j) = P(std::move(c));
    }
  return out;
}

// Highest column coefficients of D~(s) = (sK_b - Lambda_b) Q_B S~(s): the
// Q_B entries at the chain ends of the complementary rows, last column of each block.
template <class T>
Matrix<T> denominator_high_coeff(const Matrix<T>& QB, const QBasis& qb, const std::vector<std::size_t>& ends,
                                 const std::vector<std::size_t>& rows) {
  Matrix<T> out(rows.size(), qb.sigma_tilde.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < qb.sigma_tilde.size(); ++j) out(i, j) = QB(ends[rows[i]], qb.last_col(j));
  return out;
}

// Entries of Q_B that must vanish so that the feedback rows can be matched.
inline std::vector<LinearForm> feedback_row_forms(const QBasis& qb, const std::vector<std::size_t>& ends,
                                                  const RowConfig& config) {
  std::vector<LinearForm> forms;
  for (auto b : config.blocks)
    for (std::size_t j = 0; j < qb.sigma_tilde.size(); ++j) forms.push_back(qb.QB(ends[b], qb.last_col(j)));
  return forms;
}

inline ConstraintSet feedback_row_constraints(const QBasis& qb, const std::vector<std::size_t>& ends,
                                              const RowConfig& config) {
  auto forms = feedback_row_forms(qb, ends, config);
  return solve_zero_constraints(forms);
}

struct DecouplabilityReport {
  bool success = false;
  ConstraintSet constraints;
  std::vector<long> degree_deficits;  // relative to the unconstrained bound max sigma~ - 1
  std::vector<long> row_degrees;      // degree at which each N^ row is read
  ParamMatrix N_alpha;
  ParamMatrix D_hc;
  std::size_t candidates = 0;
  std::string diagnostics;
};

// Calls visit(deficits) over 0 <= e_r <= bound_r by ascending total, then
// lexicographically; stops when visit returns true.
inline void for_each_deficit(const std::vector<long>& bound, const std::function<bool(const std::vector<long>&)>& visit) {
  long total = 0;
  for (auto b : bound) total += b;
  std::vector<long> e(bound.size());
  bool stop = false;
  std::function<void(std::size_t, long)> rec = [&](std::size_t r, long left) {
    if (stop) return;
    if (r + 1 == bound.size()) {
      if (left <= bound[r]) {
        e[r] = left;
        stop = visit(e);
      }
      return;
    }
    for (long v = 0; v <= std::min(left, bound[r]) && !stop; ++v) {
      e[r] = v;
      rec(r + 1, left - v);
    }
  };
  for (long t = 0; t <= total && !stop; ++t) rec(0, t);
}

// Searches degree-deficit vectors: each one asks the coefficients of N^ row r
// above degree D_r - e_r to vanish and reads N_alpha at that degree.
inline DecouplabilityReport decouplability_search(const RationalMatrix& C_r, const PencilForm& pencil,
                                                  const QBasis& qb, const RowConfig& config, Rng& rng) {
  DecouplabilityReport rep;
  std::size_t m = qb.sigma_tilde.size();
  ConstraintSet base = feedback_row_constraints(qb, pencil.ends, config);
  auto Nhat = base.apply(shifted_numerator(C_r * qb.QB, qb));
  auto D = row_degrees(Nhat);
  for (std::size_t r = 0; r < m; ++r)
    if (D[r] == kZeroDegree) {
      rep.diagnostics = "output " + std::to_string(r + 1) + " vanishes under the feedback-row constraints";
      return rep;
    }
  ParamMatrix Dhc_all = denominator_high_coeff(qb.QB, qb, pencil.ends, config.complement(pencil.inputs()));
  std::size_t inconsistent = 0, collapsed = 0, n_alpha = 0, qb_deficient = 0, dhc_deficient = 0;
  long top = long(qb.max_tilde()) - 1;

  for_each_deficit(D, [&](const std::vector<long>& e) {
    ++rep.candidates;
    std::vector<LinearForm> forms;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t j = 0; j < m; ++j)
        for (long k = D[r] - e[r] + 1; k <= D[r]; ++k) {
          LinearForm f = Nhat(r, j).coeff(std::size_t(k));
          if (!f.is_zero()) forms.push_back(std::move(f));
        }
    ConstraintSet extra;
    try {
      extra = solve_zero_constraints(forms);
    } catch (const Inconsistent&) {
      ++inconsistent;
      return false;
    }
    auto N = extra.apply(Nhat);
    auto actual = row_degrees(N);
    std::vector<long> g(m);
    for (std::size_t r = 0; r < m; ++r) {
      g[r] = D[r] - e[r];
      if (actual[r] != g[r]) {
        ++collapsed;
        return false;
      }
    }
    ParamMatrix Na = high_row_coeff(N, g);
    ConstraintSet all = base;
    all.extend(extra);
    ParamMatrix Dhc = all.apply(Dhc_all);
    bool na_ok = generic_rank(Na, rng) == m;
    bool qb_ok = generic_rank(all.apply(qb.QB), rng) == qb.width();
    bool dhc_ok = generic_rank(Dhc, rng) == m;
    n_alpha += !na_ok;
    qb_deficient += !qb_ok;
    dhc_deficient += !dhc_ok;
    if (!(na_ok && qb_ok && dhc_ok)) return false;
    rep.success = true;
    rep.constraints = std::move(all);
    rep.row_degrees = g;
    for (std::size_t r = 0; r < m; ++r) rep.degree_deficits.push_back(top - g[r]);
    rep.N_alpha = std::move(Na);
    rep.D_hc = std::move(Dhc);
    return true;
  });

  if (!rep.success) {
    rep.diagnostics = "no degree-deficit vector works: of " + std::to_string(rep.candidates) + " candidates, " +
                      std::to_string(collapsed + inconsistent) + " collapse a row below its target degree; " +
                      "among the rest N_alpha is rank-deficient " + std::to_string(n_alpha) + " times, Q_B " +
                      std::to_string(qb_deficient) + " times, [D~]_hc " + std::to_string(dhc_deficient) + " times";
  }
  return rep;
}

// Numeric checks that a concrete Q_B keeps every rank condition.
struct NumericChecks {
  bool qb_full = false;
  bool n_alpha_full = false;
  bool d_hc_full = false;
  bool ok() const { return qb_full && n_alpha_full && d_hc_full; }
};

inline NumericChecks check_instance(const RationalMatrix& C_r, const PencilForm& pencil, const QBasis& qb,
                                    const RowConfig& config, const RationalMatrix& QBn) {
  NumericChecks c;
  std::size_t m = qb.sigma_tilde.size();
  c.qb_full = rank(QBn) == qb.width();
  auto N = shifted_numerator(C_r * QBn, qb);
  auto deg = row_degrees(N);
  bool rows_alive = std::none_of(deg.begin(), deg.end(), [](long d) { return d == kZeroDegree; });
  c.n_alpha_full = rows_alive && rank(high_row_coeff(N, deg)) == m;
  c.d_hc_full = rank(denominator_high_coeff(QBn, qb, pencil.ends, config.complement(pencil.inputs()))) == m;
  return c;
}

struct Instantiation {
  Assignment q_values;  // every Q_B parameter, bound ones included
  RationalMatrix QB;
};

inline constexpr long kInstanceBound = 5;
inline constexpr int kInstanceTries = 32;

// Random small-integer values for the free parameters until all numeric checks pass.
inline std::optional<Instantiation> instantiate_configuration(const RationalMatrix& C_r, const PencilForm& pencil,
                                                              const QBasis& qb, const RowConfig& config,
                                                              const ConstraintSet& constraints, Rng& rng,
                                                              int tries = kInstanceTries) {
  std::set<ParamId> free;
  for (const auto& id : qb.params)
    if (!constraints.binds(id)) free.insert(id);
  for (int t = 0; t < tries; ++t) {
    Instantiation inst;
    inst.q_values = constraints.complete(random_assignment(free, rng, kInstanceBound));
    inst.QB = instantiate(qb.QB, inst.q_values);
    if (check_instance(C_r, pencil, qb, config, inst.QB).ok()) return inst;
  }
  return std::nullopt;
}

// Uses caller-supplied values; unspecified parameters default to zero.
inline Instantiation instantiate_with(const QBasis& qb, const ConstraintSet& constraints, const Assignment& values) {
  Instantiation inst;
  for (const auto& id : qb.params) {
    auto it = values.find(id);
    inst.q_values[id] = it == values.end() ? Rational() : it->second;
  }
  for (const auto& [id, rhs] : constraints.substitutions())
    if (rhs.evaluate(inst.q_values) != inst.q_values[id])
      throw Inconsistent("supplied value of " + id.name() + " violates " + id.name() + " = " + rhs.to_string());
  inst.QB = instantiate(qb.QB, inst.q_values);
  return inst;
}

// Affine families of feedback rows mu^i(t) = particular_i + directions * t_i,
// solving Q_B^T mu^T = rhs_i; free coordinates are the leftmost non-pivots.
struct MuSolver {
  std::size_t free_per_row = 0;
  std::vector<RationalMatrix> particular;  // n x 1 per configured row
  RationalMatrix directions;               // n x free_per_row, shared by all rows
  std::vector<std::size_t> free_coordinates;

  std::size_t rows() const { return particular.size(); }

  ParamId t_param(std::size_t row, std::size_t k) const { return ParamId::t(int(row * free_per_row + k + 1)); }

  std::vector<ParamId> t_params() const {
    std::vector<ParamId> out;
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t k = 0; k < free_per_row; ++k) out.push_back(t_param(i, k));
    return out;
  }

  // Row i as a 1 x n matrix; missing t values are taken as zero.
  RationalMatrix row(std::size_t i, const Assignment& t) const {
    RationalMatrix mu = particular[i];
    for (std::size_t k = 0; k < free_per_row; ++k) {
      auto it = t.find(t_param(i, k));
      if (it == t.end() || it->second.is_zero()) continue;
      mu += scale(it->second, directions.col(k));
    }
    return mu.transpose();
  }

  ParamMatrix parametric_row(std::size_t i) const {
    ParamMatrix out(1, particular[i].rows());
    for (std::size_t c = 0; c < out.cols(); ++c) {
      LinearForm f(particular[i](c, 0));
      for (std::size_t k = 0; k < free_per_row; ++k) f += LinearForm::param(t_param(i, k), directions(c, k));
      out(0, c) = f;
    }
    return out;
  }
};

inline MuSolver solve_feedback_rows(const QBasis& qb, const std::vector<std::size_t>& ends, const RowConfig& config,
                                    const RationalMatrix& QBn) {
  MuSolver mu;
  std::size_t n = QBn.rows(), w = QBn.cols();
  RationalMatrix W = QBn.transpose();
  std::vector<std::size_t> order(n);
  for (std::size_t c = 0; c < n; ++c) order[c] = n - 1 - c;
  for (auto b : config.blocks) {
    std::size_t p = ends[b];
    RationalMatrix rhs(w, 1);
    for (std::size_t j = 0; j < qb.sigma_tilde.size(); ++j) {
      if (!QBn(p, qb.last_col(j)).is_zero())
        throw NotSolvable("feedback row at s-position " + std::to_string(p + 1) + " cannot match block " +
                          std::to_string(j + 1));
      for (std::size_t k = 1; k < qb.sigma_tilde[j]; ++k)
        rhs(qb.col_offsets[j] + k, 0) = -QBn(p, qb.col_offsets[j] + k - 1);
    }
    auto sol = solve_affine(W, rhs, order);
    if (!sol) throw NotSolvable("feedback row system at s-position " + std::to_string(p + 1) + " is inconsistent");
    mu.particular.push_back(sol->particular);
    mu.directions = -sol->nullspace;
    mu.free_coordinates = sol->free_vars;
    mu.free_per_row = sol->free_vars.size();
  }
  return mu;
}

struct SquaringData {
  RationalMatrix Q;   // [Q_A | Q_B]
  RationalMatrix QB;
  std::size_t uncontrollable_dim = 0;  // columns of Q_A
  RationalMatrix F0, G0;
  std::vector<RationalMatrix> mu_rows;
  Assignment q_values, t_values;
};

// Preliminary feedback F0 (rows at the configured chains), input selector G0
// and the similarity Q completing Q_B with standard basis vectors.
inline SquaringData assemble_squaring(const PencilForm& pencil, const QBasis& qb, const RowConfig& config,
                                      const MuSolver& mu, const Instantiation& inst, const Assignment& t_values) {
  SquaringData sq;
  std::size_t n = pencil.states(), l = pencil.inputs();
  if (rank(inst.QB) < qb.width()) throw SingularQ("Q_B does not have full column rank");
  sq.QB = inst.QB;
  RationalMatrix QA = complete_basis(inst.QB);
  sq.uncontrollable_dim = QA.cols();
  sq.Q = hstack(QA, inst.QB);
  sq.q_values = inst.q_values;
  sq.t_values = t_values;

  sq.F0 = RationalMatrix(l, n);
  auto S = build_S(qb.sigma_tilde);
  PolyMatrix QBS = to_poly(inst.QB) * S;
  for (std::size_t i = 0; i < config.blocks.size(); ++i) {
    std::size_t b = config.blocks[i];
    RationalMatrix row = mu.row(i, t_values);
    sq.mu_rows.push_back(row);
    sq.F0.set_block(b, 0, -pencil.Lambda.row(b) - row);
    // Row of sI - (A_r + B_r G_I F0) at the chain end must annihilate Q_B S~(s).
    PolyMatrix M = to_poly(row);
    M(0, pencil.ends[b]) += Poly::s();
    if (!(M * QBS).is_zero()) throw Error("feedback row does not annihilate Q_B S~(s)");
  }

  std::size_t m = l - config.blocks.size();
  sq.G0 = RationalMatrix(l, m);
  auto keep = config.complement(l);
  for (std::size_t k = 0; k < m; ++k) sq.G0(keep[k], k) = 1;
  return sq;
}

}  // namespace morgan
