#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "morgan/linalg.hpp"
#include "morgan/matrix.hpp"
#include "morgan/rng.hpp"

namespace morgan {

// Name of a free parameter: q^{i,j}_k of the Q_B band structure, or t_k
// for the free feedback-row parameters.  Indices are 1-based.
struct ParamId {
  enum class Space : int { q = 0, t = 1 };
  Space space = Space::q;
  int i = 0;
  int j = 0;
  int k = 0;

  static ParamId q(int i, int j, int k) { return {Space::q, i, j, k}; }
  static ParamId t(int k) { return {Space::t, 0, 0, k}; }

  std::string name() const {
    if (space == Space::t) return "t" + std::to_string(k);
    return "q^{" + std::to_string(i) + "," + std::to_string(j) + "}_" + std::to_string(k);
  }

  friend auto operator<=>(const ParamId&, const ParamId&) = default;
};

using Assignment = std::map<ParamId, Rational>;

// Affine expression constant + sum coeff * param.
class LinearForm {
 public:
  using Terms = std::map<ParamId, Rational>;

  LinearForm() = default;
  LinearForm(const Rational& constant) : constant_(constant) {}
  LinearForm(long constant) : constant_(constant) {}
  LinearForm(int constant) : constant_(constant) {}

  static LinearForm param(const ParamId& id, const Rational& coeff = 1) {
    LinearForm f;
    if (!coeff.is_zero()) f.terms_.emplace(id, coeff);
    return f;
  }

  const Rational& constant() const { return constant_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return constant_.is_zero() && terms_.empty(); }
  bool is_constant() const { return terms_.empty(); }
  Rational coefficient(const ParamId& id) const {
    auto it = terms_.find(id);
    return it == terms_.end() ? Rational() : it->second;
  }

  LinearForm& operator+=(const LinearForm& o) {
    constant_ += o.constant_;
    for (const auto& [id, c] : o.terms_) add_term(id, c);
    return *this;
  }
  LinearForm& operator-=(const LinearForm& o) {
    constant_ -= o.constant_;
    for (const auto& [id, c] : o.terms_) add_term(id, -c);
    return *this;
  }
  LinearForm& operator*=(const Rational& r) {
    if (r.is_zero()) return *this = LinearForm();
    constant_ *= r;
    for (auto& [id, c] : terms_) c *= r;
    return *this;
  }
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator-(LinearForm a) { return a *= Rational(-1); }
  friend LinearForm operator*(LinearForm a, const Rational& r) { return a *= r; }
  friend LinearForm operator*(const Rational& r, LinearForm a) { return a *= r; }
  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }

  Rational evaluate(const Assignment& values) const {
    Rational v = constant_;
    for (const auto& [id, c] : terms_) {
      auto it = values.find(id);
      if (it == values.end()) throw MissingParameter("no value for parameter " + id.name());
      v += c * it->second;
    }
    return v;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [id, c] : terms_) {
      bool neg = c.sign() < 0;
      if (!out.empty()) out += neg ? "-" : "+";
      else if (neg) out += "-";
      if (!c.abs().is_one()) out += c.abs().to_string() + "*";
      out += id.name();
    }
    if (!constant_.is_zero() || out.empty()) {
      if (!out.empty() && constant_.sign() > 0) out += "+";
      out += constant_.to_string();
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const LinearForm& f) { return os << f.to_string(); }

 private:
  void add_term(const ParamId& id, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(id, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Rational constant_;
  Terms terms_;
};

using ParamMatrix = Matrix<LinearForm>;

// Polynomial in s with affine coefficients; trailing structurally zero forms are trimmed.
class ParamPoly {
 public:
  using value_type = LinearForm;

  ParamPoly() = default;
  explicit ParamPoly(std::vector<LinearForm> c) : c_(std::move(c)) { trim(); }

  long degree() const { return c_.empty() ? kZeroDegree : static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  LinearForm coeff(std::size_t k) const { return k < c_.size() ? c_[k] : LinearForm(); }
  const std::vector<LinearForm>& coefficients() const { return c_; }

  ParamPoly& operator+=(const ParamPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.c_ == b.c_; }
  friend std::ostream& operator<<(std::ostream& os, const ParamPoly& p) {
    for (std::size_t k = p.c_.size(); k-- > 0;)
      if (!p.c_[k].is_zero()) os << "(" << p.c_[k] << ")s^" << k << " ";
    return os;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<LinearForm> c_;
};

using ParamPolyMatrix = Matrix<ParamPoly>;

template <class M>
std::set<ParamId> parameters(const M& m);

inline void collect_parameters(const LinearForm& f, std::set<ParamId>& out) {
  for (const auto& [id, c] : f.terms()) out.insert(id);
}
inline void collect_parameters(const ParamPoly& p, std::set<ParamId>& out) {
  for (const auto& f : p.coefficients()) collect_parameters(f, out);
}

template <class M>
std::set<ParamId> parameters(const M& m) {
  std::set<ParamId> out;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) collect_parameters(m(i, j), out);
  return out;
}

// Ordered substitutions param -> form, kept fully reduced: no bound parameter
// occurs on any right-hand side, so a single application pass is a closure.
class ConstraintSet {
 public:
  const std::map<ParamId, LinearForm>& substitutions() const { return subs_; }
  bool empty() const { return subs_.empty(); }
  std::size_t size() const { return subs_.size(); }
  bool binds(const ParamId& id) const { return subs_.count(id) > 0; }

  LinearForm apply(const LinearForm& f) const {
    if (subs_.empty()) return f;
    LinearForm out(f.constant());
    for (const auto& [id, c] : f.terms()) {
      auto it = subs_.find(id);
      out += it == subs_.end() ? LinearForm::param(id, c) : c * it->second;
    }
    return out;
  }
  ParamPoly apply(const ParamPoly& p) const {
    std::vector<LinearForm> c;
    for (const auto& f : p.coefficients()) c.push_back(apply(f));
    return ParamPoly(std::move(c));
  }
  template <class T>
  Matrix<T> apply(const Matrix<T>& m) const {
    return m.map([this](const T& x) { return apply(x); });
  }

  // Adds substitutions that were solved on forms already reduced by this set.
  void extend(const ConstraintSet& later) {
    for (auto& [id, rhs] : subs_) rhs = later.apply(rhs);
    for (const auto& [id, rhs] : later.subs_) subs_[id] = rhs;
  }

  // Values of the bound parameters implied by values of the free ones.
  Assignment complete(const Assignment& free_values) const {
    Assignment out = free_values;
    for (const auto& [id, rhs] : subs_) out[id] = rhs.evaluate(free_values);
    return out;
  }

  void bind(const ParamId& id, const LinearForm& rhs) { subs_[id] = rhs; }

  friend bool operator==(const ConstraintSet& a, const ConstraintSet& b) { return a.subs_ == b.subs_; }

 private:
  std::map<ParamId, LinearForm> subs_;
};

// Makes every listed form vanish identically.  Pivot parameters are taken in
// ParamId order, so the smallest parameter of each equation gets eliminated.
inline ConstraintSet solve_zero_constraints(std::span<const LinearForm> forms) {
  std::set<ParamId> ids;
  for (const auto& f : forms) collect_parameters(f, ids);
  std::vector<ParamId> order(ids.begin(), ids.end());
  std::map<ParamId, std::size_t> col;
  for (std::size_t k = 0; k < order.size(); ++k) col[order[k]] = k;
  std::size_t P = order.size();
  RationalMatrix a(forms.size(), P + 1);
  for (std::size_t r = 0; r < forms.size(); ++r) {
    for (const auto& [id, c] : forms[r].terms()) a(r, col[id]) = c;
    a(r, P) = forms[r].constant();
  }
  Rref red = rref(std::move(a), iota_order(P));
  for (std::size_t r = red.pivot_cols.size(); r < forms.size(); ++r)
    if (!red.matrix(r, P).is_zero()) throw Inconsistent("constraint forms are inconsistent");
  ConstraintSet out;
  for (std::size_t r = 0; r < red.pivot_cols.size(); ++r) {
    LinearForm rhs(-red.matrix(r, P));
    for (std::size_t c = 0; c < P; ++c)
      if (c != red.pivot_cols[r] && !red.matrix(r, c).is_zero()) rhs -= LinearForm::param(order[c], red.matrix(r, c));
    out.bind(order[red.pivot_cols[r]], rhs);
  }
  return out;
}

inline RationalMatrix instantiate(const ParamMatrix& m, const Assignment& values) {
  return m.map([&](const LinearForm& f) { return f.evaluate(values); });
}

inline PolyMatrix instantiate(const ParamPolyMatrix& m, const Assignment& values) {
  return m.map([&](const ParamPoly& p) {
    std::vector<Rational> c;
    for (const auto& f : p.coefficients()) c.push_back(f.evaluate(values));
    return Poly(std::move(c));
  });
}

inline constexpr long kGenericSampleBound = 1000000;

inline Assignment random_assignment(const std::set<ParamId>& ids, Rng& rng, long bound) {
  Assignment a;
  for (const auto& id : ids) a[id] = Rational(rng.uniform(-bound, bound));
  return a;
}

// Rank for generic parameter values: maximum exact rank over random
// integer evaluations in [-10^6, 10^6].
inline std::size_t generic_rank(const ParamMatrix& m, Rng& rng, int repetitions = 3) {
  std::set<ParamId> ids = parameters(m);
  std::size_t cap = std::min(m.rows(), m.cols());
  std::size_t best = 0;
  int reps = ids.empty() ? 1 : repetitions;
  for (int r = 0; r < reps && best < cap; ++r)
    best = std::max(best, rank(instantiate(m, random_assignment(ids, rng, kGenericSampleBound))));
  return best;
}

struct Dependency {
  std::size_t row = 0;
  std::vector<Rational> coefficients;  // row = sum_k coefficients[k] * rows[k]
};

// Smallest r whose row is identically (in the parameters) a combination of rows 0..r-1.
inline std::optional<Dependency> structural_dependency(const std::vector<std::vector<LinearForm>>& rows) {
  if (rows.empty()) return std::nullopt;
  std::size_t len = rows[0].size();
  std::set<ParamId> ids;
  for (const auto& r : rows) {
    if (r.size() != len) throw DimensionError("structural_dependency: ragged rows");
    for (const auto& f : r) collect_parameters(f, ids);
  }
  std::vector<ParamId> order(ids.begin(), ids.end());
  std::size_t slots = order.size() + 1;
  auto flatten = [&](const std::vector<LinearForm>& row) {
    std::vector<Rational> v(len * slots);
    for (std::size_t e = 0; e < len; ++e) {
      v[e * slots] = row[e].constant();
      for (std::size_t p = 0; p < order.size(); ++p) v[e * slots + 1 + p] = row[e].coefficient(order[p]);
    }
    return v;
  };
  std::vector<std::vector<Rational>> flat;
  for (const auto& r : rows) flat.push_back(flatten(r));
  std::size_t dim = len * slots;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RationalMatrix a(dim, r), b(dim, 1);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < r; ++k) a(i, k) = flat[k][i];
      b(i, 0) = flat[r][i];
    }
    auto sol = solve_affine(a, b);
    if (sol) {
      Dependency d;
      d.row = r;
      for (std::size_t k = 0; k < r; ++k) d.coefficients.push_back(sol->particular(k, 0));
      return d;
    }
  }
  return std::nullopt;
}

}  // namespace morgan
