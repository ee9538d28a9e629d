#pragma once

#include <cctype>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morgan/rational.hpp"

namespace morgan {

// Degree reported for the zero polynomial; below every real degree.
inline constexpr long kZeroDegree = std::numeric_limits<long>::min();

// Univariate polynomial in s over Q, coefficients in ascending powers.
class Poly {
 public:
  using value_type = Rational;

  Poly() = default;
  Poly(const Rational& constant) {
    if (!constant.is_zero()) c_.push_back(constant);
  }
  Poly(long constant) : Poly(Rational(constant)) {}
  Poly(int constant) : Poly(Rational(constant)) {}
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly monomial(const Rational& coeff, std::size_t power) {
    if (coeff.is_zero()) return Poly();
    std::vector<Rational> c(power + 1);
    c[power] = coeff;
    return Poly(std::move(c));
  }
  static Poly s() { return monomial(1, 1); }

  // Polynomial with the given monic roots: prod (s - r).
  static Poly from_roots(const std::vector<Rational>& roots) {
    Poly p(1);
    for (const auto& r : roots) p *= Poly(std::vector<Rational>{-r, 1});
    return p;
  }

  long degree() const { return c_.empty() ? kZeroDegree : static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(); }
  Rational leading() const { return c_.empty() ? Rational() : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  Poly monic() const {
    if (c_.empty()) return *this;
    return *this * c_.back().inverse();
  }

  Rational eval(const Rational& x) const {
    Rational acc;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  Poly derivative() const {
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Rational(static_cast<long>(k)));
    return Poly(std::move(d));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& operator*=(const Rational& r) {
    if (r.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& x : c_) x *= r;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(Poly a, const Rational& r) { return a *= r; }
  friend Poly operator*(const Rational& r, Poly a) { return a *= r; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  // Euclidean division: a = q*b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw ArithmeticError("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly(), a};
    std::vector<Rational> rem = a.c_;
    std::vector<Rational> quo(a.c_.size() - b.c_.size() + 1);
    Rational inv = b.c_.back().inverse();
    for (std::size_t k = quo.size(); k-- > 0;) {
      Rational f = rem[k + b.c_.size() - 1] * inv;
      quo[k] = f;
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) rem[k + j] -= f * b.c_[j];
    }
    rem.resize(b.c_.size() - 1);
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }

  // Division that must leave no remainder.
  friend Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw ArithmeticError("inexact polynomial division");
    return q;
  }

  // Human form, highest power first: "s^4+2s-3", "(1/2)s^2-s".
  std::string to_string(char var = 's') const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      const Rational& a = c_[k];
      if (a.is_zero()) continue;
      bool neg = a.sign() < 0;
      Rational mag = a.abs();
      if (!out.empty()) out += neg ? "-" : "+";
      else if (neg) out += "-";
      if (k == 0 || !mag.is_one()) {
        if (mag.is_integer() || k == 0) out += mag.to_string();
        else out += "(" + mag.to_string() + ")";
      }
      if (k >= 1) out += var;
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

  // Inverse of to_string; also accepts '*' between coefficient and s.
  static Poly parse(std::string_view text, char var = 's') {
    std::string t;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw ParseError("empty polynomial");
    Poly result;
    std::size_t i = 0;
    while (i < t.size()) {
      bool neg = false;
      if (t[i] == '+' || t[i] == '-') {
        neg = t[i] == '-';
        ++i;
      } else if (i != 0) {
        throw ParseError("bad polynomial '" + t + "'");
      }
      Rational coeff(1);
      bool have_coeff = false;
      if (i < t.size() && t[i] == '(') {
        std::size_t close = t.find(')', i);
        if (close == std::string::npos) throw ParseError("unbalanced '(' in '" + t + "'");
        coeff = Rational::parse(t.substr(i + 1, close - i - 1));
        i = close + 1;
        have_coeff = true;
      } else {
        std::size_t j = i;
        while (j < t.size() && (std::isdigit(static_cast<unsigned char>(t[j])) || t[j] == '/')) ++j;
        if (j > i) {
          coeff = Rational::parse(t.substr(i, j - i));
          i = j;
          have_coeff = true;
        }
      }
      if (i < t.size() && t[i] == '*') ++i;
      std::size_t power = 0;
      if (i < t.size() && t[i] == var) {
        ++i;
        power = 1;
        if (i < t.size() && t[i] == '^') {
          ++i;
          std::size_t j = i;
          while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
          if (j == i) throw ParseError("missing exponent in '" + t + "'");
          power = std::stoul(t.substr(i, j - i));
          i = j;
        }
      } else if (!have_coeff) {
        throw ParseError("bad polynomial term in '" + t + "'");
      }
      result += monomial(neg ? -coeff : coeff, power);
    }
    return result;
  }

  friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<Rational> c_;
};

// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

}  // namespace morgan
