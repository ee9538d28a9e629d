#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "morgan/errors.hpp"

namespace morgan {

// Exact rational number in lowest terms with a positive denominator.
// Wraps mpq_class so arithmetic never leaks GMP expression templates.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}
  Rational(int value) : value_(static_cast<long>(value)) {}
  Rational(long num, long den) {
    if (den == 0) throw ArithmeticError("rational with zero denominator");
    value_ = mpq_class(mpz_class(num), mpz_class(den));
    value_.canonicalize();
  }
  Rational(const mpz_class& num, const mpz_class& den = 1) {
    if (den == 0) throw ArithmeticError("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

  // Accepts "p", "-p", "p/q" with optional surrounding blanks.
  static Rational parse(std::string_view text) {
    std::size_t b = text.find_first_not_of(" \t");
    std::size_t e = text.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw ParseError("empty rational");
    std::string s(text.substr(b, e - b + 1));
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    std::size_t slash = s.find('/');
    auto valid_int = [](const std::string& t, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && i < t.size() && t[i] == '-') ++i;
      if (i == t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    if (slash == std::string::npos) {
      if (!valid_int(s, true)) throw ParseError("bad rational '" + s + "'");
      return Rational(mpz_class(s, 10));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
      throw ParseError("bad rational '" + s + "'");
    mpz_class d(den, 10);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(mpz_class(num, 10), d);
  }

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }
  Rational abs() const { return Rational(mpq_class(::abs(value_))); }
  Rational inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero");
    return Rational(mpq_class(1 / value_));
  }
  std::string to_string() const { return value_.get_str(); }
  double to_double() const { return value_.get_d(); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw ArithmeticError("division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class value_;
};

}  // namespace morgan
