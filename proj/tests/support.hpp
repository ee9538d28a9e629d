#pragma once

#include <string>
#include <vector>

#include "morgan/morgan.hpp"
#include "oracles.hpp"

namespace support {

using namespace morgan;

inline std::string data(const std::string& name) { return std::string(MORGAN_TEST_DATA) + "/" + name; }

inline StateSpace example1() { return load_system(data("example1.json")); }
inline StateSpace example2() { return load_system(data("example2.json")); }

inline RationalMatrix ints(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Poly poly(std::initializer_list<long> ascending) {
  std::vector<Rational> c;
  for (long v : ascending) c.push_back(v);
  return Poly(c);
}

inline ParamId q(int i, int j, int k) { return ParamId::q(i, j, k); }
inline ParamId t(int k) { return ParamId::t(k); }
inline LinearForm lf(const ParamId& id, long c = 1) { return LinearForm::param(id, c); }

// Q_B values the worked examples use for their final instantiation.
inline Assignment example1_q_values() {
  Assignment a;
  for (auto id : {q(3, 2, 2), q(3, 3, 2), q(4, 2, 1), q(3, 2, 1), q(3, 3, 1), q(1, 2, 1), q(1, 3, 1), q(2, 1, 1)})
    a[id] = 1;
  a[q(4, 3, 1)] = 2;
  return a;
}

inline Assignment example2_q_values() {
  Assignment a;
  for (auto id : {q(4, 1, 1), q(5, 2, 1), q(5, 3, 2), q(1, 1, 1), q(2, 2, 1), q(3, 3, 1)}) a[id] = 1;
  return a;
}

inline RationalMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long lo, long hi,
                                    int zero_percent = 0) {
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rng.uniform(0, 99) >= zero_percent) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline bool same(const oracle::QPoly& a, const Poly& b) { return a == oracle::qpoly(b); }

inline Poly product(const std::vector<Poly>& ps) {
  Poly out(1);
  for (const auto& p : ps) out *= p;
  return out;
}

}  // namespace support
