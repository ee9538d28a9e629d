#pragma once

#include <functional>
#include <span>
#include <vector>

#include "morgan/canonical.hpp"

namespace morgan {

using CITuple = std::vector<std::size_t>;

// A choice of ell - m chains whose end rows feed the square-down feedback rows.
struct RowConfig {
  std::vector<std::size_t> blocks;     // 0-based chain indices, increasing
  std::vector<std::size_t> positions;  // matching 1-based s-positions sigma_1 + ... + sigma_b

  std::vector<std::size_t> complement(std::size_t chains) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0, k = 0; b < chains; ++b) {
      if (k < blocks.size() && blocks[k] == b) ++k;
      else out.push_back(b);
    }
    return out;
  }

  friend bool operator==(const RowConfig&, const RowConfig&) = default;
};

inline std::size_t sum(std::span<const std::size_t> v) {
  std::size_t s = 0;
  for (auto x : v) s += x;
  return s;
}

// Number of leading indices not exceeding d (sigma nondecreasing).
inline std::size_t indices_at_most(std::span<const std::size_t> sigma, std::size_t d) {
  std::size_t k = 0;
  while (k < sigma.size() && sigma[k] <= d) ++k;
  return k;
}

inline bool is_admissible_dimension(std::span<const std::size_t> sigma, std::size_t d) {
  std::size_t k = indices_at_most(sigma, d);
  return k > 0 && d <= sum(sigma.first(k));
}

// Nondecreasing m-tuples with entries >= sigma_1 whose prefix sums stay below
// the matching prefix sums of sigma; lexicographic order.
inline std::vector<CITuple> enumerate_tuples(std::span<const std::size_t> sigma, std::size_t m) {
  std::vector<CITuple> out;
  if (sigma.empty() || m == 0 || m > sigma.size()) return out;
  std::size_t n = sum(sigma);
  CITuple cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t lo, std::size_t acc) {
    if (cur.size() == m) {
      out.push_back(cur);
      return;
    }
    for (std::size_t v = lo; acc + v <= n; ++v) {
      std::size_t k = indices_at_most(sigma, v);
      if (k == 0 || acc + v > sum(sigma.first(k))) continue;
      cur.push_back(v);
      rec(v, acc + v);
      cur.pop_back();
    }
  };
  rec(std::max<std::size_t>(sigma.front(), 1), 0);
  return out;
}

inline std::vector<RowConfig> enumerate_row_configs(std::span<const std::size_t> sigma, std::size_t m) {
  std::vector<RowConfig> out;
  std::size_t l = sigma.size();
  if (m > l) return out;
  std::size_t r = l - m;
  auto ends = chain_ends(sigma);
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (pick.size() == r) {
      RowConfig c;
      c.blocks = pick;
      for (auto b : pick) c.positions.push_back(ends[b] + 1);
      out.push_back(std::move(c));
      return;
    }
    for (std::size_t b = from; b < l; ++b) {
      pick.push_back(b);
      rec(b + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace morgan
