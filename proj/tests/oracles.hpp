#pragma once

// Slow, obviously-correct reference implementations used only by tests.

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "ppfock/config.hpp"

namespace oracle {

using ppfock::Complex;
using ppfock::ComplexMatrix;

inline ComplexMatrix minor_of(const ComplexMatrix& m, int row, int col) {
  const auto n = m.rows();
  ComplexMatrix out(n - 1, n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, c = 0; j < n; ++j) {
      if (j == col) continue;
      out(r, c++) = m(i, j);
    }
    ++r;
  }
  return out;
}

// Laplace expansion along the first row.
inline Complex cofactor_determinant(const ComplexMatrix& m) {
  const auto n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  Complex s{};
  for (int j = 0; j < n; ++j) {
    const Complex term = m(0, j) * cofactor_determinant(minor_of(m, 0, j));
    s += j % 2 == 0 ? term : -term;
  }
  return s;
}

inline int inversion_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

inline int cycles(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    ++c;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) seen[j] = true;
  }
  return c;
}

// sum over permutations of weight(sigma) prod m(i, sigma(i))
template <class Weight>
Complex permutation_sum(const ComplexMatrix& m, Weight weight) {
  const auto n = static_cast<int>(m.rows());
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  Complex s{};
  do {
    Complex prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) prod *= m(i, p[static_cast<std::size_t>(i)]);
    s += weight(p) * prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return s;
}

inline Complex permanent(const ComplexMatrix& m) {
  return permutation_sum(m, [](const std::vector<int>&) { return 1.0; });
}

// Contractions by filtering all permutations of {0..n-1} for
// s0 < s2 < s4 < ... and s(2i) < s(2i+1); returns (pairs, sign).
using Pairing = std::vector<std::pair<int, int>>;

inline std::vector<std::pair<Pairing, int>> brute_force_contractions(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::pair<Pairing, int>> out;
  do {
    bool ok = true;
    for (int i = 0; i + 1 < n && ok; i += 2) {
      if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(i + 1)]) ok = false;
      if (i + 2 < n && p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(i + 2)]) ok = false;
    }
    if (!ok) continue;
    Pairing pr;
    for (int i = 0; i < n; i += 2)
      pr.emplace_back(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i + 1)]);
    out.emplace_back(pr, inversion_sign(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace oracle
