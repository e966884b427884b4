#pragma once

// Exact combinatorial primitives: determinant, permanent, alpha-determinant,
// contraction enumeration and the Wick expansion over contractions.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ppfock/config.hpp"

namespace ppfock {

class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
}

/// Signature of a permutation given in one-line notation (0-based).
inline int permutation_sign(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

/// Number of cycles, fixed points counted as 1-cycles.
inline int cycle_count(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int cycles = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j]))
      seen[j] = true;
  }
  return cycles;
}

}  // namespace detail

/// Determinant by Gaussian elimination with partial pivoting.
/// Singular input gives exactly zero.
inline Complex determinant(const ComplexMatrix& m) {
  detail::require_square(m, "determinant");
  const Eigen::Index n = m.rows();
  if (n == 0) return Complex{1.0, 0.0};
  ComplexMatrix a = m;
  Complex det{1.0, 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return Complex{0.0, 0.0};
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      det = -det;
    }
    const Complex p = a(k, k);
    det *= p;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) / p;
      if (f == Complex{}) continue;
      a.row(i).tail(n - k - 1) -= f * a.row(k).tail(n - k - 1);
    }
  }
  return det;
}

/// Permanent by Ryser's inclusion-exclusion formula, visiting subsets in
/// Gray-code order so each step updates the row sums in O(n).
inline Complex permanent(const ComplexMatrix& m,
                         const Tolerances& tol = default_tolerances()) {
  detail::require_square(m, "permanent");
  const int n = static_cast<int>(m.rows());
  if (n > tol.permanent_max_dim)
    throw DimensionError("permanent: dimension " + std::to_string(n) +
                         " exceeds cap " + std::to_string(tol.permanent_max_dim));
  if (n == 0) return Complex{1.0, 0.0};

  std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex{});
  Complex total{};
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t flipped = gray ^ gray_prev;
    const int col = std::countr_zero(flipped);
    const bool added = (gray & flipped) != 0;
    for (int i = 0; i < n; ++i) {
      if (added)
        row_sums[static_cast<std::size_t>(i)] += m(i, col);
      else
        row_sums[static_cast<std::size_t>(i)] -= m(i, col);
    }
    gray_prev = gray;
    Complex prod{1.0, 0.0};
    for (const auto& s : row_sums) prod *= s;
    // sign (-1)^{n-|S|}
    const int size = std::popcount(gray);
    if ((n - size) % 2 == 0)
      total += prod;
    else
      total -= prod;
  }
  return total;
}

/// Sum over permutations of alpha^{n - cycles(sigma)} * prod m[i, sigma(i)].
inline Complex alpha_determinant(const ComplexMatrix& m, double alpha,
                                 const Tolerances& tol = default_tolerances()) {
  detail::require_square(m, "alpha_determinant");
  const int n = static_cast<int>(m.rows());
  if (n > tol.alpha_determinant_max_dim)
    throw DimensionError("alpha_determinant: dimension " + std::to_string(n) +
                         " exceeds cap " +
                         std::to_string(tol.alpha_determinant_max_dim));
  if (n == 0) return Complex{1.0, 0.0};

  // alpha^j for j = 0..n-1
  std::vector<double> powers(static_cast<std::size_t>(n), 1.0);
  for (int j = 1; j < n; ++j)
    powers[static_cast<std::size_t>(j)] = powers[static_cast<std::size_t>(j - 1)] * alpha;

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Complex total{};
  do {
    const double weight = powers[static_cast<std::size_t>(n - detail::cycle_count(perm))];
    if (weight == 0.0) continue;
    Complex prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
    total += weight * prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// A perfect matching of {0..order-1} in the canonical form used by Wick's
/// theorem: pairs are listed by increasing first element and each pair is
/// increasing. Indices are 0-based.
struct Contraction {
  int order = 0;
  std::vector<std::pair<int, int>> pairs;
  int parity = 1;  // signature of (first_1, second_1, first_2, second_2, ...)

  /// The permutation in one-line notation.
  std::vector<int> as_permutation() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(order));
    for (const auto& [i, j] : pairs) {
      out.push_back(i);
      out.push_back(j);
    }
    return out;
  }
};

namespace detail {

inline void enumerate_contractions_rec(std::vector<bool>& used,
                                       std::vector<std::pair<int, int>>& pairs,
                                       int order,
                                       std::vector<Contraction>& out) {
  int first = -1;
  for (int i = 0; i < order; ++i)
    if (!used[static_cast<std::size_t>(i)]) {
      first = i;
      break;
    }
  if (first < 0) {
    Contraction c;
    c.order = order;
    c.pairs = pairs;
    c.parity = permutation_sign(c.as_permutation());
    out.push_back(std::move(c));
    return;
  }
  used[static_cast<std::size_t>(first)] = true;
  for (int j = first + 1; j < order; ++j) {
    if (used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(j)] = true;
    pairs.emplace_back(first, j);
    enumerate_contractions_rec(used, pairs, order, out);
    pairs.pop_back();
    used[static_cast<std::size_t>(j)] = false;
  }
  used[static_cast<std::size_t>(first)] = false;
}

}  // namespace detail

/// All (n-1)!! contractions of order n, in the order produced by pairing
/// the smallest free index with each larger free index in turn.
inline std::vector<Contraction> enumerate_contractions(
    int n, const Tolerances& tol = default_tolerances()) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("enumerate_contractions: order must be even and positive, got " +
                                std::to_string(n));
  if (n > tol.contraction_max_order)
    throw DimensionError("enumerate_contractions: order " + std::to_string(n) +
                         " exceeds cap " + std::to_string(tol.contraction_max_order));
  std::vector<Contraction> out;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<std::pair<int, int>> pairs;
  detail::enumerate_contractions_rec(used, pairs, n, out);
  return out;
}

/// Right-hand side of Wick's theorem. pair_table(i, j) for i < j holds the
/// two-point function <b_i b_j>; only the strict upper triangle is read.
/// Odd orders give zero.
inline Complex wick_expand(const ComplexMatrix& pair_table, Statistics stats,
                           const Tolerances& tol = default_tolerances()) {
  detail::require_square(pair_table, "wick_expand");
  const int n = static_cast<int>(pair_table.rows());
  if (n == 0) return Complex{1.0, 0.0};
  if (n % 2 != 0) return Complex{0.0, 0.0};
  const double sign_factor = static_cast<double>(eta(stats));
  Complex total{};
  for (const auto& c : enumerate_contractions(n, tol)) {
    Complex prod{1.0, 0.0};
    for (const auto& [i, j] : c.pairs) prod *= pair_table(i, j);
    total += (c.parity < 0 ? sign_factor : 1.0) * prod;
  }
  return total;
}

/// Coherence value <a_1^+ a_1 ... a_k^+ a_k> given the matrix of
/// <a_i^+ a_j>: permanent for bosons, determinant for fermions.
inline Complex correlator_value(const ComplexMatrix& k_matrix, Statistics stats,
                                const Tolerances& tol = default_tolerances()) {
  return stats == Statistics::boson ? permanent(k_matrix, tol) : determinant(k_matrix);
}

}  // namespace ppfock
