#pragma once

// GUE matrices and the two-sample Kolmogorov-Smirnov distance.
//
// Convention: H = (A + A^+)/2 with A_ij complex, real and imaginary parts
// i.i.d. N(0, 1/2). Then H_ii ~ N(0, 1/2), Re/Im H_ij ~ N(0, 1/4) off the
// diagonal, and the joint density of H is proportional to exp(-tr H^2), so
// the eigenvalue density is proportional to exp(-sum x^2) prod |x_i - x_j|^2:
// the Hermite projection DPP with psi_k orthonormal in L^2(dx).

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ppfock/config.hpp"

namespace ppfock {

template <class Rng>
ComplexMatrix sample_gue(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_gue: n must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex{re, im};
    }
  return 0.5 * (a + a.adjoint());
}

template <class Rng>
std::vector<double> gue_eigenvalues(int n, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sample_gue(n, rng), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// sup_x |F_a(x) - F_b(x)| of the two empirical distribution functions.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace ppfock
