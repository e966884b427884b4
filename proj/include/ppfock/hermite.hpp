#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ppfock/config.hpp"
#include "ppfock/quadrature.hpp"

namespace ppfock {


/// psi_0..psi_{n-1} at x, orthonormal in L^2(R, dx):
/// psi_k(x) = H_k(x) exp(-x^2/2) / sqrt(2^k k! sqrt(pi)).
/// Evaluated with the normalized three-term recurrence, so no factorials.
inline RealVector hermite_functions(int n, double x,
                                    const Tolerances& tol = default_tolerances()) {
  if (n < 0) throw std::invalid_argument("hermite_functions: negative count");
  if (!(std::abs(x) <= tol.hermite_max_abs_x))
    throw std::out_of_range("hermite_functions: |x| = " + std::to_string(std::abs(x)) +
                            " beyond the recurrence range " +
                            std::to_string(tol.hermite_max_abs_x));
  RealVector psi(n);
  if (n == 0) return psi;
  psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 1) return psi;
  psi(1) = std::sqrt(2.0) * x * psi(0);
  for (int k = 1; k + 1 < n; ++k)
    psi(k + 1) = x * std::sqrt(2.0 / (k + 1)) * psi(k) - std::sqrt(double(k) / (k + 1)) * psi(k - 1);
  return psi;
}

namespace detail {

inline QuadratureRule gauss_hermite_nodes(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k / 2.0);
  return golub_welsch(diag, off, std::sqrt(std::numbers::pi));
}

}  // namespace detail

/// Gauss-Hermite rule integrating f(x) dx exactly for f = polynomial of
/// degree < 2n times exp(-x^2). The weights are recomputed from the
/// Christoffel function 1 / sum_k psi_k(x_i)^2, which stays accurate at the
/// outer nodes where eigenvector components underflow.
inline QuadratureRule gauss_hermite_lebesgue(int n) {
  QuadratureRule rule = detail::gauss_hermite_nodes(n);
  Tolerances wide;
  wide.hermite_max_abs_x = 1e300;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    rule.weights[i] = 1.0 / hermite_functions(n, rule.nodes[i], wide).squaredNorm();
  return rule;
}

/// Gauss-Hermite rule for the weight exp(-x^2).
inline QuadratureRule gauss_hermite(int n) {
  QuadratureRule rule = gauss_hermite_lebesgue(n);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    rule.weights[i] *= std::exp(-rule.nodes[i] * rule.nodes[i]);
  return rule;
}

}  // namespace ppfock
