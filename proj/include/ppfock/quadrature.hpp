#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace ppfock {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix,
// weights are mu0 times the squared first component of each eigenvector.
inline QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                                   double mu0) {
  const Eigen::Index n = diag.size();
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  jacobi.diagonal() = diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = offdiag(i);
    jacobi(i + 1, i) = offdiag(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace detail

/// Gauss-Legendre rule on [a, b].
inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  QuadratureRule rule = detail::golub_welsch(diag, off, 2.0);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

/// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
inline QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order = 16) {
  if (!(a < b) || panels < 1) throw std::invalid_argument("composite_gauss_legendre: bad interval");
  QuadratureRule out;
  const QuadratureRule ref = gauss_legendre(order);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
      out.nodes.push_back(lo + 0.5 * h * (ref.nodes[i] + 1.0));
      out.weights.push_back(0.5 * h * ref.weights[i]);
    }
  }
  return out;
}

}  // namespace ppfock
