#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ppfock {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Particle statistics. The numeric value is the sign η appearing in
/// the (anti-)commutation relations and in Wick's expansion.
enum class Statistics : int { fermion = -1, boson = +1 };

constexpr int eta(Statistics s) noexcept { return static_cast<int>(s); }

inline Statistics statistics_from_eta(int e) {
  if (e == 1) return Statistics::boson;
  if (e == -1) return Statistics::fermion;
  throw std::invalid_argument("eta must be +1 or -1, got " + std::to_string(e));
}

inline const char* to_string(Statistics s) {
  return s == Statistics::boson ? "boson" : "fermion";
}

/// Numerical tolerances and size caps shared by every module.
struct Tolerances {
  // wick_algebra
  int permanent_max_dim = 30;
  int alpha_determinant_max_dim = 10;
  int contraction_max_order = 16;

  // kernels
  double orthonormality_tol = 1e-8;
  double hermite_max_abs_x = 37.0;
  int hermite_max_modes = 200;

  // gaussian_field
  double embedding_negative_error = 1e-8;  // relative to max eigenvalue
  std::size_t embedding_max_size = std::size_t{1} << 24;

  // pp_samplers
  double projection_rank_loss = 1e-12;
  double reorthogonalize_below = 1e-6;
  int grid_nodes_per_unit = 1 << 12;

  // fock_engine
  std::size_t fock_max_dim = std::size_t{1} << 14;
  double density_tol = 1e-12;
  double coherent_tail_max = 1e-8;

  // fermion_builder
  double unitarity_tol = 1e-10;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace ppfock
