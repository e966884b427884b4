#pragma once

// Grand-canonical construction: target spectra <-> energy levels, partition
// functions, the induced kernel and measurement-basis rotations.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppfock/config.hpp"
#include "ppfock/kernels.hpp"

namespace ppfock {

struct GrandCanonicalSpec {
  double beta = 1.0;
  double zeta = 0.0;
  std::vector<double> nu;
  Statistics stats = Statistics::fermion;

  /// Throws on a non-positive beta, non-finite levels, or a boson level at
  /// or below the chemical potential.
  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("GrandCanonicalSpec: beta must be positive and finite");
    if (!std::isfinite(zeta)) throw std::invalid_argument("GrandCanonicalSpec: zeta must be finite");
    for (std::size_t i = 0; i < nu.size(); ++i) {
      if (!std::isfinite(nu[i]))
        throw std::invalid_argument("GrandCanonicalSpec: level " + std::to_string(i) + " not finite");
      if (stats == Statistics::boson && !(nu[i] > zeta))
        throw std::domain_error("GrandCanonicalSpec: boson level " + std::to_string(i) +
                                " must lie above zeta (Bose-Einstein divergence)");
    }
  }
};

struct TargetSpectrum {
  std::vector<double> lambdas;

  void validate(Statistics stats) const {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double l = lambdas[i];
      const bool ok = stats == Statistics::fermion ? (l > 0.0 && l < 1.0) : (l > 0.0 && std::isfinite(l));
      if (!ok)
        throw std::domain_error("TargetSpectrum: lambda[" + std::to_string(i) + "] = " +
                                std::to_string(l) +
                                (stats == Statistics::fermion ? " outside (0, 1)" : " not positive"));
    }
  }
};

/// Mean occupation 1/(e^x - eta) of a level with x = beta (nu - zeta).
inline double mean_occupation(double x, Statistics stats) {
  if (stats == Statistics::fermion) {
    if (x >= 0.0) {
      const double e = std::exp(-x);
      return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
  }
  if (!(x > 0.0)) throw std::domain_error("mean_occupation: boson level needs beta(nu - zeta) > 0");
  return 1.0 / std::expm1(x);
}

inline TargetSpectrum levels_to_spectrum(const GrandCanonicalSpec& spec) {
  spec.validate();
  TargetSpectrum t;
  t.lambdas.reserve(spec.nu.size());
  for (double v : spec.nu) t.lambdas.push_back(mean_occupation(spec.beta * (v - spec.zeta), spec.stats));
  return t;
}

/// beta (nu_i - zeta) = log((1 + eta lambda_i) / lambda_i).
inline GrandCanonicalSpec spectrum_to_levels(const TargetSpectrum& target, double beta,
                                             double zeta = 0.0,
                                             Statistics stats = Statistics::fermion) {
  if (!(beta > 0.0)) throw std::invalid_argument("spectrum_to_levels: beta must be positive");
  target.validate(stats);
  GrandCanonicalSpec spec;
  spec.beta = beta;
  spec.zeta = zeta;
  spec.stats = stats;
  for (double l : target.lambdas) {
    const double x = stats == Statistics::fermion ? std::log1p(-l) - std::log(l)
                                                  : std::log1p(l) - std::log(l);
    spec.nu.push_back(zeta + x / beta);
  }
  return spec;
}

/// log Z = -sum log(1 - e^{-x}) (bosons) or sum log(1 + e^{-x}) (fermions).
inline double log_partition_function(const GrandCanonicalSpec& spec) {
  spec.validate();
  double s = 0.0;
  for (double v : spec.nu) {
    const double x = spec.beta * (v - spec.zeta);
    if (spec.stats == Statistics::fermion)
      s += x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
    else
      s -= std::log(-std::expm1(-x));
  }
  if (!std::isfinite(s)) throw std::overflow_error("log_partition_function: divergent");
  return s;
}

/// beta -> infinity limit for fermions: lambda_i = 1 below the chemical
/// potential, 0 above, 1/2 exactly at it. The chemical potential sets the rank.
inline TargetSpectrum zero_temperature_spectrum(const std::vector<double>& nu, double zeta) {
  TargetSpectrum t;
  for (double v : nu) t.lambdas.push_back(v < zeta ? 1.0 : (v > zeta ? 0.0 : 0.5));
  return t;
}

/// Kernel sum_i lambda_i phi_i(x) conj(phi_i(y)) with the basis of `basis`
/// and the spectrum of `spec`.
inline SpectralKernel induced_kernel(const GrandCanonicalSpec& spec, const SpectralKernel& basis) {
  if (spec.nu.size() != basis.rank())
    throw std::invalid_argument("induced_kernel: " + std::to_string(spec.nu.size()) +
                                " levels for a basis of size " + std::to_string(basis.rank()));
  SpectralKernel k = basis.with_eigenvalues(levels_to_spectrum(spec).lambdas);
  k.stats = spec.stats;
  k.name = "grand-canonical-" + basis.name;
  return k;
}

inline SpectralKernel induced_hermite_kernel(const GrandCanonicalSpec& spec) {
  return induced_kernel(spec, hermite_spectral_kernel(std::vector<double>(spec.nu.size(), 1.0), spec.stats));
}

inline double unitarity_defect(const ComplexMatrix& v) {
  if (v.rows() != v.cols()) return std::numeric_limits<double>::infinity();
  return (v.adjoint() * v - ComplexMatrix::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff();
}

/// K = V diag(lambda) V^+ for a kernel on a finite ground set.
inline ComplexMatrix rotate_measurement_basis(const SpectralKernel& kernel, const ComplexMatrix& v,
                                              const Tolerances& tol = default_tolerances()) {
  if (kernel.domain.kind != Domain::Kind::discrete)
    throw std::invalid_argument("rotate_measurement_basis: needs a finite ground set");
  const auto n = static_cast<Eigen::Index>(kernel.rank());
  if (v.rows() != n || v.cols() != n)
    throw std::invalid_argument("rotate_measurement_basis: basis matrix must be " +
                                std::to_string(n) + "x" + std::to_string(n));
  const double defect = unitarity_defect(v);
  if (defect > tol.unitarity_tol)
    throw std::domain_error("rotate_measurement_basis: matrix is not unitary (defect " +
                            std::to_string(defect) + ")");
  RealVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = kernel.eigenvalues[static_cast<std::size_t>(i)];
  return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
}

/// Basis change keeping phi_1..phi_{n-2} and measuring the last two modes in
/// v_{n-1} = alpha phi_{n-1} - conj(beta) phi_n, v_n = beta phi_{n-1} + conj(alpha) phi_n.
/// Returned as V_ik = <v_i|phi_k>, so V diag(lambda) V^+ is the kernel matrix in
/// the measurement basis. (alpha, beta) are rescaled to |alpha|^2 + |beta|^2 = 1.
inline ComplexMatrix two_mode_rotation(int n, Complex alpha, Complex beta) {
  if (n < 2) throw std::invalid_argument("two_mode_rotation: need n >= 2");
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(norm > 0.0)) throw std::invalid_argument("two_mode_rotation: alpha = beta = 0");
  alpha /= norm;
  beta /= norm;
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  v(n - 2, n - 2) = std::conj(alpha);
  v(n - 2, n - 1) = -beta;
  v(n - 1, n - 2) = std::conj(beta);
  v(n - 1, n - 1) = alpha;
  return v;
}

}  // namespace ppfock
