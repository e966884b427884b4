#pragma once

// Closed-form correlation and coherence kernels: stationary covariances of
// the classical field, spectral (eigen-decomposed) kernels, Hermite
// projection kernels, the free-fermion coherence functions and the
// theoretical pair-correlation function.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ppfock/config.hpp"
#include "ppfock/point_configuration.hpp"
#include "ppfock/hermite.hpp"
#include "ppfock/quadrature.hpp"

namespace ppfock {

/// A stationary covariance C(t, s) = c0(t - s) with c0(-tau) = conj(c0(tau)).
struct StationaryCovariance {
  std::string name;
  std::map<std::string, double> params;
  std::function<Complex(double)> c0;
  bool real_valued = false;
  std::vector<std::string> warnings;

  Complex operator()(double tau) const { return c0(tau); }
  double variance() const { return c0(0.0).real(); }
};

/// exp(-|tau|/sigma) cos(omega tau)
inline StationaryCovariance lorentz_kernel(double sigma, double omega) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("lorentz_kernel: sigma must be positive");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("lorentz_kernel: omega must be non-negative");
  StationaryCovariance cov;
  cov.name = "lorentz";
  cov.params = {{"sigma", sigma}, {"omega", omega}};
  cov.real_valued = true;
  cov.c0 = [sigma, omega](double tau) {
    return Complex{std::exp(-std::abs(tau) / sigma) * std::cos(omega * tau), 0.0};
  };
  if (omega * sigma <= 1.0)
    cov.warnings.push_back("lorentz_kernel: omega*sigma <= 1, field is not quasi-monochromatic");
  return cov;
}

/// 2 exp(-|tau|/sigma) exp(i omega tau), the covariance of the analytic
/// signal of a quasi-monochromatic Lorentz field.
inline StationaryCovariance analytic_lorentz_kernel(double sigma, double omega) {
  StationaryCovariance cov = lorentz_kernel(sigma, omega);
  cov.name = "analytic-lorentz";
  cov.real_valued = false;
  cov.c0 = [sigma, omega](double tau) {
    return 2.0 * std::exp(-std::abs(tau) / sigma) * std::polar(1.0, omega * tau);
  };
  return cov;
}

/// Covariance matrix [c0(x_i - x_j)].
inline ComplexMatrix covariance_matrix(const StationaryCovariance& cov,
                                       const std::vector<double>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = cov(points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)]);
  return m;
}

// ---------------------------------------------------------------------------
// Spectral kernels

/// Ground set carrying a spectral kernel, with its reference measure.
struct Domain {
  enum class Kind { real_line, interval, discrete };
  Kind kind = Kind::real_line;
  double a = 0.0;  // interval bounds
  double b = 1.0;
  int size = 0;  // discrete ground set {0, ..., size-1} with counting measure

  static Domain real_line() { return {}; }
  static Domain interval(double lo, double hi) { return {Kind::interval, lo, hi, 0}; }
  static Domain discrete(int n) { return {Kind::discrete, 0.0, 0.0, n}; }
};

/// K(x, y) = sum_k lambda_k phi_k(x) conj(phi_k(y)).
///
/// The basis is held as one feature map x -> (phi_0(x), ..., phi_{n-1}(x)),
/// since families like Hermite functions are cheapest to evaluate together.
struct SpectralKernel {
  std::string name;
  std::vector<double> eigenvalues;
  std::function<ComplexVector(double)> features;
  Statistics stats = Statistics::fermion;
  Domain domain;

  std::size_t rank() const { return eigenvalues.size(); }

  Complex phi(std::size_t k, double x) const { return features(x)(static_cast<Eigen::Index>(k)); }

  Complex operator()(double x, double y) const {
    const ComplexVector fx = features(x);
    const ComplexVector fy = features(y);
    Complex s{};
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      s += eigenvalues[k] * fx(i) * std::conj(fy(i));
    }
    return s;
  }

  double diagonal(double x) const {
    const ComplexVector f = features(x);
    double s = 0.0;
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
      s += eigenvalues[k] * std::norm(f(static_cast<Eigen::Index>(k)));
    return s;
  }

  /// Same basis with a different spectrum.
  SpectralKernel with_eigenvalues(std::vector<double> lambdas) const {
    if (lambdas.size() != eigenvalues.size())
      throw std::invalid_argument("SpectralKernel::with_eigenvalues: size mismatch");
    SpectralKernel k = *this;
    k.eigenvalues = std::move(lambdas);
    return k;
  }
};

/// Hermite basis psi_0..psi_{n-1} with the given spectrum, on the real line.
inline SpectralKernel hermite_spectral_kernel(std::vector<double> lambdas, Statistics stats,
                                              const Tolerances& tol = default_tolerances()) {
  const int n = static_cast<int>(lambdas.size());
  if (n < 1 || n > tol.hermite_max_modes)
    throw std::invalid_argument("hermite kernel: number of modes must be in [1, " +
                                std::to_string(tol.hermite_max_modes) + "]");
  SpectralKernel k;
  k.name = "hermite";
  k.eigenvalues = std::move(lambdas);
  k.stats = stats;
  k.domain = Domain::real_line();
  k.features = [n, tol](double x) -> ComplexVector {
    return hermite_functions(n, x, tol).cast<Complex>();
  };
  return k;
}

/// Rank-N projection onto the first N Hermite functions: the kernel of the
/// N-fermion harmonic-oscillator ground state (GUE eigenvalues).
inline SpectralKernel hermite_projection_kernel(int n_modes,
                                                const Tolerances& tol = default_tolerances()) {
  if (n_modes < 1 || n_modes > tol.hermite_max_modes)
    throw std::invalid_argument("hermite_projection_kernel: n_modes must be in [1, " +
                                std::to_string(tol.hermite_max_modes) + "]");
  return hermite_spectral_kernel(std::vector<double>(static_cast<std::size_t>(n_modes), 1.0),
                                 Statistics::fermion, tol);
}

/// Basis vectors e_0..e_{n-1} of the discrete ground set {0..n-1}.
inline SpectralKernel discrete_diagonal_kernel(std::vector<double> lambdas, Statistics stats) {
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  SpectralKernel k;
  k.name = "discrete";
  k.eigenvalues = std::move(lambdas);
  k.stats = stats;
  k.domain = Domain::discrete(static_cast<int>(n));
  k.features = [n](double x) -> ComplexVector {
    ComplexVector f = ComplexVector::Zero(n);
    const auto i = static_cast<Eigen::Index>(std::llround(x));
    if (i >= 0 && i < n) f(i) = 1.0;
    return f;
  };
  return k;
}

/// Gram matrix of the basis under quadrature, minus the identity, in max norm.
inline double orthonormality_defect(const SpectralKernel& kernel, int nodes = 0) {
  const auto n = static_cast<Eigen::Index>(kernel.rank());
  QuadratureRule rule;
  switch (kernel.domain.kind) {
    case Domain::Kind::real_line: {
      rule = gauss_hermite_lebesgue(std::max<int>(nodes, 4 * static_cast<int>(n) + 8));
      break;
    }
    case Domain::Kind::interval:
      rule = composite_gauss_legendre(kernel.domain.a, kernel.domain.b, std::max(nodes / 16, 64));
      break;
    case Domain::Kind::discrete:
      for (int i = 0; i < kernel.domain.size; ++i) {
        rule.nodes.push_back(i);
        rule.weights.push_back(1.0);
      }
      break;
  }
  ComplexMatrix gram = ComplexMatrix::Zero(n, n);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const ComplexVector f = kernel.features(rule.nodes[q]);
    gram.noalias() += rule.weights[q] * (f.conjugate() * f.transpose());
  }
  return (gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// [K(x_i, x_j)], Hermitian by construction.
inline ComplexMatrix gram_matrix(const SpectralKernel& kernel, const std::vector<double>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto r = static_cast<Eigen::Index>(kernel.rank());
  ComplexMatrix phi(r, n);
  for (Eigen::Index j = 0; j < n; ++j) phi.col(j) = kernel.features(points[static_cast<std::size_t>(j)]);
  Eigen::VectorXd lam(r);
  for (Eigen::Index k = 0; k < r; ++k) lam(k) = kernel.eigenvalues[static_cast<std::size_t>(k)];
  // (i, j) = sum_k lam_k phi_k(x_i) conj(phi_k(x_j))
  return phi.transpose() * lam.asDiagonal() * phi.conjugate();
}

// ---------------------------------------------------------------------------
// Free-fermion coherence functions

/// First-order coherence of the 3-D Fermi sea as a function of the distance d.
inline std::function<double(double)> fermi_sea_kernel_3d(double k_f) {
  if (!(k_f > 0.0)) throw std::invalid_argument("fermi_sea_kernel_3d: k_f must be positive");
  return [k_f](double d) {
    if (d < 0.0) throw std::domain_error("fermi_sea_kernel_3d: negative distance");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double x = k_f * d;
    if (x < 1e-2) {
      // sin x - x cos x = x^3/3 - x^5/30 + x^7/840 - ...
      const double x2 = x * x;
      return k_f * k_f * k_f / pi2 * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0);
    }
    return (std::sin(x) / (d * d) - k_f * std::cos(x) / d) / (pi2 * d);
  };
}

struct ChiralUnits {
  double hbar = 1.0;
  double fermi_velocity = 1.0;
};

/// Thermal coherence time hbar * beta / pi.
inline double thermal_coherence_time(double beta, const ChiralUnits& units = {}) {
  return units.hbar * beta / std::numbers::pi;
}

/// First-order coherence G(t, t') of a chiral wire at inverse temperature
/// beta and chemical potential zeta, regularized by t - t' -> t - t' + i eps.
/// A missing epsilon defaults to 1e-3 times the thermal coherence time.
inline std::function<Complex(double, double)> chiral_thermal_kernel(
    double beta, double zeta, std::optional<double> epsilon = std::nullopt,
    const ChiralUnits& units = {}) {
  if (!(beta > 0.0)) throw std::invalid_argument("chiral_thermal_kernel: beta must be positive");
  const double tau_th = thermal_coherence_time(beta, units);
  const double eps = epsilon.value_or(1e-3 * tau_th);
  if (!(eps > 0.0))
    throw std::invalid_argument("chiral_thermal_kernel: epsilon must be positive");
  const double pref_scale = 1.0 / (2.0 * std::numbers::pi * units.fermi_velocity * tau_th);
  const double freq = zeta / units.hbar;
  return [=](double t, double tp) {
    const double u = t - tp;
    const Complex z = Complex{u, eps} / tau_th;
    // 1/sinh(z) in a form that does not overflow for large |Re z|
    Complex inv_sinh;
    if (z.real() > 1.0) {
      const Complex e = std::exp(-z);
      inv_sinh = 2.0 * e / (1.0 - e * e);
    } else if (z.real() < -1.0) {
      const Complex e = std::exp(z);
      inv_sinh = -2.0 * e / (1.0 - e * e);
    } else {
      inv_sinh = 1.0 / std::sinh(z);
    }
    return Complex{0.0, pref_scale} * std::polar(1.0, -freq * u) * inv_sinh;
  };
}

/// Zero-temperature chiral coherence (i / (2 pi v_F)) e^{-i zeta u/hbar} / (u + i eps).
inline std::function<Complex(double, double)> chiral_zero_temperature_kernel(
    double zeta, double epsilon, const ChiralUnits& units = {}) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("chiral_zero_temperature_kernel: epsilon must be positive");
  const double pref = 1.0 / (2.0 * std::numbers::pi * units.fermi_velocity);
  return [=](double t, double tp) {
    const double u = t - tp;
    return Complex{0.0, pref} * std::polar(1.0, -zeta / units.hbar * u) / Complex{u, epsilon};
  };
}

// ---------------------------------------------------------------------------

/// g = 1 + eta |K(x,y)|^2 / (K(x,x) K(y,y)).
inline double theoretical_pcf(Complex kernel_value_xy, double kxx, double kyy, Statistics stats) {
  if (!(kxx > 0.0) || !(kyy > 0.0))
    throw std::invalid_argument("theoretical_pcf: diagonal values must be positive");
  return 1.0 + eta(stats) * std::norm(kernel_value_xy) / (kxx * kyy);
}

/// Stationary pair correlation 1 + eta |c0(r)|^2 / c0(0)^2.
inline double theoretical_pcf(const StationaryCovariance& cov, double r, Statistics stats) {
  const double c = cov.variance();
  return theoretical_pcf(cov(r), c, c, stats);
}

}  // namespace ppfock
