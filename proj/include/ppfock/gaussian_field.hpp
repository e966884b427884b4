#pragma once

// Stationary Gaussian fields on a uniform grid: circulant-embedding samplers
// for real and circularly-symmetric complex processes, and the analytic
// signal of a real trajectory.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "ppfock/config.hpp"
#include "ppfock/kernels.hpp"

namespace ppfock {

/// Uniform time grid t_i = t0 + i dt, i < n, with n a power of two.
struct TrajectoryGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 1;

  TrajectoryGrid() = default;
  TrajectoryGrid(double start, double step, std::size_t count) : t0(start), dt(step), n(count) {
    if (!(step > 0.0)) throw std::invalid_argument("TrajectoryGrid: dt must be positive");
    if (count == 0 || !std::has_single_bit(count))
      throw std::invalid_argument("TrajectoryGrid: n must be a power of two, got " +
                                  std::to_string(count));
  }

  /// Smallest power-of-two grid covering [a, b] with spacing at most max_dt.
  static TrajectoryGrid covering(double a, double b, double max_dt) {
    const auto cells = static_cast<std::size_t>(std::ceil((b - a) / max_dt));
    const std::size_t n = std::bit_ceil(cells + 1);
    return TrajectoryGrid(a, (b - a) / static_cast<double>(n - 1), n);
  }

  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double t_end() const { return time(n - 1); }

  /// dt must resolve a declared carrier: dt <= pi / (4 omega).
  bool resolves_carrier(double omega) const { return dt <= std::numbers::pi / (4.0 * omega); }
};

struct RealTrajectory {
  TrajectoryGrid grid;
  std::vector<double> values;
};

struct ComplexTrajectory {
  TrajectoryGrid grid;
  std::vector<Complex> values;

  /// Piecewise-constant interpolation: value of the cell containing t.
  Complex at(double t) const {
    const double u = (t - grid.t0) / grid.dt;
    auto i = static_cast<std::ptrdiff_t>(std::floor(u));
    if (i < 0) i = 0;
    if (i >= static_cast<std::ptrdiff_t>(values.size())) i = static_cast<std::ptrdiff_t>(values.size()) - 1;
    return values[static_cast<std::size_t>(i)];
  }
};

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Diagnostics of the circulant embedding.
struct EmbeddingReport {
  std::size_t embedding_size = 0;
  int doublings = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double clipped_power_fraction = 0.0;  // sum of clipped |negative| eigenvalues / trace

  std::string summary() const {
    std::ostringstream os;
    os << "circulant embedding size " << embedding_size << " (" << doublings
       << " extra doublings), eigenvalues in [" << min_eigenvalue << ", " << max_eigenvalue
       << "], clipped relative power " << clipped_power_fraction;
    return os.str();
  }
};

/// Exact sampler of a stationary Gaussian process on a grid by circulant
/// embedding. The embedding starts at twice the grid length and is doubled
/// until no eigenvalue falls below -embedding_negative_error * max; the
/// remaining small negative eigenvalues are clipped to zero and reported.
///
/// The eigen-decomposition is computed once; each draw costs one FFT.
class CirculantSampler {
 public:
  CirculantSampler(const StationaryCovariance& cov, TrajectoryGrid grid,
                   const Tolerances& tol = default_tolerances())
      : grid_(grid), real_(cov.real_valued) {
    std::size_t m = 2 * grid.n;
    for (;;) {
      if (try_embedding(cov, m, tol)) break;
      if (2 * m > tol.embedding_max_size)
        throw EmbeddingError("circulant embedding failed up to size " + std::to_string(m) + ": " +
                             report_.summary());
      m *= 2;
      ++report_.doublings;
    }
  }

  const TrajectoryGrid& grid() const { return grid_; }
  const EmbeddingReport& report() const { return report_; }

  /// Circularly-symmetric complex draw: E[Z_i conj(Z_j)] = c0(t_i - t_j),
  /// E[Z_i Z_j] = 0.
  template <class Rng>
  ComplexTrajectory sample_complex(Rng& rng) const {
    std::vector<Complex> full = draw(rng);
    ComplexTrajectory out{grid_, {}};
    out.values.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(grid_.n));
    return out;
  }

  /// Real draw with covariance c0; needs a real-valued covariance.
  template <class Rng>
  RealTrajectory sample_real(Rng& rng) const {
    if (!real_)
      throw std::invalid_argument("CirculantSampler::sample_real: covariance is complex-valued");
    std::vector<Complex> full = draw(rng);
    RealTrajectory out{grid_, std::vector<double>(grid_.n)};
    for (std::size_t i = 0; i < grid_.n; ++i) out.values[i] = std::sqrt(2.0) * full[i].real();
    return out;
  }

 private:
  bool try_embedding(const StationaryCovariance& cov, std::size_t m, const Tolerances& tol) {
    std::vector<Complex> first(m);
    const std::size_t half = m / 2;
    for (std::size_t j = 0; j <= half; ++j) first[j] = cov(static_cast<double>(j) * grid_.dt);
    first[half] = Complex{first[half].real(), 0.0};
    for (std::size_t j = 1; j < half; ++j) first[m - j] = std::conj(first[j]);

    std::vector<Complex> spectrum;
    Eigen::FFT<double> fft;
    fft.fwd(spectrum, first);

    double lo = spectrum[0].real();
    double hi = lo;
    double trace = 0.0;
    double negative = 0.0;
    for (const auto& s : spectrum) {
      lo = std::min(lo, s.real());
      hi = std::max(hi, s.real());
      trace += std::max(s.real(), 0.0);
      if (s.real() < 0.0) negative += -s.real();
    }
    report_.embedding_size = m;
    report_.min_eigenvalue = lo;
    report_.max_eigenvalue = hi;
    report_.clipped_power_fraction = trace > 0.0 ? negative / trace : 0.0;
    if (!(hi > 0.0)) throw EmbeddingError("circulant embedding: covariance has no positive power");
    if (lo < -tol.embedding_negative_error * hi) return false;

    sqrt_eigen_.resize(m);
    const double scale = std::sqrt(static_cast<double>(m));
    for (std::size_t k = 0; k < m; ++k)
      sqrt_eigen_[k] = scale * std::sqrt(std::max(spectrum[k].real(), 0.0));
    return true;
  }

  template <class Rng>
  std::vector<Complex> draw(Rng& rng) const {
    const std::size_t m = sqrt_eigen_.size();
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::vector<Complex> noise(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      noise[k] = sqrt_eigen_[k] * Complex{re, im};
    }
    std::vector<Complex> out;
    Eigen::FFT<double> fft;
    fft.inv(out, noise);
    return out;
  }

  TrajectoryGrid grid_;
  bool real_ = false;
  EmbeddingReport report_;
  std::vector<double> sqrt_eigen_;
};

/// One draw of the zero-mean real stationary process with covariance cov.
inline RealTrajectory sample_stationary_gp(const StationaryCovariance& cov, TrajectoryGrid grid,
                                           std::uint64_t seed,
                                           const Tolerances& tol = default_tolerances()) {
  std::mt19937_64 rng(seed);
  return CirculantSampler(cov, grid, tol).sample_real(rng);
}

/// One draw of the circularly-symmetric complex process with covariance cov.
inline ComplexTrajectory sample_complex_circular_gp(const StationaryCovariance& cov,
                                                    TrajectoryGrid grid, std::uint64_t seed,
                                                    const Tolerances& tol = default_tolerances()) {
  std::mt19937_64 rng(seed);
  return CirculantSampler(cov, grid, tol).sample_complex(rng);
}

/// Analytic signal via FFT: interior positive-frequency bins doubled,
/// negative bins zeroed, DC and Nyquist bins unchanged. The real part of
/// the result reproduces the input.
inline ComplexTrajectory analytic_signal(const RealTrajectory& x) {
  const std::size_t n = x.values.size();
  if (n == 0 || !std::has_single_bit(n))
    throw std::invalid_argument("analytic_signal: length must be a power of two");
  std::vector<Complex> in(x.values.begin(), x.values.end());
  std::vector<Complex> spec;
  Eigen::FFT<double> fft;
  fft.fwd(spec, in);
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k < n)
      spec[k] *= 2.0;
    else if (2 * k > n)
      spec[k] = Complex{};
  }
  ComplexTrajectory out{x.grid, {}};
  fft.inv(out.values, spec);
  return out;
}

/// The sub-trajectory of `count` samples starting at index `first`
/// (count a power of two).
inline ComplexTrajectory slice(const ComplexTrajectory& x, std::size_t first, std::size_t count) {
  if (first + count > x.values.size()) throw std::invalid_argument("slice: out of range");
  ComplexTrajectory out{TrajectoryGrid(x.grid.time(first), x.grid.dt, count), {}};
  out.values.assign(x.values.begin() + static_cast<std::ptrdiff_t>(first),
                    x.values.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

/// Bedrosian route: analytic signal of a real draw on a grid extended by
/// five envelope lengths on each side, then cut back to a power-of-two grid
/// starting at a and covering [a, b] with spacing dt. The embedding is set
/// up once; each draw costs two FFTs.
class AnalyticViaRealSampler {
 public:
  AnalyticViaRealSampler(const StationaryCovariance& real_cov, double envelope, double a, double b,
                         double dt, const Tolerances& tol = default_tolerances())
      : inner_(std::bit_ceil(static_cast<std::size_t>(std::ceil((b - a) / dt)) + 1)),
        margin_(static_cast<std::size_t>(std::ceil(5.0 * envelope / dt))),
        sampler_(real_cov,
                 TrajectoryGrid(a - static_cast<double>(margin_) * dt, dt,
                                std::bit_ceil(inner_ + 2 * margin_)),
                 tol) {}

  const EmbeddingReport& report() const { return sampler_.report(); }

  template <class Rng>
  ComplexTrajectory operator()(Rng& rng) const {
    return slice(analytic_signal(sampler_.sample_real(rng)), margin_, inner_);
  }

 private:
  std::size_t inner_;
  std::size_t margin_;
  CirculantSampler sampler_;
};

inline ComplexTrajectory sample_analytic_via_real(const StationaryCovariance& real_cov,
                                                  double envelope, double a, double b, double dt,
                                                  std::uint64_t seed,
                                                  const Tolerances& tol = default_tolerances()) {
  std::mt19937_64 rng(seed);
  return AnalyticViaRealSampler(real_cov, envelope, a, b, dt, tol)(rng);
}

}  // namespace ppfock
