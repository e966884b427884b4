#pragma once

// Samplers for Poisson, Cox, permanental, determinantal and Fock-state
// point processes on an interval window.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppfock/config.hpp"
#include "ppfock/gaussian_field.hpp"
#include "ppfock/kernels.hpp"
#include "ppfock/point_configuration.hpp"

namespace ppfock {

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// splitmix64 step; seeds of independent replicates are derived with it.
inline std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t replicate) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (replicate + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Kernel validity

struct KernelValidity {
  bool valid = true;
  std::vector<std::size_t> violations;  // offending eigenvalue indices
  std::string message;
};

/// Fermions need every eigenvalue in [0, 1], bosons every eigenvalue >= 0.
inline KernelValidity validate_kernel(const SpectralKernel& kernel) {
  KernelValidity out;
  std::ostringstream os;
  for (std::size_t k = 0; k < kernel.eigenvalues.size(); ++k) {
    const double l = kernel.eigenvalues[k];
    const bool ok = kernel.stats == Statistics::fermion ? (l >= 0.0 && l <= 1.0) : (l >= 0.0);
    if (!ok || !std::isfinite(l)) {
      out.violations.push_back(k);
      os << "eigenvalue " << k << " = " << l << " outside "
         << (kernel.stats == Statistics::fermion ? "[0, 1]" : "[0, inf)") << "; ";
    }
  }
  out.valid = out.violations.empty();
  out.message = out.valid ? "ok" : os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Grid helpers

namespace detail {

/// Regular partition of a window into cells of equal width.
struct CellGrid {
  Window window;
  std::size_t cells = 1;

  CellGrid(Window w, int nodes_per_unit)
      : window(w),
        cells(std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(w.length() * nodes_per_unit)))) {}

  double width() const { return window.length() / static_cast<double>(cells); }
  double left(std::size_t g) const { return window.a + width() * static_cast<double>(g); }
  double mid(std::size_t g) const { return left(g) + 0.5 * width(); }
};

/// Sorted points with exact ties re-drawn uniformly inside their cell.
template <class Rng>
PointConfiguration make_simple(Window w, std::vector<double> pts, const CellGrid* grid, Rng& rng) {
  std::sort(pts.begin(), pts.end());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int pass = 0; pass < 8; ++pass) {
    bool tie = false;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i] == pts[i - 1]) {
        tie = true;
        if (grid) {
          const auto g = static_cast<std::size_t>(
              std::min<double>(static_cast<double>(grid->cells - 1),
                               std::floor((pts[i] - w.a) / grid->width())));
          pts[i] = grid->left(g) + unif(rng) * grid->width();
        } else {
          pts[i] = std::nextafter(pts[i], w.b);
        }
      }
    }
    if (!tie) break;
    std::sort(pts.begin(), pts.end());
  }
  for (auto& x : pts) x = std::clamp(x, w.a, w.b);
  return PointConfiguration(w, std::move(pts));
}

/// Index g with cdf[g] > u >= cdf[g-1]; cdf is inclusive and increasing.
inline std::size_t search_cdf(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Poisson

/// Inhomogeneous Poisson process by thinning a homogeneous rate_max process.
template <class Rng>
PointConfiguration sample_poisson(const std::function<double(double)>& rate_fn, double rate_max,
                                  Window w, Rng& rng) {
  if (!(rate_max > 0.0)) throw std::invalid_argument("sample_poisson: rate_max must be positive");
  std::poisson_distribution<long long> count(rate_max * w.length());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const long long n = count(rng);
  std::vector<double> kept;
  for (long long i = 0; i < n; ++i) {
    const double t = w.a + unif(rng) * w.length();
    const double r = rate_fn(t);
    if (r > rate_max || r < 0.0 || !std::isfinite(r)) {
      std::ostringstream os;
      os << "sample_poisson: rate(" << t << ") = " << r << " outside [0, rate_max = " << rate_max
         << "]";
      throw SamplingError(os.str());
    }
    if (unif(rng) * rate_max < r) kept.push_back(t);
  }
  return detail::make_simple(w, std::move(kept), nullptr, rng);
}

inline PointConfiguration sample_poisson(const std::function<double(double)>& rate_fn,
                                         double rate_max, Window w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_poisson(rate_fn, rate_max, w, rng);
}

// ---------------------------------------------------------------------------
// Cox

/// Poisson process conditional on the path: rate scale * |E(t)|^2 with the
/// field held constant on each grid cell [t_i, t_i + dt).
template <class Rng>
PointConfiguration sample_cox(const ComplexTrajectory& field, double scale, Window w, Rng& rng) {
  if (!(scale >= 0.0)) throw std::invalid_argument("sample_cox: scale must be non-negative");
  const TrajectoryGrid& g = field.grid;
  const double support_end = g.t0 + g.dt * static_cast<double>(field.values.size());
  if (w.a < g.t0 || w.b > support_end)
    throw std::invalid_argument("sample_cox: window exceeds trajectory support");
  if (scale == 0.0) return PointConfiguration(w);

  const auto first = static_cast<std::size_t>(std::floor((w.a - g.t0) / g.dt));
  const auto last = std::min(field.values.size() - 1,
                             static_cast<std::size_t>(std::floor((w.b - g.t0) / g.dt)));
  std::vector<double> lefts, widths, cdf;
  double total = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double lo = std::max(w.a, g.time(i));
    const double hi = std::min(w.b, g.time(i) + g.dt);
    if (!(hi > lo)) continue;
    total += scale * std::norm(field.values[i]) * (hi - lo);
    lefts.push_back(lo);
    widths.push_back(hi - lo);
    cdf.push_back(total);
  }
  if (!(total > 0.0)) return PointConfiguration(w);
  std::poisson_distribution<long long> count(total);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const long long n = count(rng);
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (long long k = 0; k < n; ++k) {
    const double u = unif(rng) * total;
    const std::size_t c = detail::search_cdf(cdf, u);
    const double below = c == 0 ? 0.0 : cdf[c - 1];
    const double frac = std::clamp((u - below) / (cdf[c] - below), 0.0, 1.0);
    pts.push_back(lefts[c] + frac * widths[c]);
  }
  return detail::make_simple(w, std::move(pts), nullptr, rng);
}

inline PointConfiguration sample_cox(const ComplexTrajectory& field, double scale, Window w,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_cox(field, scale, w, rng);
}

// ---------------------------------------------------------------------------
// Permanental

/// Cox process driven by |E|^2 for a circular complex Gaussian field E with
/// covariance cov: the permanental process with kernel scale * cov.
class PermanentalSampler {
 public:
  PermanentalSampler(const StationaryCovariance& cov, double scale, Window w,
                     const Tolerances& tol = default_tolerances())
      : scale_(scale), window_(w), field_(cov, grid_for(cov, w, tol), tol) {
    if (!(scale >= 0.0)) throw std::invalid_argument("PermanentalSampler: negative scale");
  }

  const EmbeddingReport& embedding() const { return field_.report(); }
  const TrajectoryGrid& grid() const { return field_.grid(); }

  template <class Rng>
  PointConfiguration operator()(Rng& rng) const {
    return sample_cox(field_.sample_complex(rng), scale_, window_, rng);
  }

 private:
  static TrajectoryGrid grid_for(const StationaryCovariance& cov, Window w, const Tolerances& tol) {
    double dt = 1.0 / tol.grid_nodes_per_unit;
    if (auto it = cov.params.find("omega"); it != cov.params.end() && it->second > 0.0)
      dt = std::min(dt, std::numbers::pi / (4.0 * it->second));
    const auto cells = static_cast<std::size_t>(std::ceil(w.length() / dt));
    return TrajectoryGrid(w.a, w.length() / static_cast<double>(cells),
                          std::bit_ceil(cells));
  }

  double scale_;
  Window window_;
  CirculantSampler field_;
};

inline PointConfiguration sample_permanental(const StationaryCovariance& cov, double scale,
                                             Window w, std::uint64_t seed,
                                             const Tolerances& tol = default_tolerances()) {
  std::mt19937_64 rng(seed);
  return PermanentalSampler(cov, scale, w, tol)(rng);
}

// ---------------------------------------------------------------------------
// Determinantal

/// Grid sampler for DPPs with a spectral kernel.
///
/// Feature vectors phi(x) are tabulated at cell midpoints. A projection DPP
/// onto a subset S of the basis is drawn by the chain rule: the i-th point
/// has density ||P_i phi_S(x)||^2 / (|S| - i), where P_i removes the span
/// of the already drawn feature vectors. Each step draws candidate cells
/// from the full diagonal sum_k |phi_k(x)|^2 and accepts with probability
/// ||P_i phi_S(x)||^2 / ||phi(x)||^2, which samples the conditional
/// density exactly without re-tabulating it.
class DppSampler {
 public:
  DppSampler(const SpectralKernel& kernel, Window w, const Tolerances& tol = default_tolerances())
      : kernel_(kernel), grid_(w, tol.grid_nodes_per_unit), tol_(tol) {
    const auto validity = validate_kernel(kernel);
    if (kernel.stats != Statistics::fermion)
      throw std::invalid_argument("DppSampler: kernel must have fermionic statistics");
    if (!validity.valid) throw std::invalid_argument("DppSampler: " + validity.message);
    rank_ = static_cast<Eigen::Index>(kernel.rank());
    features_.resize(rank_, static_cast<Eigen::Index>(grid_.cells));
    cdf_.resize(grid_.cells);
    row_norm2_.resize(grid_.cells);
    double total = 0.0;
    for (std::size_t g = 0; g < grid_.cells; ++g) {
      features_.col(static_cast<Eigen::Index>(g)) = kernel.features(grid_.mid(g));
      row_norm2_[g] = features_.col(static_cast<Eigen::Index>(g)).squaredNorm();
      total += row_norm2_[g] * grid_.width();
      cdf_[g] = total;
    }
    captured_mass_ = total;
  }

  /// Quadrature of sum_k |phi_k|^2 over the window; equals the rank when
  /// the window holds the whole basis.
  double captured_mass() const { return captured_mass_; }
  const Window& window() const { return grid_.window; }

  /// Projection DPP onto the basis functions with keep[k] true.
  template <class Rng>
  PointConfiguration sample_projection(const std::vector<bool>& keep, Rng& rng) const {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < rank_; ++k)
      if (keep[static_cast<std::size_t>(k)]) idx.push_back(k);
    const auto n = static_cast<Eigen::Index>(idx.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ComplexMatrix basis(n, n);  // columns: orthonormal drawn directions
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n));
    ComplexVector v(n);
    constexpr long long max_tries = 50'000'000;
    for (Eigen::Index i = 0; i < n; ++i) {
      long long tries = 0;
      for (;;) {
        if (++tries > max_tries)
          throw SamplingError("DppSampler: no acceptance after " + std::to_string(max_tries) +
                              " proposals; projected diagonal mass vanished");
        const std::size_t g = detail::search_cdf(cdf_, unif(rng) * captured_mass_);
        const double full = row_norm2_[g];
        if (!(full > 0.0)) continue;
        for (Eigen::Index j = 0; j < n; ++j) v(j) = features_(idx[static_cast<std::size_t>(j)], static_cast<Eigen::Index>(g));
        const double before = v.squaredNorm();
        if (i > 0) v -= basis.leftCols(i) * (basis.leftCols(i).adjoint() * v);
        double resid = v.squaredNorm();
        if (unif(rng) * full >= resid) continue;
        if (i > 0 && resid < tol_.reorthogonalize_below * tol_.reorthogonalize_below * before) {
          v -= basis.leftCols(i) * (basis.leftCols(i).adjoint() * v);
          resid = v.squaredNorm();
        }
        if (resid < tol_.projection_rank_loss)
          throw SamplingError("DppSampler: projected diagonal mass " + std::to_string(resid) +
                              " below rank-loss threshold");
        basis.col(i) = v / std::sqrt(resid);
        pts.push_back(grid_.left(g) + unif(rng) * grid_.width());
        break;
      }
    }
    return detail::make_simple(grid_.window, std::move(pts), &grid_, rng);
  }

  /// Projection DPP onto the whole basis; needs every eigenvalue equal to 1.
  template <class Rng>
  PointConfiguration sample_projection(Rng& rng) const {
    for (double l : kernel_.eigenvalues)
      if (l != 1.0)
        throw std::invalid_argument("DppSampler::sample_projection: kernel is not a projection");
    return sample_projection(std::vector<bool>(static_cast<std::size_t>(rank_), true), rng);
  }

  /// Mixture representation: keep basis function k with probability lambda_k,
  /// then draw the projection DPP on the kept functions.
  template <class Rng>
  PointConfiguration sample_mixture(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<bool> keep(static_cast<std::size_t>(rank_));
    for (std::size_t k = 0; k < keep.size(); ++k) keep[k] = unif(rng) < kernel_.eigenvalues[k];
    return sample_projection(keep, rng);
  }

 private:
  SpectralKernel kernel_;
  detail::CellGrid grid_;
  Tolerances tol_;
  Eigen::Index rank_ = 0;
  ComplexMatrix features_;
  std::vector<double> row_norm2_;
  std::vector<double> cdf_;
  double captured_mass_ = 0.0;
};

inline PointConfiguration sample_projection_dpp(const SpectralKernel& kernel, Window w,
                                                std::uint64_t seed,
                                                const Tolerances& tol = default_tolerances()) {
  std::mt19937_64 rng(seed);
  return DppSampler(kernel, w, tol).sample_projection(rng);
}

inline PointConfiguration sample_dpp_mixture(const SpectralKernel& kernel, Window w,
                                             std::uint64_t seed,
                                             const Tolerances& tol = default_tolerances()) {
  std::mt19937_64 rng(seed);
  return DppSampler(kernel, w, tol).sample_mixture(rng);
}

// ---------------------------------------------------------------------------
// Fock state

/// k i.i.d. times with density proportional to |phi_plus|^2: the detection
/// process of a single-mode k-photon Fock state.
class FockStateSampler {
 public:
  FockStateSampler(const std::function<Complex(double)>& phi_plus, int k, Window w,
                   const Tolerances& tol = default_tolerances())
      : k_(k), grid_(w, tol.grid_nodes_per_unit) {
    if (k < 1) throw std::invalid_argument("FockStateSampler: k must be positive");
    cdf_.resize(grid_.cells);
    double total = 0.0;
    for (std::size_t g = 0; g < grid_.cells; ++g) {
      total += std::norm(phi_plus(grid_.mid(g))) * grid_.width();
      cdf_[g] = total;
    }
    if (!(total > 0.0) || !std::isfinite(total))
      throw std::invalid_argument("FockStateSampler: |phi_plus|^2 has zero mass on the window");
  }

  template <class Rng>
  PointConfiguration operator()(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> pts;
    for (int i = 0; i < k_; ++i) {
      const std::size_t g = detail::search_cdf(cdf_, unif(rng) * cdf_.back());
      pts.push_back(grid_.left(g) + unif(rng) * grid_.width());
    }
    return detail::make_simple(grid_.window, std::move(pts), &grid_, rng);
  }

 private:
  int k_;
  detail::CellGrid grid_;
  std::vector<double> cdf_;
};

inline PointConfiguration sample_fock_pp(const std::function<Complex(double)>& phi_plus, int k,
                                         Window w, std::uint64_t seed,
                                         const Tolerances& tol = default_tolerances()) {
  std::mt19937_64 rng(seed);
  return FockStateSampler(phi_plus, k, w, tol)(rng);
}

}  // namespace ppfock
