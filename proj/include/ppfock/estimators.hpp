#pragma once

// Empirical statistics of point-process batches: intensity, pair
// correlation, count dispersion and two-window correlation ratios.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppfock/config.hpp"
#include "ppfock/kernels.hpp"
#include "ppfock/point_configuration.hpp"
#include "ppfock/quadrature.hpp"

namespace ppfock {

namespace detail {

inline const Window& common_window(const Batch& batch) {
  if (batch.empty()) throw std::invalid_argument("estimator: empty batch");
  const Window& w = batch.front().window();
  for (const auto& c : batch)
    if (!(c.window() == w)) throw std::invalid_argument("estimator: inconsistent windows");
  return w;
}

inline void require_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("estimator: need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("estimator: bin edges must increase");
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

inline MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

}  // namespace detail

inline std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("uniform_edges: need bins > 0 and hi > lo");
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  return e;
}

/// 50 uniform bins over [0, |w|/4].
inline std::vector<double> default_pcf_edges(const Window& w) {
  return uniform_edges(0.0, w.length() / 4.0, 50);
}

// ---------------------------------------------------------------------------

struct IntensityEstimate {
  std::vector<double> bin_edges;  // absolute positions
  std::vector<double> rate;
  std::vector<double> std_error;
  std::size_t n_replicates = 0;
};

/// Counts per bin / (bin width * replicates), std_error from the
/// across-replicate spread.
inline IntensityEstimate estimate_intensity(const Batch& batch, const std::vector<double>& edges) {
  detail::common_window(batch);
  detail::require_edges(edges);
  const std::size_t bins = edges.size() - 1;
  IntensityEstimate out{edges, std::vector<double>(bins), std::vector<double>(bins), batch.size()};
  std::vector<double> per(batch.size());
  for (std::size_t b = 0; b < bins; ++b) {
    const double width = edges[b + 1] - edges[b];
    for (std::size_t r = 0; r < batch.size(); ++r)
      per[r] = static_cast<double>(batch[r].count_in(edges[b], edges[b + 1])) / width;
    const auto ms = detail::mean_sd(per);
    out.rate[b] = ms.mean;
    out.std_error[b] = ms.sd / std::sqrt(static_cast<double>(batch.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct CountStatistics {
  std::size_t n_replicates = 0;
  double mean = 0.0;
  double variance = 0.0;
  double fano = 0.0;
  double mean_stderr = 0.0;
  double fano_stderr = 0.0;  // delta method
};

inline CountStatistics count_statistics_of(const std::vector<double>& counts) {
  if (counts.empty()) throw std::invalid_argument("count_statistics: empty batch");
  CountStatistics s;
  s.n_replicates = counts.size();
  const auto ms = detail::mean_sd(counts);
  s.mean = ms.mean;
  s.variance = ms.sd * ms.sd;
  s.mean_stderr = ms.sd / std::sqrt(static_cast<double>(counts.size()));
  if (s.mean > 0.0) {
    s.fano = s.variance / s.mean;
    // influence function of variance/mean
    std::vector<double> psi(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double d = counts[i] - s.mean;
      psi[i] = (d * d - s.variance) / s.mean - s.variance * d / (s.mean * s.mean);
    }
    s.fano_stderr = detail::mean_sd(psi).sd / std::sqrt(static_cast<double>(counts.size()));
  }
  return s;
}

/// Across-replicate count mean, variance and Fano factor variance/mean.
inline CountStatistics count_statistics(const Batch& batch) {
  detail::common_window(batch);
  std::vector<double> counts;
  counts.reserve(batch.size());
  for (const auto& c : batch) counts.push_back(static_cast<double>(c.size()));
  return count_statistics_of(counts);
}

/// Same, counting only the points in [lo, hi).
inline CountStatistics count_statistics(const Batch& batch, double lo, double hi) {
  detail::common_window(batch);
  std::vector<double> counts;
  counts.reserve(batch.size());
  for (const auto& c : batch) counts.push_back(static_cast<double>(c.count_in(lo, hi)));
  return count_statistics_of(counts);
}

// ---------------------------------------------------------------------------

/// How the pair-distance histogram is normalized.
///  - homogeneous: against a Poisson process with the batch's mean intensity
///    on the same window (the exact rectangular-window edge factor).
///  - inhomogeneous: against a Poisson process whose intensity is the
///    batch's binned intensity profile; coincides with the homogeneous
///    reference when the profile is flat, and is the right choice for
///    processes without translation invariance.
struct PcfNormalization {
  enum class Kind { homogeneous, inhomogeneous };
  Kind kind = Kind::homogeneous;
  std::size_t profile_bins = 256;
};

struct PcfEstimate {
  std::vector<double> bin_edges;
  std::vector<double> g_hat;
  std::vector<double> std_error;
  std::vector<double> reference;  // expected unordered pair count per replicate under Poisson
  std::size_t n_replicates = 0;

  double r_mid(std::size_t b) const { return 0.5 * (bin_edges[b] + bin_edges[b + 1]); }
};

namespace detail {

// P(|X - Y| <= s) for X, Y independent uniform on the same cell of width h.
inline double same_cell_cdf(double s, double h) {
  if (s <= 0.0) return 0.0;
  if (s >= h) return 1.0;
  const double u = 1.0 - s / h;
  return 1.0 - u * u;
}

// P(Y - X <= s) for X uniform on [0, h], Y uniform on [d h, (d + 1) h], d >= 1.
inline double offset_cell_cdf(double s, double h, double d) {
  const double lo = (d - 1.0) * h;
  const double mid = d * h;
  const double hi = (d + 1.0) * h;
  if (s <= lo) return 0.0;
  if (s >= hi) return 1.0;
  if (s <= mid) {
    const double u = (s - lo) / h;
    return 0.5 * u * u;
  }
  const double u = (hi - s) / h;
  return 1.0 - 0.5 * u * u;
}

/// Expected unordered pair counts per distance bin for a Poisson process with
/// piecewise-constant intensity `profile` on equal cells covering the window.
inline std::vector<double> poisson_pair_reference(const std::vector<double>& profile,
                                                  double window_length,
                                                  const std::vector<double>& edges) {
  const std::size_t m = profile.size();
  const double h = window_length / static_cast<double>(m);
  const std::size_t bins = edges.size() - 1;
  std::vector<double> ref(bins, 0.0);
  const double rmax = edges.back();
  for (std::size_t d = 0; d < m; ++d) {
    if (d >= 2 && (static_cast<double>(d) - 1.0) * h > rmax) break;
    double wsum = 0.0;
    for (std::size_t u = 0; u + d < m; ++u) wsum += profile[u] * profile[u + d];
    if (wsum == 0.0) continue;
    const double mass = (d == 0 ? 0.5 : 1.0) * wsum * h * h;
    for (std::size_t b = 0; b < bins; ++b) {
      double p;
      if (d == 0)
        p = same_cell_cdf(edges[b + 1], h) - same_cell_cdf(edges[b], h);
      else
        p = offset_cell_cdf(edges[b + 1], h, static_cast<double>(d)) -
            offset_cell_cdf(edges[b], h, static_cast<double>(d));
      ref[b] += mass * p;
    }
  }
  return ref;
}

/// Unordered pair counts per distance bin for one configuration.
inline void pair_counts(const PointConfiguration& c, const std::vector<double>& edges,
                        std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& p = c.points();
  const double rmin = edges.front();
  const double rmax = edges.back();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double r = p[j] - p[i];
      if (r >= rmax) break;
      if (r < rmin) continue;
      auto it = std::upper_bound(edges.begin(), edges.end(), r);
      out[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
    }
  }
}

}  // namespace detail

/// Pair correlation estimate from the histogram of pairwise distances,
/// normalized bin by bin by the Poisson reference (see PcfNormalization).
/// Assumes a translation-invariant process unless the inhomogeneous
/// normalization is chosen.
inline PcfEstimate estimate_pcf(const Batch& batch, const std::vector<double>& edges,
                                PcfNormalization norm = {}) {
  const Window& w = detail::common_window(batch);
  detail::require_edges(edges);
  if (edges.front() < 0.0 || edges.back() > w.length())
    throw std::invalid_argument("estimate_pcf: bins beyond window length");
  const std::size_t bins = edges.size() - 1;
  const auto reps = static_cast<double>(batch.size());

  std::vector<double> profile;
  if (norm.kind == PcfNormalization::Kind::homogeneous) {
    double total = 0.0;
    for (const auto& c : batch) total += static_cast<double>(c.size());
    profile.assign(1, total / (reps * w.length()));
  } else {
    const std::size_t m = std::max<std::size_t>(1, norm.profile_bins);
    const double h = w.length() / static_cast<double>(m);
    profile.assign(m, 0.0);
    for (const auto& c : batch)
      for (double x : c.points()) {
        auto u = static_cast<std::size_t>((x - w.a) / h);
        profile[std::min(u, m - 1)] += 1.0;
      }
    for (auto& v : profile) v /= reps * h;
  }

  PcfEstimate out;
  out.bin_edges = edges;
  out.n_replicates = batch.size();
  out.reference = detail::poisson_pair_reference(profile, w.length(), edges);
  out.g_hat.assign(bins, 0.0);
  out.std_error.assign(bins, 0.0);

  std::vector<double> sum(bins, 0.0), sum2(bins, 0.0), counts(bins);
  for (const auto& c : batch) {
    detail::pair_counts(c, edges, counts);
    for (std::size_t b = 0; b < bins; ++b) {
      sum[b] += counts[b];
      sum2[b] += counts[b] * counts[b];
    }
  }
  for (std::size_t b = 0; b < bins; ++b) {
    const double mean = sum[b] / reps;
    const double var = batch.size() > 1 ? (sum2[b] - reps * mean * mean) / (reps - 1.0) : 0.0;
    const double ref = out.reference[b];
    out.g_hat[b] = ref > 0.0 ? mean / ref : 0.0;
    out.std_error[b] = ref > 0.0 ? std::sqrt(std::max(var, 0.0) / reps) / ref : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct RatioEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// rho_2 integrated over A x B divided by the product of the integrated
/// intensities: E[N_A N_B] / (E N_A E N_B) for disjoint windows, or
/// E[N_A (N_A - 1)] / (E N_A)^2 when A and B coincide. Delta-method std_error.
inline RatioEstimate estimate_pair_ratio(const Batch& batch, double a_lo, double a_hi, double b_lo,
                                         double b_hi) {
  detail::common_window(batch);
  const bool same = a_lo == b_lo && a_hi == b_hi;
  if (!same && a_hi > b_lo && b_hi > a_lo)
    throw std::invalid_argument("estimate_pair_ratio: windows must coincide or be disjoint");
  const std::size_t n = batch.size();
  std::vector<double> x(n), y(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(batch[i].count_in(a_lo, a_hi));
    y[i] = static_cast<double>(batch[i].count_in(b_lo, b_hi));
    xy[i] = same ? x[i] * (x[i] - 1.0) : x[i] * y[i];
  }
  const double mx = detail::mean_sd(x).mean;
  const double my = detail::mean_sd(y).mean;
  const double mxy = detail::mean_sd(xy).mean;
  RatioEstimate out;
  if (!(mx > 0.0) || !(my > 0.0)) return out;
  out.value = mxy / (mx * my);
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i)
    psi[i] = out.value * ((xy[i] - mxy) / (mxy == 0.0 ? 1.0 : mxy) - (x[i] - mx) / mx - (y[i] - my) / my);
  out.std_error = detail::mean_sd(psi).sd / std::sqrt(static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------
// Theory curves matched to the estimator's binning

/// Bin averages of 1 + eta |c0(r)|^2 / c0(0)^2 with the edge weight (L - r)
/// of a rectangular window of length L.
inline std::vector<double> binned_theoretical_pcf(const StationaryCovariance& cov, Statistics stats,
                                                  double window_length,
                                                  const std::vector<double>& edges) {
  detail::require_edges(edges);
  std::vector<double> out(edges.size() - 1);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const QuadratureRule q = gauss_legendre(16, edges[b], edges[b + 1]);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double wgt = q.weights[i] * (window_length - q.nodes[i]);
      num += wgt * theoretical_pcf(cov, q.nodes[i], stats);
      den += wgt;
    }
    out[b] = num / den;
  }
  return out;
}

/// Pair-averaged pcf of a spectral kernel on a window:
/// int int_{|x-y| in bin} rho_2 / int int_{|x-y| in bin} rho_1 rho_1.
/// Gauss-Legendre in the distance r, midpoint rule with `nodes` cells in x
/// over [a, b - r]. Matches the inhomogeneous estimator.
inline std::vector<double> binned_theoretical_pcf(const SpectralKernel& kernel, const Window& w,
                                                  const std::vector<double>& edges,
                                                  std::size_t nodes = 1024) {
  detail::require_edges(edges);
  if (edges.back() > w.length()) throw std::invalid_argument("binned_theoretical_pcf: bins beyond window");
  const auto rank = static_cast<Eigen::Index>(kernel.rank());
  Eigen::VectorXd lam(rank);
  for (Eigen::Index k = 0; k < rank; ++k) lam(k) = kernel.eigenvalues[static_cast<std::size_t>(k)];
  const double sign = eta(kernel.stats);
  const auto n = static_cast<Eigen::Index>(nodes);
  ComplexMatrix fx(rank, n), fy(rank, n);
  std::vector<double> out(edges.size() - 1, 1.0);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const QuadratureRule q = gauss_legendre(8, edges[b], edges[b + 1]);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double r = q.nodes[i];
      const double h = (w.length() - r) / static_cast<double>(nodes);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double x = w.a + (static_cast<double>(j) + 0.5) * h;
        fx.col(j) = kernel.features(x);
        fy.col(j) = kernel.features(x + r);
      }
      const Eigen::VectorXd kxx = lam.transpose() * fx.cwiseAbs2();
      const Eigen::VectorXd kyy = lam.transpose() * fy.cwiseAbs2();
      const ComplexVector kxy = (fx.array() * fy.conjugate().array()).matrix().transpose() * lam.cast<Complex>();
      const double prod = kxx.dot(kyy);
      num += q.weights[i] * h * (prod + sign * kxy.squaredNorm());
      den += q.weights[i] * h * prod;
    }
    if (den > 0.0) out[b] = num / den;
  }
  return out;
}

}  // namespace ppfock
