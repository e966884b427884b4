#pragma once

// Exact truncated Fock-space computations. Operators are stored as sparse
// complex matrices on the occupation-number basis in lexicographic order
// (mode 0 most significant). This is the brute-force oracle the Wick
// expansion and the grand-canonical formulas are checked against.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "ppfock/config.hpp"
#include "ppfock/wick_algebra.hpp"

namespace ppfock {

using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

/// Modes and truncation of a Fock space. Fermions always have cutoff 1.
struct ModeSpec {
  int n_modes = 1;
  int cutoff = 1;
  Statistics stats = Statistics::fermion;

  static ModeSpec fermions(int n_modes) { return checked({n_modes, 1, Statistics::fermion}); }
  static ModeSpec bosons(int n_modes, int cutoff) {
    return checked({n_modes, cutoff, Statistics::boson});
  }

  std::size_t dimension() const {
    std::size_t d = 1;
    for (int i = 0; i < n_modes; ++i) d *= static_cast<std::size_t>(cutoff + 1);
    return d;
  }

  /// Occupation numbers of basis state `index`.
  std::vector<int> occupations(std::size_t index) const {
    std::vector<int> n(static_cast<std::size_t>(n_modes));
    const auto base = static_cast<std::size_t>(cutoff + 1);
    for (int i = n_modes - 1; i >= 0; --i) {
      n[static_cast<std::size_t>(i)] = static_cast<int>(index % base);
      index /= base;
    }
    return n;
  }

  std::size_t index_of(const std::vector<int>& occ) const {
    std::size_t idx = 0;
    for (int v : occ) idx = idx * static_cast<std::size_t>(cutoff + 1) + static_cast<std::size_t>(v);
    return idx;
  }

  bool operator==(const ModeSpec&) const = default;

 private:
  static ModeSpec checked(ModeSpec s, const Tolerances& tol = default_tolerances()) {
    if (s.n_modes < 1) throw std::invalid_argument("ModeSpec: need at least one mode");
    if (s.stats == Statistics::fermion && s.cutoff != 1)
      throw std::invalid_argument("ModeSpec: fermions have cutoff 1");
    if (s.cutoff < 1) throw std::invalid_argument("ModeSpec: cutoff must be >= 1");
    double d = std::pow(static_cast<double>(s.cutoff + 1), s.n_modes);
    if (d > static_cast<double>(tol.fock_max_dim))
      throw DimensionError("ModeSpec: Fock dimension " + std::to_string(d) + " exceeds cap " +
                           std::to_string(tol.fock_max_dim));
    return s;
  }
};

/// An operator on the truncated Fock space of `spec`.
class FockOperator {
 public:
  FockOperator() = default;
  FockOperator(ModeSpec spec, SparseComplexMatrix m) : spec_(spec), matrix_(std::move(m)) {
    const auto d = static_cast<Eigen::Index>(spec_.dimension());
    if (matrix_.rows() != d || matrix_.cols() != d)
      throw std::invalid_argument("FockOperator: matrix dimension does not match mode spec");
    matrix_.makeCompressed();
  }

  const ModeSpec& spec() const { return spec_; }
  const SparseComplexMatrix& matrix() const { return matrix_; }
  ComplexMatrix dense() const { return ComplexMatrix(matrix_); }
  std::size_t dimension() const { return spec_.dimension(); }

  FockOperator adjoint() const { return {spec_, SparseComplexMatrix(matrix_.adjoint())}; }

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    check_same(a, b);
    return {a.spec_, SparseComplexMatrix((a.matrix_ * b.matrix_).pruned())};
  }
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    check_same(a, b);
    return {a.spec_, SparseComplexMatrix(a.matrix_ + b.matrix_)};
  }
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b) {
    check_same(a, b);
    return {a.spec_, SparseComplexMatrix(a.matrix_ - b.matrix_)};
  }
  friend FockOperator operator*(Complex s, const FockOperator& a) {
    return {a.spec_, SparseComplexMatrix(s * a.matrix_)};
  }

  Complex trace() const {
    Complex t{};
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k)
      for (SparseComplexMatrix::InnerIterator it(matrix_, k); it; ++it)
        if (it.row() == it.col()) t += it.value();
    return t;
  }

 private:
  static void check_same(const FockOperator& a, const FockOperator& b) {
    if (!(a.spec_ == b.spec_)) throw std::invalid_argument("FockOperator: mode specs differ");
  }

  ModeSpec spec_{};
  SparseComplexMatrix matrix_;
};

/// Density matrices share the operator representation; see
/// density_matrix_defects for the invariants.
using DensityMatrix = FockOperator;

enum class LadderKind { create, annihilate };

inline FockOperator identity_operator(const ModeSpec& spec) {
  const auto d = static_cast<Eigen::Index>(spec.dimension());
  SparseComplexMatrix m(d, d);
  m.setIdentity();
  return {spec, m};
}

/// a_mode or a_mode^+. Bosons: sqrt(n) matrix elements with a^+|cutoff> = 0.
/// Fermions: Jordan-Wigner sign (-1)^{sum_{j < mode} n_j}.
inline FockOperator ladder(const ModeSpec& spec, int mode, LadderKind kind) {
  if (mode < 0 || mode >= spec.n_modes)
    throw std::out_of_range("ladder: mode " + std::to_string(mode) + " out of range");
  const std::size_t dim = spec.dimension();
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(dim);
  const auto m = static_cast<std::size_t>(mode);
  for (std::size_t col = 0; col < dim; ++col) {
    std::vector<int> occ = spec.occupations(col);
    const int n = occ[m];
    double amp = 0.0;
    if (kind == LadderKind::create) {
      if (n >= spec.cutoff) continue;
      amp = spec.stats == Statistics::boson ? std::sqrt(n + 1.0) : 1.0;
      occ[m] = n + 1;
    } else {
      if (n == 0) continue;
      amp = spec.stats == Statistics::boson ? std::sqrt(static_cast<double>(n)) : 1.0;
      occ[m] = n - 1;
    }
    if (spec.stats == Statistics::fermion) {
      int before = 0;
      for (std::size_t j = 0; j < m; ++j) before += occ[j];
      if (before % 2 != 0) amp = -amp;
    }
    entries.emplace_back(static_cast<Eigen::Index>(spec.index_of(occ)),
                         static_cast<Eigen::Index>(col), Complex{amp, 0.0});
  }
  const auto d = static_cast<Eigen::Index>(dim);
  SparseComplexMatrix mat(d, d);
  mat.setFromTriplets(entries.begin(), entries.end());
  return {spec, mat};
}

inline FockOperator number_operator(const ModeSpec& spec, int mode) {
  return ladder(spec, mode, LadderKind::create) * ladder(spec, mode, LadderKind::annihilate);
}

inline FockOperator total_number_operator(const ModeSpec& spec) {
  FockOperator n = number_operator(spec, 0);
  for (int i = 1; i < spec.n_modes; ++i) n = n + number_operator(spec, i);
  return n;
}

// ---------------------------------------------------------------------------
// (Anti)commutation relations

struct CommutationReport {
  Statistics stats = Statistics::fermion;
  /// max |entry| of [a_i, a_j^+]_eta - delta_ij I and [a_i, a_j]_eta over
  /// basis pairs where every occupation is below the cutoff
  double below_cutoff_deviation = 0.0;
  /// same over pairs touching a state with some mode at the cutoff
  double top_layer_deviation = 0.0;
  /// overall max (equals below_cutoff_deviation for fermions, where no
  /// truncation happens)
  double max_deviation = 0.0;
};

/// Checks {a_i, a_j^+} = delta_ij, {a_i, a_j} = 0 (fermions) or the
/// commutator versions (bosons) entrywise.
inline CommutationReport check_commutation(const ModeSpec& spec) {
  CommutationReport rep;
  rep.stats = spec.stats;
  const double sign = spec.stats == Statistics::fermion ? 1.0 : -1.0;  // anticommutator vs commutator
  const FockOperator id = identity_operator(spec);
  std::vector<bool> top(spec.dimension(), false);
  if (spec.stats == Statistics::boson)
    for (std::size_t k = 0; k < top.size(); ++k) {
      const auto occ = spec.occupations(k);
      top[k] = std::any_of(occ.begin(), occ.end(), [&](int n) { return n >= spec.cutoff; });
    }

  std::vector<FockOperator> a, ad;
  for (int i = 0; i < spec.n_modes; ++i) {
    a.push_back(ladder(spec, i, LadderKind::annihilate));
    ad.push_back(ladder(spec, i, LadderKind::create));
  }
  auto scan = [&](const FockOperator& op) {
    const auto& m = op.matrix();
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
      for (SparseComplexMatrix::InnerIterator it(m, k); it; ++it) {
        const double v = std::abs(it.value());
        const bool on_top = top[static_cast<std::size_t>(it.row())] ||
                            top[static_cast<std::size_t>(it.col())];
        if (on_top)
          rep.top_layer_deviation = std::max(rep.top_layer_deviation, v);
        else
          rep.below_cutoff_deviation = std::max(rep.below_cutoff_deviation, v);
      }
  };
  for (int i = 0; i < spec.n_modes; ++i)
    for (int j = 0; j < spec.n_modes; ++j) {
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(j);
      FockOperator mixed = a[ii] * ad[jj] + Complex{sign, 0.0} * (ad[jj] * a[ii]);
      if (i == j) mixed = mixed - id;
      scan(mixed);
      scan(a[ii] * a[jj] + Complex{sign, 0.0} * (a[jj] * a[ii]));
    }
  rep.max_deviation = std::max(rep.below_cutoff_deviation, rep.top_layer_deviation);
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian (grand-canonical) states

struct GaussianState {
  DensityMatrix rho;
  double log_z = 0.0;  // log of the exact truncated trace
  std::vector<std::string> warnings;
};

/// rho = exp(-beta sum_i (nu_i - zeta) a_i^+ a_i) / Z on the truncated space.
inline GaussianState gaussian_density_matrix(const ModeSpec& spec, const std::vector<double>& nu,
                                             double beta, double zeta) {
  if (static_cast<int>(nu.size()) != spec.n_modes)
    throw std::invalid_argument("gaussian_density_matrix: need one level per mode");
  if (!(beta > 0.0)) throw std::invalid_argument("gaussian_density_matrix: beta must be positive");
  GaussianState out;
  if (spec.stats == Statistics::boson)
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (!(nu[i] > zeta))
        out.warnings.push_back("mode " + std::to_string(i) +
                               ": nu <= zeta, the untruncated boson state is not normalizable");
  const std::size_t dim = spec.dimension();
  std::vector<double> log_w(dim);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dim; ++k) {
    const auto occ = spec.occupations(k);
    double e = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) e += (nu[i] - zeta) * occ[i];
    log_w[k] = -beta * e;
    top = std::max(top, log_w[k]);
  }
  double sum = 0.0;
  for (double lw : log_w) sum += std::exp(lw - top);
  out.log_z = top + std::log(sum);
  if (!std::isfinite(out.log_z))
    throw std::overflow_error("gaussian_density_matrix: partition function is not finite");
  const auto d = static_cast<Eigen::Index>(dim);
  SparseComplexMatrix m(d, d);
  m.reserve(Eigen::VectorXi::Constant(d, 1));
  for (std::size_t k = 0; k < dim; ++k)
    m.insert(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
        Complex{std::exp(log_w[k] - out.log_z), 0.0};
  out.rho = FockOperator(spec, m);
  return out;
}

struct DensityDefects {
  double hermiticity = 0.0;  // max |rho - rho^+|
  double trace_error = 0.0;  // |tr rho - 1|
  double min_eigenvalue = 0.0;
};

inline DensityDefects density_matrix_defects(const DensityMatrix& rho) {
  DensityDefects d;
  const ComplexMatrix m = rho.dense();
  d.hermiticity = (m - m.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(m.trace() - Complex{1.0, 0.0});
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

inline bool is_valid_density(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) {
  const auto d = density_matrix_defects(rho);
  return d.hermiticity <= tol.density_tol && d.trace_error <= tol.density_tol &&
         d.min_eigenvalue >= -tol.density_tol;
}

/// Born's rule: tr(rho * ops[0] * ops[1] * ...).
inline Complex expectation(const DensityMatrix& rho, const std::vector<FockOperator>& ops) {
  if (ops.empty()) return rho.trace();
  SparseComplexMatrix prod = ops.back().matrix();
  for (std::size_t k = ops.size() - 1; k-- > 0;) {
    if (!(ops[k].spec() == rho.spec()))
      throw std::invalid_argument("expectation: operator dimension mismatch");
    prod = (ops[k].matrix() * prod).pruned();
  }
  if (!(ops.back().spec() == rho.spec()))
    throw std::invalid_argument("expectation: operator dimension mismatch");
  // tr(rho P) = sum_{ij} rho_ij P_ji
  Complex t{};
  const SparseComplexMatrix rp = rho.matrix() * prod;
  for (Eigen::Index k = 0; k < rp.outerSize(); ++k)
    for (SparseComplexMatrix::InnerIterator it(rp, k); it; ++it)
      if (it.row() == it.col()) t += it.value();
  return t;
}

// ---------------------------------------------------------------------------
// Coherent states

struct CoherentState {
  Complex alpha;
  int cutoff = 0;
  ComplexVector amplitudes;  // <n|alpha>, n = 0..cutoff, renormalized
  double tail_mass = 0.0;    // Poisson(|alpha|^2) mass above the cutoff
};

/// Upper tail P(N > cutoff) of a Poisson(mean) law, summed term by term.
inline double poisson_tail(double mean, int cutoff) {
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (int n = cutoff + 1;; ++n) {
    const double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean && term < 1e-18 * std::max(tail, 1e-300)) break;
    if (n > cutoff + 100000) break;
  }
  return tail;
}

/// Truncated canonical coherent state e^{-|a|^2/2} sum_n a^n / sqrt(n!) |n>.
/// Rejects a truncation tail above `max_tail`.
inline CoherentState coherent_state(Complex alpha, int cutoff,
                                    double max_tail = default_tolerances().coherent_tail_max) {
  if (cutoff < 0) throw std::invalid_argument("coherent_state: negative cutoff");
  CoherentState s;
  s.alpha = alpha;
  s.cutoff = cutoff;
  const double mean = std::norm(alpha);
  s.tail_mass = poisson_tail(mean, cutoff);
  if (s.tail_mass > max_tail) {
    std::ostringstream os;
    os << "coherent_state: truncation tail " << s.tail_mass << " exceeds " << max_tail
       << "; raise the cutoff";
    throw std::domain_error(os.str());
  }
  s.amplitudes.resize(cutoff + 1);
  const double r = std::abs(alpha);
  const double phase = std::arg(alpha);
  for (int n = 0; n <= cutoff; ++n) {
    if (r == 0.0) {
      s.amplitudes(n) = n == 0 ? Complex{1.0, 0.0} : Complex{};
      continue;
    }
    const double log_mod = -0.5 * mean + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
    s.amplitudes(n) = std::polar(std::exp(log_mod), n * phase);
  }
  s.amplitudes /= s.amplitudes.norm();
  return s;
}

/// Dense single-mode annihilation operator on levels 0..cutoff.
inline ComplexMatrix single_mode_annihilator(int cutoff) {
  ComplexMatrix a = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// D(alpha) = exp(alpha a^+ - conj(alpha) a) by scaling-and-squaring Pade.
inline ComplexMatrix displacement_operator(Complex alpha, int cutoff) {
  const ComplexMatrix a = single_mode_annihilator(cutoff);
  const ComplexMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

struct DisplacementReport {
  int low_levels = 0;             // checks restricted to occupations < low_levels (default cutoff/4)
  double conjugation = 0.0;       // max |D^-1 a D - (a + alpha)| on the low block
  double vacuum = 0.0;            // || D|0> - |alpha> ||
  double inverse = 0.0;           // max |D(alpha) D(-alpha) - I| on the low block
};

inline DisplacementReport displacement_check(Complex alpha, int cutoff, int low_levels = -1) {
  DisplacementReport rep;
  rep.low_levels = low_levels < 0 ? std::max(1, cutoff / 4) : low_levels;
  const int k = rep.low_levels;
  const ComplexMatrix d = displacement_operator(alpha, cutoff);
  const ComplexMatrix d_inv = displacement_operator(-alpha, cutoff);
  const ComplexMatrix a = single_mode_annihilator(cutoff);
  const ComplexMatrix id = ComplexMatrix::Identity(cutoff + 1, cutoff + 1);
  const ComplexMatrix shifted = d_inv * a * d - (a + alpha * id);
  rep.conjugation = shifted.topLeftCorner(k, k).cwiseAbs().maxCoeff();
  const ComplexMatrix prod = d * d_inv - id;
  rep.inverse = prod.topLeftCorner(k, k).cwiseAbs().maxCoeff();
  const CoherentState cs = coherent_state(alpha, cutoff, 1.0);
  rep.vacuum = (d.col(0) - cs.amplitudes).norm();
  return rep;
}

// ---------------------------------------------------------------------------
// Wick verification

struct LadderTerm {
  int mode = 0;
  LadderKind kind = LadderKind::annihilate;
};

/// Parses "a0+ a1+ a1 a0": `a<mode>` annihilates, a trailing `+` creates.
inline std::vector<LadderTerm> parse_ladder_sequence(const std::string& text) {
  std::istringstream is(text);
  std::vector<LadderTerm> out;
  std::string tok;
  while (is >> tok) {
    LadderTerm t;
    if (tok.size() < 2 || tok[0] != 'a')
      throw std::invalid_argument("parse_ladder_sequence: bad token '" + tok + "'");
    std::string digits = tok.substr(1);
    if (!digits.empty() && digits.back() == '+') {
      t.kind = LadderKind::create;
      digits.pop_back();
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
      throw std::invalid_argument("parse_ladder_sequence: bad token '" + tok + "'");
    t.mode = std::stoi(digits);
    out.push_back(t);
  }
  return out;
}

inline std::string format_ladder_sequence(const std::vector<LadderTerm>& seq) {
  std::string s;
  for (const auto& t : seq) {
    if (!s.empty()) s += ' ';
    s += 'a' + std::to_string(t.mode) + (t.kind == LadderKind::create ? "+" : "");
  }
  return s;
}

struct WickVerification {
  std::vector<LadderTerm> sequence;
  Complex exact;
  Complex wick;
  double deviation = 0.0;
};

/// Exact trace of the product versus Wick's expansion built from the exact
/// two-point functions of the same state.
inline WickVerification wick_verify(const DensityMatrix& rho, const std::vector<LadderTerm>& seq) {
  const ModeSpec& spec = rho.spec();
  std::vector<FockOperator> ops;
  ops.reserve(seq.size());
  for (const auto& t : seq) ops.push_back(ladder(spec, t.mode, t.kind));
  WickVerification out;
  out.sequence = seq;
  out.exact = expectation(rho, ops);
  const auto n = static_cast<Eigen::Index>(seq.size());
  ComplexMatrix table = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      table(i, j) = expectation(rho, {ops[static_cast<std::size_t>(i)], ops[static_cast<std::size_t>(j)]});
  out.wick = wick_expand(table, spec.stats);
  out.deviation = std::abs(out.exact - out.wick);
  return out;
}

inline WickVerification wick_verify(const ModeSpec& spec, const std::vector<double>& nu, double beta,
                                    double zeta, const std::vector<LadderTerm>& seq) {
  return wick_verify(gaussian_density_matrix(spec, nu, beta, zeta).rho, seq);
}

}  // namespace ppfock
