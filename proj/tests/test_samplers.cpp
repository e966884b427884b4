#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "ppfock/estimators.hpp"
#include "ppfock/samplers.hpp"

using namespace ppfock;

namespace {

std::vector<double> counts_of(const Batch& b) {
  std::vector<double> c;
  for (const auto& x : b) c.push_back(static_cast<double>(x.size()));
  return c;
}

void check_simple(const PointConfiguration& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    REQUIRE(c.window().contains(c.points()[i]));
    if (i) REQUIRE(c.points()[i - 1] < c.points()[i]);
  }
}

}  // namespace

TEST_CASE("point configurations") {
  const Window w(0.0, 2.0);
  CHECK_THROWS(Window(1.0, 1.0));
  CHECK_THROWS(Window(0.0, INFINITY));
  const PointConfiguration c(w, {1.5, 0.2, 0.7});
  CHECK(c.points() == std::vector<double>{0.2, 0.7, 1.5});
  CHECK(c.count_in(0.0, 1.0) == 2);
  CHECK_THROWS(PointConfiguration(w, {0.1, 0.1}));
  CHECK_THROWS(PointConfiguration(w, {2.5}));
  const auto m = c.mapped_to(Window(0.0, 1.0));
  CHECK(m.points()[2] == 0.75);
  CHECK(c.shifted(1.0).window().a == 1.0);
}

TEST_CASE("replicate seeds are distinct") {
  CHECK(replicate_seed(1, 0) != replicate_seed(1, 1));
  CHECK(replicate_seed(1, 0) != replicate_seed(2, 0));
  CHECK(replicate_seed(7, 3) == replicate_seed(7, 3));
}

TEST_CASE("poisson sampler") {
  const Window w(0.0, 1.0);
  std::mt19937_64 rng(1);
  CHECK(sample_poisson([](double) { return 0.0; }, 1.0, w, rng).empty());
  const double lam = 20.0;
  Batch b;
  for (int r = 0; r < 10000; ++r) b.push_back(sample_poisson([&](double) { return lam; }, lam, w, rng));
  const auto st = count_statistics(b);
  CHECK(std::abs(st.mean - lam) < 3.0 * std::sqrt(lam / 1e4));
  CHECK(st.fano > 0.95);
  CHECK(st.fano < 1.05);
  for (const auto& c : b) check_simple(c);
  Batch ramp;
  for (int r = 0; r < 10000; ++r) ramp.push_back(sample_poisson([](double t) { return 2.0 * t; }, 2.0, w, rng));
  CHECK(std::abs(count_statistics(ramp).mean - 1.0) < 3.0 * std::sqrt(1.0 / 1e4));
  CHECK_THROWS_AS(sample_poisson([](double t) { return 5.0 * t; }, 1.0, w, std::uint64_t{3}), SamplingError);
}

TEST_CASE("cox sampler") {
  const Window w(0.0, 1.0);
  ComplexTrajectory flat{TrajectoryGrid(0.0, 1.0 / 64, 64), std::vector<Complex>(64, Complex(0.0, 2.0))};
  CHECK_THROWS(sample_cox(flat, 1.0, Window(0.0, 2.0), std::uint64_t{1}));
  std::mt19937_64 rng(4);
  Batch b;
  for (int r = 0; r < 5000; ++r) b.push_back(sample_cox(flat, 3.0, w, rng));
  const auto st = count_statistics(b);
  CHECK(std::abs(st.mean - 12.0) < 3.0 * std::sqrt(12.0 / 5000));
  CHECK(std::abs(st.fano - 1.0) < 0.06);
  for (int r = 0; r < 20; ++r) CHECK(sample_cox(flat, 0.0, w, rng).empty());
  CHECK_THROWS(sample_cox(flat, -1.0, w, rng));
}

TEST_CASE("permanental sampler is over-dispersed with the right intensity") {
  const Window w(0.0, 1.0);
  const auto cov = analytic_lorentz_kernel(0.1, 100.0);
  const PermanentalSampler s(cov, 5.0, w);
  CHECK(s.grid().resolves_carrier(100.0));
  std::mt19937_64 rng(9);
  Batch b;
  for (int r = 0; r < 10000; ++r) b.push_back(s(rng));
  const auto st = count_statistics(b);
  // intensity scale * c0(0) = 10 on a unit window
  CHECK(std::abs(st.mean - 10.0) < 3.0 * st.mean_stderr);
  CHECK(st.fano - 1.0 > 3.0 * st.fano_stderr);
  for (const auto& c : b) check_simple(c);
}

TEST_CASE("projection DPP has exactly N points") {
  const auto k = hermite_projection_kernel(10);
  const Window w(-9.0, 9.0);
  const DppSampler s(k, w);
  CHECK(std::abs(s.captured_mass() - 10.0) < 1e-6);
  std::mt19937_64 rng(2);
  for (int r = 0; r < 300; ++r) {
    const auto c = s.sample_projection(rng);
    REQUIRE(c.size() == 10);
    check_simple(c);
  }
  CHECK_THROWS(DppSampler(hermite_spectral_kernel({1.2}, Statistics::fermion), w));
  CHECK_THROWS(DppSampler(hermite_spectral_kernel({0.5}, Statistics::boson), w));
  CHECK_THROWS(DppSampler(hermite_spectral_kernel({0.5, 1.0}, Statistics::fermion), w).sample_projection(rng));
}

TEST_CASE("rank one projection DPP follows |phi_0|^2") {
  const auto k = hermite_projection_kernel(1);
  const Window w(-6.0, 6.0);
  std::mt19937_64 rng(3);
  const DppSampler s(k, w);
  const int reps = 20000;
  // chi-square over 12 equiprobable-ish bins on [-3, 3] plus two tails
  std::vector<double> edges{-6.0};
  for (int i = 0; i <= 12; ++i) edges.push_back(-3.0 + 0.5 * i);
  edges.push_back(6.0);
  std::vector<double> obs(edges.size() - 1, 0.0);
  for (int r = 0; r < reps; ++r) {
    const double x = s.sample_projection(rng).points()[0];
    for (std::size_t b = 0; b + 1 < edges.size(); ++b)
      if (x >= edges[b] && x < edges[b + 1]) obs[b] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double p = 0.5 * (std::erf(edges[b + 1]) - std::erf(edges[b]));
    const double e = p * reps;
    chi2 += (obs[b] - e) * (obs[b] - e) / e;
  }
  CHECK(chi2 < 29.14);  // 1% critical value, 14 dof
}

TEST_CASE("DPP mixtures") {
  const Window w(-8.0, 8.0);
  std::mt19937_64 rng(6);
  const DppSampler zero(hermite_spectral_kernel({0.0, 0.0, 0.0}, Statistics::fermion), w);
  for (int r = 0; r < 10; ++r) CHECK(zero.sample_mixture(rng).empty());
  const DppSampler full(hermite_projection_kernel(4), w);
  for (int r = 0; r < 10; ++r) CHECK(full.sample_mixture(rng).size() == 4);
  const std::vector<double> lam{0.9, 0.5, 0.2, 0.7, 0.1};
  const DppSampler mix(hermite_spectral_kernel(lam, Statistics::fermion), w);
  Batch b;
  for (int r = 0; r < 10000; ++r) b.push_back(mix.sample_mixture(rng));
  const auto st = count_statistics(b);
  CHECK(std::abs(st.mean - 2.4) < 3.0 * st.mean_stderr);
  CHECK(st.fano < 1.0);
}

TEST_CASE("fock state process") {
  const Window w(0.0, 1.0);
  const auto phi = [](double t) { return std::polar(std::exp(-std::pow((t - 0.5) / 0.1, 2) / 4.0), -30.0 * t); };
  std::mt19937_64 rng(7);
  const FockStateSampler s(phi, 5, w);
  for (int r = 0; r < 500; ++r) {
    const auto c = s(rng);
    REQUIRE(c.size() == 5);
    check_simple(c);
  }
  CHECK_THROWS(FockStateSampler(phi, 0, w));
  CHECK_THROWS(FockStateSampler([](double) { return Complex{}; }, 1, w));
  // k = 1: the time is Gaussian with sd 0.1 / sqrt(2) * sqrt(2) = 0.1
  const FockStateSampler one(phi, 1, w);
  double m = 0.0, m2 = 0.0;
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    const double t = one(rng).points()[0];
    m += t;
    m2 += t * t;
  }
  m /= reps;
  const double sd = std::sqrt(m2 / reps - m * m);
  CHECK(std::abs(m - 0.5) < 4.0 * 0.1 / std::sqrt(double(reps)));
  CHECK(std::abs(sd - 0.1) < 0.003);
}

TEST_CASE("seeded samplers are deterministic") {
  const Window w(0.0, 1.0);
  const auto cov = analytic_lorentz_kernel(0.1, 100.0);
  CHECK(sample_permanental(cov, 5.0, w, 12).points() == sample_permanental(cov, 5.0, w, 12).points());
  const auto k = hermite_projection_kernel(3);
  CHECK(sample_projection_dpp(k, Window(-7, 7), 4).points() == sample_projection_dpp(k, Window(-7, 7), 4).points());
  CHECK(sample_dpp_mixture(k, Window(-7, 7), 4).size() == 3);
}
