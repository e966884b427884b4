#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "ppfock/gaussian_field.hpp"

using namespace ppfock;

TEST_CASE("trajectory grids") {
  CHECK_THROWS(TrajectoryGrid(0.0, 0.1, 100));
  CHECK_THROWS(TrajectoryGrid(0.0, 0.0, 128));
  const auto g = TrajectoryGrid::covering(0.0, 1.0, 1.0 / 1000);
  CHECK(g.n == 1024);
  CHECK(std::abs(g.t_end() - 1.0) < 1e-12);
  CHECK(g.dt <= 1.0 / 1000);
  CHECK(TrajectoryGrid(0.0, 0.007, 8).resolves_carrier(100.0));
  CHECK_FALSE(TrajectoryGrid(0.0, 0.01, 8).resolves_carrier(100.0));
}

TEST_CASE("complex circular draws have the target covariance") {
  const auto cov = analytic_lorentz_kernel(0.1, 100.0);
  const TrajectoryGrid grid(0.0, 1.0 / 512, 256);
  const CirculantSampler s(cov, grid);
  CHECK(s.report().min_eigenvalue >= -1e-8 * s.report().max_eigenvalue);
  std::mt19937_64 rng(11);
  const int reps = 4000;
  const std::vector<std::size_t> lags{0, 3, 20, 60};
  std::vector<Complex> acc(lags.size()), pseudo(lags.size());
  for (int r = 0; r < reps; ++r) {
    const auto z = s.sample_complex(rng);
    for (std::size_t l = 0; l < lags.size(); ++l) {
      acc[l] += z.values[100 + lags[l]] * std::conj(z.values[100]);
      pseudo[l] += z.values[100 + lags[l]] * z.values[100];
    }
  }
  // |Z|^2 products have sd about c0(0) = 2 per draw
  const double tol = 5.0 * 2.0 / std::sqrt(double(reps));
  for (std::size_t l = 0; l < lags.size(); ++l) {
    CHECK(std::abs(acc[l] / double(reps) - cov(grid.dt * lags[l])) < tol);
    CHECK(std::abs(pseudo[l] / double(reps)) < tol);
  }
}

TEST_CASE("real draws have the target covariance") {
  const auto cov = lorentz_kernel(0.05, 0.0);
  const TrajectoryGrid grid(0.0, 0.01, 128);
  std::mt19937_64 rng(5);
  CirculantSampler s(cov, grid);
  const int reps = 5000;
  double v0 = 0.0, v5 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto x = s.sample_real(rng);
    v0 += x.values[40] * x.values[40];
    v5 += x.values[45] * x.values[40];
  }
  const double tol = 5.0 * std::sqrt(2.0 / reps);
  CHECK(std::abs(v0 / reps - 1.0) < tol);
  CHECK(std::abs(v5 / reps - std::exp(-1.0)) < tol);
  CHECK_THROWS_AS(CirculantSampler(analytic_lorentz_kernel(0.1, 10.0), grid).sample_real(rng),
                  std::invalid_argument);
}

TEST_CASE("seeded draws are reproducible") {
  const auto cov = lorentz_kernel(0.1, 0.0);
  const TrajectoryGrid grid(0.0, 0.01, 64);
  const auto a = sample_stationary_gp(cov, grid, 42);
  const auto b = sample_stationary_gp(cov, grid, 42);
  const auto c = sample_stationary_gp(cov, grid, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("embedding report") {
  const auto cov = analytic_lorentz_kernel(0.1, 100.0);
  const CirculantSampler s(cov, TrajectoryGrid(0.0, 1.0 / 4096, 4096));
  const auto& r = s.report();
  CHECK(r.embedding_size >= 2 * 4096);
  CHECK(r.clipped_power_fraction < 1e-6);
  CHECK_FALSE(r.summary().empty());
  Tolerances tiny;
  tiny.embedding_max_size = 64;
  tiny.embedding_negative_error = 0.0;
  // a covariance that is not positive definite cannot be embedded
  StationaryCovariance bad;
  bad.c0 = [](double t) { return Complex{std::abs(t) < 0.05 ? 1.0 : -1.0, 0.0}; };
  CHECK_THROWS_AS(CirculantSampler(bad, TrajectoryGrid(0.0, 0.01, 32), tiny), EmbeddingError);
}

TEST_CASE("analytic signal") {
  const std::size_t n = 256;
  RealTrajectory x{TrajectoryGrid(0.0, 1.0 / n, n), std::vector<double>(n)};
  const double w = 2.0 * std::numbers::pi * 10.0;
  for (std::size_t i = 0; i < n; ++i) x.values[i] = std::cos(w * x.grid.time(i));
  const auto z = analytic_signal(x);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(z.values[i] - std::polar(1.0, w * x.grid.time(i))) < 1e-12);
  }
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (auto& v : x.values) v = g(rng);
  const auto z2 = analytic_signal(x);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z2.values[i].real() - x.values[i]) < 1e-12);
  RealTrajectory odd{TrajectoryGrid(0.0, 1.0, 4), std::vector<double>(3)};
  CHECK_THROWS(analytic_signal(odd));
}

TEST_CASE("analytic signal of a real Lorentz field") {
  // quasi-monochromatic: the analytic signal has covariance close to 2 e^{-|t|/s} e^{i w t}
  const double sigma = 0.1, omega = 100.0, dt = 1.0 / 2048;
  const AnalyticViaRealSampler s(lorentz_kernel(sigma, omega), sigma, 0.0, 1.0, dt);
  std::mt19937_64 rng(8);
  const int reps = 1500;
  Complex c0{}, c1{};
  const std::size_t lag = 41;
  for (int r = 0; r < reps; ++r) {
    const auto z = s(rng);
    CHECK(z.grid.t0 == 0.0);
    CHECK(z.grid.t_end() >= 1.0);
    c0 += std::norm(z.values[500]);
    c1 += z.values[500 + lag] * std::conj(z.values[500]);
  }
  const auto target = analytic_lorentz_kernel(sigma, omega);
  CHECK(std::abs(c0 / double(reps) - 2.0) < 0.25);
  CHECK(std::abs(c1 / double(reps) - target(lag * dt)) < 0.25);
  const auto one = sample_analytic_via_real(lorentz_kernel(sigma, omega), sigma, 0.0, 1.0, dt, 1);
  CHECK(one.values.size() == 4096);
}

TEST_CASE("piecewise constant lookup and slicing") {
  ComplexTrajectory z{TrajectoryGrid(1.0, 0.5, 4), {1.0, 2.0, 3.0, 4.0}};
  CHECK(z.at(1.2) == Complex(1.0));
  CHECK(z.at(2.6) == Complex(4.0));
  CHECK(z.at(0.0) == Complex(1.0));
  const auto s = slice(z, 2, 2);
  CHECK(s.grid.t0 == 2.0);
  CHECK(s.values[0] == Complex(3.0));
  CHECK_THROWS(slice(z, 3, 2));
}
