#include <catch_amalgamated.hpp>

#include <random>

#include "ppfock/fermion_builder.hpp"
#include "ppfock/fock_engine.hpp"

using namespace ppfock;

TEST_CASE("levels to spectrum") {
  GrandCanonicalSpec s{2.0, 0.5, {0.5}, Statistics::fermion};
  CHECK(levels_to_spectrum(s).lambdas[0] == 0.5);
  s.beta = 1e4;
  s.nu = {0.3};
  CHECK(1.0 - levels_to_spectrum(s).lambdas[0] < 1e-300);
  GrandCanonicalSpec b{1.0, 0.0, {std::log(2.0)}, Statistics::boson};
  CHECK(std::abs(levels_to_spectrum(b).lambdas[0] - 1.0) < 1e-15);
  b.nu = {0.0};
  CHECK_THROWS_AS(levels_to_spectrum(b), std::domain_error);
}

TEST_CASE("spectrum to levels") {
  auto f = spectrum_to_levels({{0.5}}, 3.0, 0.7, Statistics::fermion);
  CHECK(f.nu[0] == 0.7);
  auto b = spectrum_to_levels({{1.0}}, 1.0, 0.0, Statistics::boson);
  CHECK(std::abs(b.nu[0] - std::log(2.0)) < 1e-15);
  CHECK_THROWS_AS(spectrum_to_levels({{1.0}}, 1.0, 0.0, Statistics::fermion), std::domain_error);
  CHECK_THROWS_AS(spectrum_to_levels({{0.0}}, 1.0, 0.0, Statistics::fermion), std::domain_error);
  CHECK_THROWS_AS(spectrum_to_levels({{-1.0}}, 1.0, 0.0, Statistics::boson), std::domain_error);
}

TEST_CASE("round trip for both statistics") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    TargetSpectrum t;
    for (int i = 0; i < 50; ++i) t.lambdas.push_back(st == Statistics::fermion ? u(rng) : 10.0 * u(rng));
    const auto back = levels_to_spectrum(spectrum_to_levels(t, 0.8, -0.2, st));
    for (int i = 0; i < 50; ++i) CHECK(std::abs(back.lambdas[i] - t.lambdas[i]) < 1e-12);
  }
}

TEST_CASE("log partition function") {
  CHECK(std::abs(log_partition_function({1.0, 0.0, {0.0}, Statistics::fermion}) - std::log(2.0)) < 1e-15);
  CHECK(std::abs(log_partition_function({1.0, 0.0, {std::log(2.0)}, Statistics::boson}) - std::log(2.0)) < 1e-15);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lev(-3.0, 3.0);
  for (int n = 1; n <= 10; ++n) {
    GrandCanonicalSpec g{1.1, 0.3, {}, Statistics::fermion};
    for (int i = 0; i < n; ++i) g.nu.push_back(lev(rng));
    const double exact = gaussian_density_matrix(ModeSpec::fermions(n), g.nu, g.beta, g.zeta).log_z;
    CHECK(std::abs(log_partition_function(g) - exact) < 1e-10);
  }
  // bosons at cutoff 60: truncated trace misses -log(1 - e^{-61 x}) per mode
  GrandCanonicalSpec b{1.0, 0.0, {0.7}, Statistics::boson};
  const double exact = gaussian_density_matrix(ModeSpec::bosons(1, 60), b.nu, 1.0, 0.0).log_z;
  CHECK(std::abs(log_partition_function(b) - exact) <= 2.0 * std::exp(-61 * 0.7) + 1e-13);
}

TEST_CASE("zero temperature limit") {
  const auto t = zero_temperature_spectrum({-1.0, 0.0, 2.0}, 0.0);
  CHECK(t.lambdas == std::vector<double>{1.0, 0.5, 0.0});
  GrandCanonicalSpec g{1e3, 0.0, {-0.5, -0.1, 0.2, 0.9}, Statistics::fermion};
  const auto l = levels_to_spectrum(g).lambdas;
  const auto lim = zero_temperature_spectrum(g.nu, g.zeta).lambdas;
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(std::abs(l[i] - lim[i]) < 1e-10);
}

TEST_CASE("induced kernel") {
  GrandCanonicalSpec g{1e3, 0.0, {}, Statistics::fermion};
  for (int i = 0; i < 6; ++i) g.nu.push_back(i < 4 ? -0.3 + 0.05 * i : 0.4 + 0.2 * i);
  const auto k = induced_hermite_kernel(g);
  const auto p = hermite_projection_kernel(4);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; j += 7) {
      const double x = -5.0 + 10.0 * i / 49.0, y = -5.0 + 10.0 * j / 49.0;
      CHECK(std::abs(k(x, y) - p(x, y)) < 1e-8);
    }
  GrandCanonicalSpec one{2.0, 0.0, {0.3}, Statistics::fermion};
  const auto k1 = induced_hermite_kernel(one);
  const double lam = levels_to_spectrum(one).lambdas[0];
  const double x = 0.4, y = -0.7;
  CHECK(std::abs(k1(x, y) - lam * k1.phi(0, x) * std::conj(k1.phi(0, y))) < 1e-15);
  CHECK_THROWS_AS(induced_kernel(g, hermite_projection_kernel(3)), std::invalid_argument);
}

TEST_CASE("measurement basis rotation") {
  const std::vector<double> lam{0.1, 0.4, 0.7, 0.9};
  const auto k = discrete_diagonal_kernel(lam, Statistics::fermion);
  const ComplexMatrix id = rotate_measurement_basis(k, ComplexMatrix::Identity(4, 4));
  CHECK((id - RealVector::Map(lam.data(), 4).cast<Complex>().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() == 0.0);

  for (double th = 0.0; th < 3.0; th += 0.5) {
    const Complex a = std::polar(std::cos(th), 0.3 * th), b = std::polar(std::sin(th), -th);
    const ComplexMatrix kr = rotate_measurement_basis(k, two_mode_rotation(4, a, b));
    const ComplexMatrix block = kr.bottomRightCorner(2, 2);
    CHECK(std::abs(block.determinant() - lam[2] * lam[3]) < 1e-12);
    CHECK(std::abs(kr.trace().real() - 2.1) < 1e-12);
    CHECK(std::abs(kr(2, 2) - (lam[2] * std::norm(a) + lam[3] * std::norm(b))) < 1e-12);
    CHECK(std::abs(kr(2, 3) - (lam[2] - lam[3]) * std::conj(a) * b) < 1e-12);
  }
  ComplexMatrix bad = ComplexMatrix::Identity(4, 4);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(rotate_measurement_basis(k, bad), std::domain_error);
  CHECK_THROWS_AS(rotate_measurement_basis(hermite_projection_kernel(2), ComplexMatrix::Identity(2, 2)),
                  std::invalid_argument);
}
