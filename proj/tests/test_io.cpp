#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppfock/io.hpp"

using namespace ppfock;

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 100.0, 0.0, 1e-7})
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(100.0) == "100");
}

TEST_CASE("kernel spec text form") {
  const auto k = parse_kernel_spec("lorentz:sigma=0.1,omega=100");
  CHECK(k.name == "lorentz");
  CHECK(k.get("sigma") == 0.1);
  CHECK(k.get("omega") == 100.0);
  CHECK(k.get("eta", 1.0) == 1.0);
  CHECK_THROWS_AS(k.get("eta"), SpecError);

  const auto h = parse_kernel_spec("hermite:lambdas=0.2;0.9;0.5,eta=-1");
  CHECK(h.values == std::vector<double>{0.2, 0.9, 0.5});
  CHECK(parse_kernel_spec(h.to_string()).values == h.values);
  CHECK(parse_kernel_spec(h.to_string()).params == h.params);

  CHECK(parse_kernel_spec("poisson").params.empty());
  CHECK_THROWS_AS(parse_kernel_spec(":x=1"), SpecError);
  CHECK_THROWS_AS(parse_kernel_spec("lorentz:sigma"), SpecError);
  CHECK_THROWS_AS(parse_kernel_spec("lorentz:sigma=abc"), SpecError);
  CHECK_THROWS_AS(parse_kernel_spec("lorentz:sigma=1x"), SpecError);
}

TEST_CASE("kernel spec JSON form") {
  const auto k = parse_kernel_spec(R"({"name":"hermite","params":{"N":4}})");
  CHECK(k.get("N") == 4.0);
  const auto back = kernel_spec_from_json(to_json(k));
  CHECK(back.name == "hermite");
  CHECK(back.params == k.params);
  CHECK_THROWS_AS(parse_kernel_spec("{bad json"), SpecError);
  CHECK_THROWS_AS(parse_kernel_spec(R"({"params":{}})"), SpecError);
  CHECK_THROWS_AS(parse_kernel_spec(R"({"name":"x","params":{"a":"b"}})"), SpecError);
}

TEST_CASE("kernel families resolve") {
  CHECK(resolve_kernel(parse_kernel_spec("poisson")).is_poisson());
  const auto l = resolve_kernel(parse_kernel_spec("lorentz:sigma=0.1,omega=100"));
  REQUIRE(l.is_stationary());
  CHECK(l.stationary().real_valued);
  const auto a = resolve_kernel(parse_kernel_spec("analytic-lorentz:sigma=0.1,omega=100"));
  CHECK(std::abs(a.stationary()(0.0) - Complex(2.0, 0.0)) < 1e-15);
  const auto h = resolve_kernel(parse_kernel_spec("hermite:N=10"));
  REQUIRE(h.is_spectral());
  CHECK(h.spectral().rank() == 10);
  CHECK_THROWS_AS(resolve_kernel(parse_kernel_spec("hermite:N=2.5")), SpecError);
  const auto b = resolve_kernel(parse_kernel_spec("hermite:values=0.5;0.2,eta=1"));
  CHECK(b.spectral().stats == Statistics::boson);
  const auto g = resolve_kernel(parse_kernel_spec("grand-canonical-hermite:beta=2,zeta=0.5,levels=0;1;2"));
  CHECK(g.spectral().rank() == 3);
  CHECK(std::abs(g.spectral().eigenvalues[0] - 1.0 / (1.0 + std::exp(-1.0))) < 1e-14);
  CHECK_THROWS_AS(resolve_kernel(parse_kernel_spec("grand-canonical-hermite:beta=2")), SpecError);
  CHECK(resolve_kernel(parse_kernel_spec("discrete:values=0.1;0.4")).spectral().rank() == 2);
  const auto w = resolve_kernel(parse_kernel_spec("wavepacket:center=0.5,width=0.1,omega=30"));
  REQUIRE(w.is_wavepacket());
  CHECK(std::abs(w.wavepacket()(0.5)) == 1.0);
  CHECK_THROWS_AS(resolve_kernel(parse_kernel_spec("wavepacket:center=0,width=0")), SpecError);
  CHECK_THROWS_AS(resolve_kernel(parse_kernel_spec("bessel:x=1")), SpecError);
}

TEST_CASE("batch CSV round trip keeps empty replicates") {
  const Window w(-1.0, 2.0);
  const Batch b{PointConfiguration(w, {0.1, 1.0 / 3.0}), PointConfiguration(w, {}),
                PointConfiguration(w, {-0.999, 1.999999999})};
  std::stringstream s;
  write_batch_csv(s, b, {{"family", "test"}, {"config", R"({"a": 1})"}});
  const auto back = read_batch_csv(s);
  REQUIRE(back.batch.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.batch[i].points() == b[i].points());
  CHECK(back.batch[1].window() == w);
  CHECK(back.get("family") == "test");
  CHECK(back.get("config") == R"({"a": 1})");
  CHECK(back.get("missing").empty());

  std::stringstream bad("# window: 0 1\n# n_replicates: 1\nreplicate_id,t\n3,0.5\n");
  CHECK_THROWS(read_batch_csv(bad));
  std::stringstream nowin("replicate_id,t\n");
  CHECK_THROWS(read_batch_csv(nowin));
  CHECK_THROWS(write_batch_csv(s, Batch{}));
}

TEST_CASE("batch JSON round trip and file sniffing") {
  const Window w(0.0, 1.0);
  const Batch b{PointConfiguration(w, {0.25, 0.75}), PointConfiguration(w, {})};
  const auto j = batch_to_json(b, {{"family", "poisson"}});
  CHECK(j.at("schema_version") == kSchemaVersion);
  const auto back = batch_from_json(Json::parse(j.dump()));
  CHECK(back.batch[0].points() == b[0].points());
  CHECK(back.batch[1].empty());

  const auto dir = std::filesystem::temp_directory_path() / "ppfock_test_io";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "b.json") << j.dump();
    std::ofstream f(dir / "b.csv");
    write_batch_csv(f, b, {{"family", "poisson"}});
  }
  CHECK(read_batch_file((dir / "b.json").string()).get("family") == "poisson");
  CHECK(read_batch_file((dir / "b.csv").string()).batch[0].points() == b[0].points());
  CHECK_THROWS(read_batch_file((dir / "none.csv").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("pcf CSV layout") {
  PcfEstimate e;
  e.bin_edges = {0.0, 0.5, 1.0};
  e.g_hat = {0.5, 1.0};
  e.std_error = {0.1, 0.2};
  std::stringstream s;
  write_pcf_csv(s, e, {0.4, 1.0});
  CHECK(s.str() == "# schema_version: 1\nr_mid,g_hat,stderr,g_theory\n0.25,0.5,0.1,0.4\n0.75,1,0.2,1\n");
  std::stringstream t;
  write_pcf_csv(t, e, {});
  CHECK(t.str().find("g_theory") == std::string::npos);
}

TEST_CASE("trajectory CSV") {
  ComplexTrajectory x{TrajectoryGrid(0.0, 0.5, 2), {Complex(1.0, -1.0), Complex(0.0, 2.0)}};
  std::stringstream s;
  write_trajectory_csv(s, x);
  CHECK(s.str() == "t,re,im\n0,1,-1\n0.5,0,2\n");
}

TEST_CASE("grand-canonical JSON") {
  GrandCanonicalSpec g{2.0, 0.5, {0.0, 1.0}, Statistics::boson};
  g.nu = {1.0, 2.0};
  const auto back = grand_canonical_from_json(to_json(g));
  CHECK(back.beta == 2.0);
  CHECK(back.zeta == 0.5);
  CHECK(back.nu == g.nu);
  CHECK(back.stats == Statistics::boson);
  const TargetSpectrum t{{0.1, 0.9}};
  CHECK(target_spectrum_from_json(to_json(t)).lambdas == t.lambdas);
}
