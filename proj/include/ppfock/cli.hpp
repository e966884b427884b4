#pragma once

// Command implementations behind tools/ppfock. Kept in a header so tests can
// drive them in-process. Needs vendor/CLI11.hpp and vendor/json.hpp.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppfock/ppfock.hpp"
#include "ppfock/gue.hpp"
#include "ppfock/io.hpp"

namespace ppfock::cli {

enum ExitCode : int { ok = 0, check_failed = 1, bad_input = 2 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::filesystem::path output_dir() {
  const char* env = std::getenv("PPFOCK_OUTPUT_DIR");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

/// JSON file, or a previous output file whose "# config: {...}" line is used.
inline Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  if (in.peek() == '{') {
    try {
      return Json::parse(in);
    } catch (const Json::exception& e) {
      throw ConfigError("config file '" + path + "': " + e.what());
    }
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# config: ", 0) == 0) return Json::parse(line.substr(10));
    if (!line.empty() && line[0] != '#') break;
  }
  throw ConfigError("config file '" + path + "' holds neither JSON nor an embedded config line");
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
}

/// Window holding essentially all of a spectral kernel's mass.
inline Window default_window(const SpectralKernel& k) {
  switch (k.domain.kind) {
    case Domain::Kind::interval:
      return {k.domain.a, k.domain.b};
    case Domain::Kind::real_line: {
      const double l = std::ceil(std::sqrt(2.0 * static_cast<double>(k.rank()) + 1.0) + 4.0);
      return {-l, l};
    }
    case Domain::Kind::discrete:
      break;
  }
  throw ConfigError("continuous sampling needs a kernel on the real line or an interval");
}

// ---------------------------------------------------------------------------
// sample

inline Json sample_defaults() {
  return Json{{"command", "sample"},
              {"family", "poisson"},
              {"kernel", ""},
              {"rate", 1.0},
              {"scale", 1.0},
              {"window", Json::array()},
              {"reps", 100},
              {"seed", 0},
              {"k", 1},
              {"nodes_per_unit", default_tolerances().grid_nodes_per_unit},
              {"format", "csv"}};
}

struct SampleRun {
  Json config;  // fully resolved
  Batch batch;
  std::vector<std::string> notes;
};

/// Resolves defaults (window, kernel) and draws the batch. Replicate r uses
/// the stream seeded by replicate_seed(seed, r).
inline SampleRun run_sample(Json cfg) {
  SampleRun run;
  const std::string family = cfg.at("family").get<std::string>();
  const auto reps = cfg.at("reps").get<long long>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  if (reps < 1) throw ConfigError("reps must be positive");
  Tolerances tol = default_tolerances();
  tol.grid_nodes_per_unit = cfg.at("nodes_per_unit").get<int>();
  if (tol.grid_nodes_per_unit < 1) throw ConfigError("nodes_per_unit must be positive");

  const std::string kernel_text = cfg.at("kernel").get<std::string>();
  ResolvedKernel kernel;
  if (!kernel_text.empty()) kernel = resolve_kernel(parse_kernel_spec(kernel_text));

  auto window_or = [&](std::optional<Window> fallback) -> Window {
    const auto& w = cfg.at("window");
    if (w.size() == 2) return {w.at(0).get<double>(), w.at(1).get<double>()};
    if (!w.empty()) throw ConfigError("window needs exactly two numbers");
    if (!fallback) throw ConfigError("window required");
    return *fallback;
  };
  const auto stream = [&](long long r) {
    return std::mt19937_64(replicate_seed(seed, static_cast<std::uint64_t>(r)));
  };

  Window w(0.0, 1.0);
  if (family == "poisson") {
    if (!kernel.is_poisson()) throw ConfigError("poisson family takes no kernel");
    w = window_or(Window(0.0, 1.0));
    const double rate = cfg.at("rate").get<double>();
    if (!(rate >= 0.0)) throw ConfigError("rate must be non-negative");
    for (long long r = 0; r < reps; ++r) {
      auto rng = stream(r);
      run.batch.push_back(rate == 0.0 ? PointConfiguration(w)
                                      : sample_poisson([rate](double) { return rate; }, rate, w, rng));
    }
  } else if (family == "permanental" || family == "cox") {
    if (!kernel.is_stationary()) throw ConfigError(family + " family needs a stationary kernel (lorentz, analytic-lorentz)");
    w = window_or(Window(0.0, 1.0));
    const double scale = cfg.at("scale").get<double>();
    const auto& cov = kernel.stationary();
    if (family == "permanental") {
      PermanentalSampler sampler(cov, scale, w, tol);
      run.notes.push_back(sampler.embedding().summary());
      for (long long r = 0; r < reps; ++r) {
        auto rng = stream(r);
        run.batch.push_back(sampler(rng));
      }
    } else {
      if (!cov.real_valued) throw ConfigError("cox family draws a real field; use the lorentz kernel");
      double dt = 1.0 / tol.grid_nodes_per_unit;
      const double omega = cov.params.count("omega") ? cov.params.at("omega") : 0.0;
      if (omega > 0.0) dt = std::min(dt, std::numbers::pi / (4.0 * omega));
      AnalyticViaRealSampler field(cov, cov.params.at("sigma"), w.a, w.b, dt, tol);
      run.notes.push_back(field.report().summary());
      for (long long r = 0; r < reps; ++r) {
        auto rng = stream(r);
        run.batch.push_back(sample_cox(field(rng), scale, w, rng));
      }
    }
  } else if (family == "projection-dpp" || family == "dpp") {
    if (!kernel.is_spectral()) throw ConfigError(family + " family needs a spectral kernel (hermite, grand-canonical-hermite)");
    const auto& k = kernel.spectral();
    w = window_or(default_window(k));
    DppSampler sampler(k, w, tol);
    std::ostringstream note;
    note << "captured kernel mass " << format_double(sampler.captured_mass()) << " of rank " << k.rank();
    run.notes.push_back(note.str());
    for (long long r = 0; r < reps; ++r) {
      auto rng = stream(r);
      run.batch.push_back(family == "dpp" ? sampler.sample_mixture(rng) : sampler.sample_projection(rng));
    }
  } else if (family == "fock") {
    if (!kernel.is_wavepacket()) throw ConfigError("fock family needs a wavepacket kernel");
    w = window_or(Window(0.0, 1.0));
    FockStateSampler sampler(kernel.wavepacket(), cfg.at("k").get<int>(), w, tol);
    for (long long r = 0; r < reps; ++r) {
      auto rng = stream(r);
      run.batch.push_back(sampler(rng));
    }
  } else {
    throw ConfigError("unknown family '" + family + "'");
  }
  cfg["window"] = {w.a, w.b};
  run.config = std::move(cfg);
  return run;
}

inline std::string render_sample(const SampleRun& run) {
  const Json& c = run.config;
  Metadata meta{{"family", c.at("family").get<std::string>()},
                {"kernel", c.at("kernel").get<std::string>()},
                {"seed", std::to_string(c.at("seed").get<std::uint64_t>())},
                {"scale", format_double(c.at("scale").get<double>())},
                {"config", c.dump()}};
  for (const auto& n : run.notes) meta.emplace_back("note", n);
  std::ostringstream os;
  if (c.at("format") == "json") {
    Json j = batch_to_json(run.batch, meta);
    j["config"] = c;
    os << j.dump(1) << '\n';
  } else {
    write_batch_csv(os, run.batch, meta);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// pcf

inline Json pcf_defaults() {
  return Json{{"command", "pcf"},
              {"batch", ""},
              {"kernel", "auto"},
              {"bins", 50},
              {"rmax", 0.0},
              {"normalization", "auto"}};
}

struct PcfRun {
  Json config;
  PcfEstimate estimate;
  std::vector<double> theory;
  Json report;
};

inline PcfRun run_pcf(Json cfg) {
  PcfRun run;
  const std::string path = cfg.at("batch").get<std::string>();
  if (path.empty()) throw ConfigError("pcf needs --batch");
  if (!std::filesystem::exists(path)) throw ConfigError("batch file '" + path + "' does not exist");
  const BatchFile file = read_batch_file(path);
  if (file.batch.empty()) throw ConfigError("batch file holds no replicates");
  const Window w = file.batch.front().window();
  const std::string family = file.get("family");

  std::string kernel_text = cfg.at("kernel").get<std::string>();
  if (kernel_text == "auto") kernel_text = family == "poisson" ? "poisson" : file.get("kernel");
  if (kernel_text == "none") kernel_text.clear();
  cfg["kernel"] = kernel_text;

  std::string norm = cfg.at("normalization").get<std::string>();
  if (norm == "auto") norm = (family == "projection-dpp" || family == "dpp") ? "inhomogeneous" : "homogeneous";
  if (norm != "homogeneous" && norm != "inhomogeneous")
    throw ConfigError("normalization must be homogeneous, inhomogeneous or auto");
  cfg["normalization"] = norm;

  const auto bins = cfg.at("bins").get<long long>();
  if (bins < 1) throw ConfigError("bins must be positive");
  double rmax = cfg.at("rmax").get<double>();
  if (rmax <= 0.0) rmax = w.length() / 4.0;
  cfg["rmax"] = rmax;
  const auto edges = uniform_edges(0.0, rmax, static_cast<std::size_t>(bins));

  PcfNormalization pn;
  pn.kind = norm == "homogeneous" ? PcfNormalization::Kind::homogeneous
                                  : PcfNormalization::Kind::inhomogeneous;
  run.estimate = estimate_pcf(file.batch, edges, pn);

  if (!kernel_text.empty()) {
    KernelSpec spec = parse_kernel_spec(kernel_text);
    // the Bedrosian route turns the real kernel into its analytic counterpart
    if (family == "cox" && spec.name == "lorentz") spec.name = "analytic-lorentz";
    const ResolvedKernel k = resolve_kernel(spec);
    if (k.is_poisson()) {
      run.theory.assign(static_cast<std::size_t>(bins), 1.0);
    } else if (k.is_stationary()) {
      run.theory = binned_theoretical_pcf(k.stationary(), Statistics::boson, w.length(), edges);
    } else if (k.is_spectral()) {
      run.theory = binned_theoretical_pcf(k.spectral(), w, edges);
    } else {
      throw ConfigError("no pair-correlation theory for kernel '" + kernel_text + "'");
    }
  }

  Json rep{{"command", "pcf"}, {"schema_version", kSchemaVersion},
           {"n_replicates", run.estimate.n_replicates}, {"bins", bins}};
  if (!run.theory.empty()) {
    double max_dev = 0.0, max_z = 0.0;
    bool pass = true;
    for (std::size_t b = 0; b < run.theory.size(); ++b) {
      const double dev = std::abs(run.estimate.g_hat[b] - run.theory[b]);
      const double se = run.estimate.std_error[b];
      max_dev = std::max(max_dev, dev);
      if (se > 0.0) max_z = std::max(max_z, dev / se);
      if (dev > 4.0 * se + 1e-12) pass = false;
    }
    rep["max_abs_deviation"] = max_dev;
    rep["max_z"] = max_z;
    rep["pass"] = pass;
  }
  run.report = rep;
  run.config = std::move(cfg);
  return run;
}

inline std::string render_pcf(const PcfRun& run) {
  std::ostringstream os;
  write_pcf_csv(os, run.estimate, run.theory,
                {{"kernel", run.config.at("kernel").get<std::string>()},
                 {"normalization", run.config.at("normalization").get<std::string>()},
                 {"config", run.config.dump()}});
  return os.str();
}

// ---------------------------------------------------------------------------
// verify

struct CheckList {
  Json checks = Json::array();
  bool pass = true;

  void add(const std::string& name, double value, double tolerance, Json detail = Json::object()) {
    const bool ok = std::isfinite(value) && value <= tolerance;
    Json c{{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", ok}};
    if (!detail.empty()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
    pass = pass && ok;
  }
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int reps = 0;   // suite-specific default when 0
  int n = 0;      // suite-specific default when 0
};

/// Random Gaussian states and random ladder products; exact trace vs Wick.
inline CheckList verify_wick(const VerifyOptions& opt) {
  CheckList out;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int trials = opt.reps > 0 ? opt.reps : 60;
  double worst = 0.0;
  Json worst_detail;
  for (int t = 0; t < trials; ++t) {
    const bool boson = t % 3 == 2;
    const int modes = boson ? 1 + static_cast<int>(unif(rng) * 2) : 1 + static_cast<int>(unif(rng) * 4);
    const ModeSpec spec = boson ? ModeSpec::bosons(modes, 8) : ModeSpec::fermions(modes);
    const double beta = 0.5 + 2.0 * unif(rng);
    const double zeta = unif(rng) - 0.5;
    std::vector<double> nu(static_cast<std::size_t>(modes));
    // bosons: beta (nu - zeta) in [5, 7] keeps the cutoff-8 truncation below 1e-15
    for (auto& v : nu) v = boson ? zeta + (5.0 + 2.0 * unif(rng)) / beta : zeta + 4.0 * unif(rng) - 2.0;
    const DensityMatrix rho = gaussian_density_matrix(spec, nu, beta, zeta).rho;
    for (int s = 0; s < 4; ++s) {
      const int len = 1 + static_cast<int>(unif(rng) * 6);
      std::vector<LadderTerm> seq;
      for (int i = 0; i < len; ++i)
        seq.push_back({static_cast<int>(unif(rng) * modes),
                       unif(rng) < 0.5 ? LadderKind::create : LadderKind::annihilate});
      const auto v = wick_verify(rho, seq);
      const double rel = v.deviation / (1.0 + std::abs(v.exact));
      if (rel >= worst) {
        worst = rel;
        worst_detail = Json{{"sequence", format_ladder_sequence(seq)},
                            {"statistics", to_string(spec.stats)},
                            {"exact", {v.exact.real(), v.exact.imag()}},
                            {"wick", {v.wick.real(), v.wick.imag()}},
                            {"deviation", v.deviation}};
      }
    }
  }
  out.add("max relative Wick deviation", worst, 1e-9, worst_detail);
  return out;
}

inline CheckList verify_ccr(const VerifyOptions& opt) {
  CheckList out;
  const int modes = opt.n > 0 ? opt.n : 3;
  const auto f = check_commutation(ModeSpec::fermions(modes));
  out.add("fermion anticommutator deviation", f.max_deviation, 1e-13);
  const int cutoff = 8;
  const auto b = check_commutation(ModeSpec::bosons(std::min(modes, 2), cutoff));
  out.add("boson commutator deviation below cutoff", b.below_cutoff_deviation, 1e-13);
  out.add("boson top-layer deviation equals cutoff + 1",
          std::abs(b.top_layer_deviation - (cutoff + 1.0)), 1e-12,
          Json{{"top_layer_deviation", b.top_layer_deviation}});
  return out;
}

inline CheckList verify_coherent(const VerifyOptions& opt) {
  CheckList out;
  const Complex alpha{1.5, 0.0};
  const int cutoff = opt.n > 0 ? opt.n : 40;
  const CoherentState cs = coherent_state(alpha, cutoff);
  const double mean = std::norm(alpha);
  double pmf_dev = 0.0;
  for (int k = 0; k < std::min(20, cutoff + 1); ++k) {
    const double poisson = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    pmf_dev = std::max(pmf_dev, std::abs(std::norm(cs.amplitudes(k)) - poisson));
  }
  out.add("number distribution vs Poisson pmf", pmf_dev, 1e-10);
  const ComplexMatrix a = single_mode_annihilator(cutoff);
  const Complex mean_a = cs.amplitudes.dot(a * cs.amplitudes);
  out.add("<alpha|a|alpha> - alpha", std::abs(mean_a - alpha),
          std::max(1e-12, 10.0 * std::abs(alpha) * std::sqrt(cs.tail_mass)));
  const auto d = displacement_check(alpha, cutoff);
  out.add("displacement conjugation deviation", d.conjugation, 1e-8);
  out.add("displacement vacuum deviation", d.vacuum, 1e-8);
  out.add("displacement inverse deviation", d.inverse, 1e-8);
  return out;
}

inline CheckList verify_builder(const VerifyOptions& opt) {
  CheckList out;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> lam(0.01, 0.99);
  double round_trip = 0.0;
  for (Statistics s : {Statistics::fermion, Statistics::boson}) {
    TargetSpectrum t;
    for (int i = 0; i < 50; ++i) t.lambdas.push_back(s == Statistics::fermion ? lam(rng) : 5.0 * lam(rng));
    const auto back = levels_to_spectrum(spectrum_to_levels(t, 1.7, 0.3, s));
    for (std::size_t i = 0; i < t.lambdas.size(); ++i)
      round_trip = std::max(round_trip, std::abs(back.lambdas[i] - t.lambdas[i]));
  }
  out.add("spectrum round trip", round_trip, 1e-12);

  GrandCanonicalSpec g;
  g.beta = 1.3;
  g.zeta = 0.2;
  g.stats = Statistics::fermion;
  std::uniform_real_distribution<double> lev(-2.0, 2.0);
  for (int i = 0; i < 8; ++i) g.nu.push_back(lev(rng));
  const double exact = gaussian_density_matrix(ModeSpec::fermions(8), g.nu, g.beta, g.zeta).log_z;
  out.add("fermion log Z vs exact trace", std::abs(log_partition_function(g) - exact), 1e-10);

  const int n = opt.n > 0 ? opt.n : 10;
  GrandCanonicalSpec cold;
  cold.beta = 1e3;
  cold.zeta = 0.0;
  for (int i = 0; i < n + 2; ++i) cold.nu.push_back(i < n ? -1.0 + 0.05 * i : 0.5 + 0.1 * i);
  const SpectralKernel induced = induced_hermite_kernel(cold);
  const SpectralKernel proj = hermite_projection_kernel(n);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(-6.0 + 12.0 * i / 49.0);
  const ComplexMatrix ki = gram_matrix(induced, grid);
  const ComplexMatrix kp = gram_matrix(proj, grid);
  out.add("zero-temperature induced kernel vs projection", (ki - kp).cwiseAbs().maxCoeff(), 1e-8);
  return out;
}

inline CheckList verify_gue(const VerifyOptions& opt) {
  CheckList out;
  const int n = opt.n > 0 ? opt.n : 8;
  const int reps = opt.reps > 0 ? opt.reps : 5000;
  std::mt19937_64 rng(opt.seed);
  std::vector<double> eig, dpp;
  eig.reserve(static_cast<std::size_t>(n * reps));
  for (int r = 0; r < reps; ++r) {
    const auto ev = gue_eigenvalues(n, rng);
    eig.insert(eig.end(), ev.begin(), ev.end());
  }
  const SpectralKernel k = hermite_projection_kernel(n);
  DppSampler sampler(k, default_window(k));
  for (int r = 0; r < reps; ++r) {
    const auto c = sampler.sample_projection(rng);
    dpp.insert(dpp.end(), c.points().begin(), c.points().end());
  }
  out.add("KS distance GUE eigenvalues vs Hermite DPP", ks_distance(eig, dpp), 0.02,
          Json{{"n", n}, {"reps", reps}, {"captured_mass", sampler.captured_mass()}});
  return out;
}

inline CheckList run_verify(const std::string& suite, const VerifyOptions& opt) {
  if (suite == "wick") return verify_wick(opt);
  if (suite == "ccr") return verify_ccr(opt);
  if (suite == "coherent") return verify_coherent(opt);
  if (suite == "builder") return verify_builder(opt);
  if (suite == "gue") return verify_gue(opt);
  throw ConfigError("unknown suite '" + suite + "' (wick, ccr, coherent, builder, gue)");
}

// ---------------------------------------------------------------------------
// entry point

inline Json error_report(const std::string& command, const std::string& message) {
  return Json{{"schema_version", kSchemaVersion}, {"command", command}, {"error", message}};
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  CLI::App app{"ppfock: point processes from quantum states"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "draw a batch of point configurations");
  std::string s_config, s_out, s_family, s_kernel, s_format;
  double s_rate = 0, s_scale = 0;
  std::vector<double> s_window;
  long long s_reps = 0;
  std::uint64_t s_seed = 0;
  int s_k = 0, s_nodes = 0;
  sample->add_option("--config", s_config, "JSON config or a previous output file");
  auto* o_family = sample->add_option("--family", s_family, "poisson|permanental|cox|projection-dpp|dpp|fock");
  auto* o_kernel = sample->add_option("--kernel", s_kernel, "kernel spec, e.g. hermite:N=10");
  auto* o_rate = sample->add_option("--rate", s_rate, "Poisson rate");
  auto* o_scale = sample->add_option("--scale", s_scale, "intensity scale for Cox/permanental");
  auto* o_window = sample->add_option("--window", s_window, "window a b")->expected(2);
  auto* o_reps = sample->add_option("--reps", s_reps, "replicates");
  auto* o_seed = sample->add_option("--seed", s_seed, "base seed");
  auto* o_k = sample->add_option("--k", s_k, "photon number for the fock family");
  auto* o_nodes = sample->add_option("--nodes-per-unit", s_nodes, "sampling grid density");
  auto* o_format = sample->add_option("--format", s_format, "csv|json");
  sample->add_option("--out", s_out, "output path, '-' for stdout");

  // pcf
  auto* pcf = app.add_subcommand("pcf", "estimate the pair correlation function of a batch");
  std::string p_config, p_batch, p_kernel, p_norm, p_out;
  long long p_bins = 0;
  double p_rmax = 0;
  pcf->add_option("--config", p_config, "JSON config or a previous output file");
  auto* o_batch = pcf->add_option("--batch", p_batch, "batch file (CSV or JSON)");
  auto* o_pkernel = pcf->add_option("--kernel", p_kernel, "theory kernel spec, 'auto' or 'none'");
  auto* o_bins = pcf->add_option("--bins", p_bins, "number of distance bins");
  auto* o_rmax = pcf->add_option("--rmax", p_rmax, "largest distance (default window/4)");
  auto* o_norm = pcf->add_option("--normalization", p_norm, "homogeneous|inhomogeneous|auto");
  pcf->add_option("--out", p_out, "output path, '-' for stdout");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string v_suite, v_out;
  VerifyOptions v_opt;
  verify->add_option("suite", v_suite, "wick|ccr|coherent|builder|gue")->required();
  verify->add_option("--seed", v_opt.seed, "seed");
  verify->add_option("--reps", v_opt.reps, "repetitions (suite default when 0)");
  verify->add_option("--n", v_opt.n, "size parameter (suite default when 0)");
  verify->add_option("--out", v_out, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : bad_input;
  }

  std::string command = "?";
  try {
    if (*sample) {
      command = "sample";
      Json cfg = sample_defaults();
      if (!s_config.empty()) cfg.update(load_config_file(s_config));
      if (*o_family) cfg["family"] = s_family;
      if (*o_kernel) cfg["kernel"] = s_kernel;
      if (*o_rate) cfg["rate"] = s_rate;
      if (*o_scale) cfg["scale"] = s_scale;
      if (*o_window) cfg["window"] = s_window;
      if (*o_reps) cfg["reps"] = s_reps;
      if (*o_seed) cfg["seed"] = s_seed;
      if (*o_k) cfg["k"] = s_k;
      if (*o_nodes) cfg["nodes_per_unit"] = s_nodes;
      if (*o_format) cfg["format"] = s_format;
      cfg["command"] = "sample";
      const SampleRun run = run_sample(cfg);
      const std::string ext = run.config.at("format") == "json" ? ".json" : ".csv";
      const std::string path =
          !s_out.empty() ? s_out
                         : (output_dir() / ("sample_" + run.config.at("family").get<std::string>() +
                                            "_seed" + std::to_string(run.config.at("seed").get<std::uint64_t>()) + ext))
                               .string();
      write_output(path, render_sample(run), out);
      if (path != "-") {
        const auto counts = count_statistics(run.batch);
        out << Json{{"command", "sample"}, {"output", path}, {"n_replicates", run.batch.size()},
                    {"mean_count", counts.mean}, {"fano", counts.fano}}.dump() << '\n';
      }
      return ok;
    }
    if (*pcf) {
      command = "pcf";
      Json cfg = pcf_defaults();
      if (!p_config.empty()) cfg.update(load_config_file(p_config));
      if (*o_batch) cfg["batch"] = p_batch;
      if (*o_pkernel) cfg["kernel"] = p_kernel;
      if (*o_bins) cfg["bins"] = p_bins;
      if (*o_rmax) cfg["rmax"] = p_rmax;
      if (*o_norm) cfg["normalization"] = p_norm;
      cfg["command"] = "pcf";
      PcfRun run = run_pcf(cfg);
      const std::string path =
          !p_out.empty() ? p_out
                         : (output_dir() / ("pcf_" + std::filesystem::path(run.config.at("batch").get<std::string>()).stem().string() + ".csv")).string();
      write_output(path, render_pcf(run), out);
      run.report["output"] = path;
      if (path != "-") out << run.report.dump() << '\n';
      if (run.report.contains("pass") && !run.report.at("pass").get<bool>()) return check_failed;
      return ok;
    }
    if (*verify) {
      command = "verify";
      const CheckList res = run_verify(v_suite, v_opt);
      Json rep{{"schema_version", kSchemaVersion}, {"command", "verify"}, {"suite", v_suite},
               {"seed", v_opt.seed}, {"pass", res.pass}, {"checks", res.checks}};
      const std::string text = rep.dump(2) + "\n";
      out << text;
      if (!v_out.empty()) write_output(v_out, text, out);
      return res.pass ? ok : check_failed;
    }
  } catch (const std::exception& e) {
    err << error_report(command, e.what()).dump() << '\n';
    return bad_input;
  }
  return bad_input;
}

}  // namespace ppfock::cli
