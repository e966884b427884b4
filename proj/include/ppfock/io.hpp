#pragma once

// Kernel specs, CSV and JSON serialization. Needs vendor/json.hpp on the
// include path.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ppfock/estimators.hpp"
#include "ppfock/fermion_builder.hpp"
#include "ppfock/gaussian_field.hpp"
#include "ppfock/kernels.hpp"
#include "ppfock/point_configuration.hpp"

namespace ppfock {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Kernel specs

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// name + numeric parameters, plus an optional eigenvalue or level list.
/// Text form: "hermite:N=10", "lorentz:sigma=0.1,omega=100",
/// "hermite:lambdas=0.2;0.9;0.5", or the JSON object form.
struct KernelSpec {
  std::string name;
  std::map<std::string, double> params;
  std::vector<double> values;  // lambdas or levels, depending on the family

  bool has(const std::string& key) const { return params.count(key) != 0; }
  double get(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw SpecError("kernel spec '" + name + "': missing parameter " + key);
    return it->second;
  }
  double get(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }

  std::string to_string() const {
    std::string s = name;
    char sep = ':';
    for (const auto& [k, v] : params) {
      s += sep + k + "=" + format_double(v);
      sep = ',';
    }
    if (!values.empty()) {
      s += sep;
      s += "values=";
      for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ";" : "") + format_double(values[i]);
    }
    return s;
  }
};

inline Json to_json(const KernelSpec& k) {
  Json j;
  j["name"] = k.name;
  Json p = Json::object();
  for (const auto& [key, v] : k.params) p[key] = v;
  j["params"] = p;
  if (!k.values.empty()) j["values"] = k.values;
  return j;
}

inline KernelSpec kernel_spec_from_json(const Json& j) {
  KernelSpec k;
  if (!j.is_object() || !j.contains("name")) throw SpecError("kernel spec JSON needs a name");
  k.name = j.at("name").get<std::string>();
  if (j.contains("params"))
    for (const auto& [key, v] : j.at("params").items()) {
      if (!v.is_number()) throw SpecError("kernel spec parameter " + key + " is not a number");
      k.params[key] = v.get<double>();
    }
  for (const char* key : {"values", "lambdas", "levels"})
    if (j.contains(key)) k.values = j.at(key).get<std::vector<double>>();
  return k;
}

inline double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw SpecError("bad number '" + s + "' for " + what);
  }
  if (used != s.size()) throw SpecError("bad number '" + s + "' for " + what);
  return v;
}

inline KernelSpec parse_kernel_spec(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return kernel_spec_from_json(Json::parse(text));
    } catch (const Json::exception& e) {
      throw SpecError(std::string("kernel spec JSON: ") + e.what());
    }
  }
  KernelSpec k;
  const auto colon = text.find(':');
  k.name = text.substr(0, colon);
  if (k.name.empty()) throw SpecError("kernel spec '" + text + "' has no name");
  if (colon == std::string::npos) return k;
  std::istringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SpecError("kernel spec item '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "values" || key == "lambdas" || key == "levels") {
      std::istringstream vs(val);
      std::string v;
      while (std::getline(vs, v, ';')) k.values.push_back(parse_number(v, key));
    } else {
      k.params[key] = parse_number(val, key);
    }
  }
  return k;
}

/// Either a stationary covariance (Cox / permanental families) or a spectral
/// kernel (determinantal families), or a Fock-state wave packet.
struct ResolvedKernel {
  std::variant<std::monostate, StationaryCovariance, SpectralKernel, std::function<Complex(double)>> value;

  bool is_stationary() const { return std::holds_alternative<StationaryCovariance>(value); }
  bool is_spectral() const { return std::holds_alternative<SpectralKernel>(value); }
  bool is_wavepacket() const { return std::holds_alternative<std::function<Complex(double)>>(value); }
  bool is_poisson() const { return std::holds_alternative<std::monostate>(value); }
  const StationaryCovariance& stationary() const { return std::get<StationaryCovariance>(value); }
  const SpectralKernel& spectral() const { return std::get<SpectralKernel>(value); }
  const std::function<Complex(double)>& wavepacket() const {
    return std::get<std::function<Complex(double)>>(value);
  }
};

/// Families:
///   poisson                      flat reference, no kernel
///   lorentz:sigma,omega          real cosine-modulated exponential
///   analytic-lorentz:sigma,omega its analytic-signal covariance
///   hermite:N or values          Hermite basis; projection when only N given
///   grand-canonical-hermite:beta,zeta + levels   induced kernel
///   discrete:values              diagonal kernel on {0..n-1}
///   wavepacket:center,width,omega  Gaussian packet for Fock states
inline ResolvedKernel resolve_kernel(const KernelSpec& k) {
  ResolvedKernel r;
  const auto stats = [&](Statistics fallback) {
    if (!k.has("eta")) return fallback;
    return statistics_from_eta(static_cast<int>(k.get("eta")));
  };
  if (k.name == "poisson") return r;
  if (k.name == "lorentz") {
    r.value = lorentz_kernel(k.get("sigma"), k.get("omega", 0.0));
  } else if (k.name == "analytic-lorentz") {
    r.value = analytic_lorentz_kernel(k.get("sigma"), k.get("omega", 0.0));
  } else if (k.name == "hermite") {
    if (!k.values.empty()) {
      r.value = hermite_spectral_kernel(k.values, stats(Statistics::fermion));
    } else {
      const double n = k.get("N");
      if (n != std::floor(n) || n < 1) throw SpecError("hermite: N must be a positive integer");
      r.value = hermite_projection_kernel(static_cast<int>(n));
    }
  } else if (k.name == "grand-canonical-hermite") {
    GrandCanonicalSpec g;
    g.beta = k.get("beta");
    g.zeta = k.get("zeta", 0.0);
    g.nu = k.values;
    g.stats = stats(Statistics::fermion);
    if (g.nu.empty()) throw SpecError("grand-canonical-hermite: needs levels");
    r.value = induced_hermite_kernel(g);
  } else if (k.name == "discrete") {
    if (k.values.empty()) throw SpecError("discrete: needs values");
    r.value = discrete_diagonal_kernel(k.values, stats(Statistics::fermion));
  } else if (k.name == "wavepacket") {
    const double c = k.get("center");
    const double s = k.get("width");
    const double om = k.get("omega", 0.0);
    if (!(s > 0.0)) throw SpecError("wavepacket: width must be positive");
    r.value = std::function<Complex(double)>([c, s, om](double t) {
      const double u = (t - c) / s;
      return std::polar(std::exp(-0.25 * u * u), -om * t);
    });
  } else {
    throw SpecError("unknown kernel family '" + k.name + "'");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Trajectories

inline void write_trajectory_csv(std::ostream& os, const ComplexTrajectory& x) {
  os << "t,re,im\n";
  for (std::size_t i = 0; i < x.values.size(); ++i)
    os << format_double(x.grid.time(i)) << ',' << format_double(x.values[i].real()) << ','
       << format_double(x.values[i].imag()) << '\n';
}

// ---------------------------------------------------------------------------
// Batches

/// '#'-prefixed metadata lines written above the CSV header.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Batch CSV: metadata lines, then "replicate_id,t" rows. Window and
/// replicate count are always recorded so empty replicates survive.
inline void write_batch_csv(std::ostream& os, const Batch& batch, const Metadata& meta = {}) {
  if (batch.empty()) throw std::invalid_argument("write_batch_csv: empty batch");
  const Window& w = batch.front().window();
  os << "# schema_version: " << kSchemaVersion << '\n';
  os << "# window: " << format_double(w.a) << ' ' << format_double(w.b) << '\n';
  os << "# n_replicates: " << batch.size() << '\n';
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  os << "replicate_id,t\n";
  for (std::size_t r = 0; r < batch.size(); ++r)
    for (double t : batch[r].points()) os << r << ',' << format_double(t) << '\n';
}

struct BatchFile {
  Batch batch;
  Metadata meta;

  std::string get(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    return {};
  }
};

inline BatchFile read_batch_csv(std::istream& is) {
  BatchFile out;
  std::string line;
  std::optional<Window> window;
  long long n_rep = -1;
  std::vector<std::vector<double>> pts;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string val = line.substr(colon + 1);
      key.erase(0, key.find_first_not_of(' '));
      val.erase(0, val.find_first_not_of(' '));
      if (key == "window") {
        std::istringstream ws(val);
        double a = 0.0, b = 0.0;
        ws >> a >> b;
        window = Window(a, b);
      } else if (key == "n_replicates") {
        n_rep = std::stoll(val);
        pts.assign(static_cast<std::size_t>(n_rep), {});
      } else if (key != "schema_version") {
        out.meta.emplace_back(key, val);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "replicate_id,t") throw std::runtime_error("batch CSV: expected header replicate_id,t");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || n_rep < 0)
      throw std::runtime_error("batch CSV: malformed line " + std::to_string(lineno));
    const auto r = std::stoll(line.substr(0, comma));
    if (r < 0 || r >= n_rep) throw std::runtime_error("batch CSV: replicate id out of range");
    pts[static_cast<std::size_t>(r)].push_back(std::stod(line.substr(comma + 1)));
  }
  if (!window || n_rep < 0) throw std::runtime_error("batch CSV: missing window or n_replicates");
  for (auto& p : pts) out.batch.emplace_back(*window, std::move(p));
  return out;
}

inline Json batch_to_json(const Batch& batch, const Metadata& meta = {}) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  const Window& w = batch.front().window();
  j["window"] = {w.a, w.b};
  Json m = Json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  j["metadata"] = m;
  Json reps = Json::array();
  for (const auto& c : batch) reps.push_back(c.points());
  j["replicates"] = reps;
  return j;
}

inline BatchFile batch_from_json(const Json& j) {
  BatchFile out;
  const Window w(j.at("window").at(0).get<double>(), j.at("window").at(1).get<double>());
  for (const auto& r : j.at("replicates")) out.batch.emplace_back(w, r.get<std::vector<double>>());
  if (j.contains("metadata"))
    for (const auto& [k, v] : j.at("metadata").items()) out.meta.emplace_back(k, v.get<std::string>());
  return out;
}

inline BatchFile read_batch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open batch file '" + path + "'");
  const int first = in.peek();
  if (first == '{') return batch_from_json(Json::parse(in));
  return read_batch_csv(in);
}

// ---------------------------------------------------------------------------
// Pair correlation

inline void write_pcf_csv(std::ostream& os, const PcfEstimate& est, const std::vector<double>& theory,
                          const Metadata& meta = {}) {
  os << "# schema_version: " << kSchemaVersion << '\n';
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  os << "r_mid,g_hat,stderr" << (theory.empty() ? "" : ",g_theory") << '\n';
  for (std::size_t i = 0; i < est.g_hat.size(); ++i) {
    os << format_double(est.r_mid(i)) << ',' << format_double(est.g_hat[i]) << ','
       << format_double(est.std_error[i]);
    if (!theory.empty()) os << ',' << format_double(theory[i]);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Grand-canonical specs

inline Json to_json(const GrandCanonicalSpec& s) {
  return Json{{"schema_version", kSchemaVersion},
              {"beta", s.beta},
              {"zeta", s.zeta},
              {"nu", s.nu},
              {"eta", eta(s.stats)}};
}

inline GrandCanonicalSpec grand_canonical_from_json(const Json& j) {
  GrandCanonicalSpec s;
  s.beta = j.at("beta").get<double>();
  s.zeta = j.value("zeta", 0.0);
  s.nu = j.at("nu").get<std::vector<double>>();
  s.stats = statistics_from_eta(j.value("eta", -1));
  s.validate();
  return s;
}

inline Json to_json(const TargetSpectrum& t) {
  return Json{{"schema_version", kSchemaVersion}, {"lambdas", t.lambdas}};
}

inline TargetSpectrum target_spectrum_from_json(const Json& j) {
  return TargetSpectrum{j.at("lambdas").get<std::vector<double>>()};
}

}  // namespace ppfock
