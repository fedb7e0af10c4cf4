#include "hoslab/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "hoslab/evolution.hpp"
#include "hoslab/initial_data.hpp"

namespace hoslab {

namespace detail {
// Defined in experiments.cpp.
std::map<std::string, ExperimentRunner> build_registry();
json experiment_defaults(const std::string& experiment);
}  // namespace detail

const std::map<std::string, ExperimentRunner>& experiment_registry() {
  static const std::map<std::string, ExperimentRunner> registry = detail::build_registry();
  return registry;
}

json default_config(const std::string& experiment) {
  if (!experiment_registry().count(experiment))
    throw ConfigError("unknown experiment '" + experiment + "'");
  return detail::experiment_defaults(experiment);
}

json merge_config(json base, const json& overlay) {
  if (!overlay.is_object()) return overlay;
  if (!base.is_object()) base = json::object();
  for (const auto& [key, value] : overlay.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object())
      base[key] = merge_config(base[key], value);
    else
      base[key] = value;
  }
  return base;
}

void apply_set_flag(json& config, const std::string& key_eq_value) {
  auto eq = key_eq_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key=value, got '" + key_eq_value + "'");
  std::string dotted = key_eq_value.substr(0, eq);
  std::string raw = key_eq_value.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // unquoted strings are taken literally
  }

  json* node = &config;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    std::string part = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("--set key has an empty path segment: '" + dotted + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::uint64_t config_hash(const json& params) {
  json canon = params;
  canon.erase("out_dir");  // relocation must not change the run identity
  const std::string dump = canon.dump();  // nlohmann keeps object keys sorted
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

GridSpec grid_from(const json& params) {
  const json& g = params.at("grid");
  GridSpec spec{g.at("d").get<int>(), g.at("k").get<int>(), g.at("L").get<double>(),
                g.at("n").get<int>()};
  spec.validate();
  return spec;
}

SolverConfig solver_from(const json& params) {
  SolverConfig cfg;
  const json& s = params.at("solver");
  cfg.dt = s.at("dt").get<double>();
  cfg.T = s.at("T").get<double>();
  if (s.contains("dealias")) cfg.dealias = s.at("dealias").get<bool>();
  if (s.contains("record_every")) cfg.record_every = s.at("record_every").get<int>();
  if (s.contains("nonlinearity_on")) cfg.nonlinearity_on = s.at("nonlinearity_on").get<bool>();
  if (s.contains("dispersion_on")) cfg.dispersion_on = s.at("dispersion_on").get<bool>();
  cfg.validate();
  return cfg;
}

Field generate_initial_data(const std::string& kind, const GridSpec& g, std::uint64_t seed,
                            double amplitude, const json& data_params) {
  if (kind == "gaussian") {
    double sigma = data_params.value("sigma", 1.0);
    return gaussian(g, amplitude, sigma);
  }
  if (kind == "multi-bump") return multi_bump(g, seed, amplitude);
  if (kind == "shell-random") {
    double lo = data_params.value("band_lo", 0.2);
    double hi = data_params.value("band_hi", g.nyquist());
    double decay = data_params.value("decay", 1.0);
    Field f = shell_random(g, lo, hi, seed, decay);
    if (amplitude != 1.0)
      f = Field::from_spectral(g, f.spectral() * amplitude);
    return f;
  }
  if (kind == "single-mode") {
    std::vector<int> j;
    if (data_params.contains("mode"))
      j = data_params.at("mode").get<std::vector<int>>();
    else
      j.assign(g.d, 0), j[0] = 1;
    return single_mode(g, j, amplitude);
  }
  throw ConfigError("unknown initial data kind '" + kind + "'");
}

void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  jobs = int(std::max<std::int64_t>(1, std::min<std::int64_t>(jobs, count)));
  if (jobs == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      while (true) {
        std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[v & 0xf];
    v >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical reruns on any platform
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("short write to '" + path.string() + "'");
}

void emit_curve(const std::filesystem::path& dir, const Curve& curve) {
  CsvWriter csv(curve.columns);
  for (const auto& note : curve.notes) csv.comment(note);
  if (curve.has_fit) {
    std::ostringstream fit;
    fit << "fit: slope=" << curve.fit_slope << " intercept=" << curve.fit_intercept;
    csv.comment(fit.str());
  }
  for (const auto& row : curve.rows) csv.row(row);
  csv.save(dir / (curve.name + ".csv"));

  // Plain two-column file plus a gnuplot stub for quick inspection.
  std::ostringstream dat;
  for (const auto& row : curve.rows) {
    if (row.size() < 2) continue;
    dat << CsvWriter::format_double(row[0]) << ' ' << CsvWriter::format_double(row[1]) << '\n';
  }
  write_text(dir / (curve.name + ".dat"), dat.str());

  if (curve.has_fit && !curve.rows.empty()) {
    double xlo = curve.rows.front()[0], xhi = xlo;
    for (const auto& row : curve.rows) {
      xlo = std::min(xlo, row[0]);
      xhi = std::max(xhi, row[0]);
    }
    std::ostringstream fit_dat;
    for (double x : {xlo, xhi})
      fit_dat << CsvWriter::format_double(x) << ' '
              << CsvWriter::format_double(curve.fit_slope * x + curve.fit_intercept) << '\n';
    write_text(dir / (curve.name + "_fit.dat"), fit_dat.str());
  }
  if (!curve.notes.empty()) {
    std::ostringstream sidecar;
    for (const auto& note : curve.notes) sidecar << note << '\n';
    write_text(dir / (curve.name + "_excluded.txt"), sidecar.str());
  }

  std::ostringstream gp;
  gp << "set title '" << curve.name << "'\n";
  gp << "set key left\n";
  if (curve.has_fit) {
    gp << "f(x) = " << CsvWriter::format_double(curve.fit_slope) << "*x + "
       << CsvWriter::format_double(curve.fit_intercept) << "\n";
    gp << "plot '" << curve.name << ".dat' with points pt 7, f(x) with lines\n";
  } else {
    gp << "plot '" << curve.name << ".dat' with linespoints pt 7\n";
  }
  write_text(dir / (curve.name + ".gp"), gp.str());
}

}  // namespace

ExperimentRecord run(const ExperimentConfig& config) {
  const auto& registry = experiment_registry();
  auto it = registry.find(config.experiment);
  if (it == registry.end()) throw ConfigError("unknown experiment '" + config.experiment + "'");
  if (config.jobs < 1) throw ConfigError("--jobs must be at least 1");

  std::uint64_t seed = config.params.value("seed", std::uint64_t{0});
  std::uint64_t hash = config_hash(config.params);
  std::filesystem::path dir =
      config.out_dir / (config.experiment + "_s" + std::to_string(seed) + "_" + hex16(hash));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ConfigError("cannot create output directory '" + dir.string() + "'");

  auto t0 = std::chrono::steady_clock::now();
  ExperimentOutput output;
  try {
    output = it->second(config);
  } catch (const ConfigError&) {
    throw;  // bad sweeps etc. are configuration problems, not run results
  } catch (const BlowUpSuspected& e) {
    output.verdicts.push_back({"run-completed", "abort", e.t, 0.0, e.what()});
    output.results["error"] = e.what();
  } catch (const std::exception& e) {
    output.verdicts.push_back({"run-completed", "abort", 0.0, 0.0, e.what()});
    output.results["error"] = e.what();
  }
  auto t1 = std::chrono::steady_clock::now();
  double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  ExperimentRecord record;
  record.directory = dir;
  json verdicts = json::array();
  for (const auto& v : output.verdicts) {
    json entry = {{"criterion", v.criterion}, {"status", v.status}};
    entry["measured"] = v.measured;
    entry["bound"] = v.bound;
    if (!v.note.empty()) entry["note"] = v.note;
    verdicts.push_back(entry);
    if (v.status == "fail" || v.status == "abort") record.all_passed = false;
  }

  json config_echo = config.params;
  config_echo["out_dir"] = config.out_dir.string();
  json environment = {
#if defined(__linux__)
      {"os", "linux"},
#elif defined(__APPLE__)
      {"os", "darwin"},
#else
      {"os", "other"},
#endif
      {"pointer_bits", int(8 * sizeof(void*))},
      {"scalar", "double"}};
  record.document = {{"experiment", config.experiment},
                     {"version", artifact_version},
                     {"config", config_echo},
                     {"environment", environment},
                     {"results", output.results},
                     {"verdicts", verdicts},
                     {"wall_ms", wall_ms}};

  write_text(dir / "record.json", record.document.dump(2) + "\n");
  for (const auto& curve : output.curves) emit_curve(dir, curve);
  for (const auto& [name, content] : output.files) write_text(dir / name, content);
  return record;
}

}  // namespace hoslab
