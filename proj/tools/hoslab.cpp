#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hoslab/harness.hpp"

using namespace hoslab;

int main(int argc, char** argv) {
  CLI::App app{"hoslab: pseudospectral verification lab for the L2-critical "
               "higher-order Schrodinger equation"};
  app.get_formatter()->column_width(28);

  std::string experiment;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  int jobs = 1;

  app.add_option("experiment", experiment, "registered experiment name")->required();
  app.add_option("--config", config_path, "JSON config file overlaying the defaults");
  app.add_option("--set", sets, "dotted key=value overrides (highest precedence)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0; anything else is a config error
  }

  try {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.params = default_config(experiment);
    cfg.jobs = jobs;

    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
      json overlay;
      try {
        overlay = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + config_path + "': " + e.what());
      }
      if (overlay.contains("experiment") && overlay["experiment"] != experiment)
        throw ConfigError("config file targets experiment '" +
                          overlay["experiment"].get<std::string>() + "', not '" + experiment + "'");
      overlay.erase("experiment");
      cfg.params = merge_config(cfg.params, overlay);
    }
    for (const auto& kv : sets) apply_set_flag(cfg.params, kv);

    if (cfg.params.contains("out_dir")) {
      cfg.out_dir = cfg.params["out_dir"].get<std::string>();
      cfg.params.erase("out_dir");
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (const char* env = std::getenv("HOSLAB_OUT"); env && *env) cfg.out_dir = env;

    const ExperimentRecord record = run(cfg);
    for (const auto& v : record.document["verdicts"]) {
      std::cout << v["criterion"].get<std::string>() << ": " << v["status"].get<std::string>();
      if (v.contains("measured"))
        std::cout << "  (measured " << v["measured"].get<double>() << ", bound "
                  << v["bound"].get<double>() << ")";
      std::cout << "\n";
    }
    std::cout << "record: " << (record.directory / "record.json").string() << "\n";
    return record.all_passed ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
