#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hoslab/estimates.hpp"
#include "hoslab/field_io.hpp"

#include <json.hpp>

namespace hoslab {

using json = nlohmann::json;

inline constexpr const char* artifact_version = "hoslab 0.1.0";

// Configuration problems are rejected before any computation and map to CLI
// exit code 2; everything else becomes a fail/abort verdict in the record.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  json params;  // merged: experiment defaults <- config file <- --set flags
  std::filesystem::path out_dir = "hoslab_out";
  int jobs = 1;
};

struct Verdict {
  std::string criterion;
  std::string status;  // "pass" | "fail" | "report" | "abort"
  double measured = 0.0;
  double bound = 0.0;
  std::string note;
};

// A fitted or swept curve destined for CSV + gnuplot emission.
struct Curve {
  Curve() = default;
  Curve(std::string name_, std::vector<std::string> columns_)
      : name(std::move(name_)), columns(std::move(columns_)) {}

  std::string name;
  std::vector<std::string> columns;        // header (first two columns are plotted)
  std::vector<std::vector<double>> rows;
  bool has_fit = false;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  std::vector<std::string> notes;          // e.g. excluded sweep points
};

struct ExperimentOutput {
  json results;
  std::vector<Verdict> verdicts;
  std::vector<Curve> curves;
  std::vector<std::pair<std::string, std::string>> files;  // extra (filename, content)
};

struct ExperimentRecord {
  json document;                     // the record as written to record.json
  std::filesystem::path directory;   // where record + CSVs landed
  bool all_passed = true;            // no "fail"/"abort" verdicts
};

using ExperimentRunner = std::function<ExperimentOutput(const ExperimentConfig&)>;

const std::map<std::string, ExperimentRunner>& experiment_registry();
json default_config(const std::string& experiment);

// Merge order: defaults, then file overlay, then --set key=value pairs
// (dotted keys); later entries win.
json merge_config(json base, const json& overlay);
void apply_set_flag(json& config, const std::string& key_eq_value);

// Stable 64-bit FNV-1a over the canonical (sorted-key) config dump; output
// paths derive from it so reruns overwrite deterministically.
std::uint64_t config_hash(const json& params);

// Dispatch, measure, persist. Writes record.json plus every curve CSV and
// gnuplot stub into <out_dir>/<experiment>_s<seed>_<hash>/ and returns the
// record; a record is written even when the experiment fails or aborts.
ExperimentRecord run(const ExperimentConfig& config);

// Shared helpers for runners.
GridSpec grid_from(const json& params);
SolverConfig solver_from(const json& params);
Field generate_initial_data(const std::string& kind, const GridSpec& g, std::uint64_t seed,
                            double amplitude, const json& data_params);

// Bounded worker pool over [0, count) with deterministic aggregation left to
// the caller (results land in caller-indexed slots).
void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn);

}  // namespace hoslab
