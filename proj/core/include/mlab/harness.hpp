#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mlab::harness {

inline constexpr int kSchemaVersion = 1;

const char* toolkit_version();

// The eighteen experiment names accepted in configs.
const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
  std::string experiment;
  std::string name;  // report stem; defaults to the experiment name
  std::uint64_t seed = 20240601;
  nlohmann::json params = nlohmann::json::object();
  std::filesystem::path out_dir = "reports";
  double tolerance_scale = 1.0;
  int threads = 1;
};

// {"experiment": ..., "name": ..., "seed": ..., "params": {...}}. Unknown experiment
// names and malformed fields raise precondition_error.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

enum class Verdict { Pass, Fail, Recorded };
const char* to_string(Verdict v);

struct ExperimentReport {
  ExperimentConfig config;
  Verdict verdict = Verdict::Fail;
  double wall_time = 0;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json cases = nlohmann::json::array();
  std::string error;  // set when the run stopped on an exception
  std::vector<std::filesystem::path> files;

  // schemaVersion, experiment, anchor, config, cases, summary, verdict, wallTime,
  // seed, toolkitVersion, and error when present.
  nlohmann::json to_json() const;
};

// Runs one experiment and writes <out_dir>/<name>.json plus its CSV tables. Failures
// inside the experiment are caught, persisted with verdict FAIL, and returned.
ExperimentReport run_experiment(const ExperimentConfig& config, bool write = true);

struct SuiteOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<double> tolerance_scale;
  int threads = 1;
};

struct SuiteSummary {
  std::vector<ExperimentReport> reports;
  bool any_fail = false;
};

// Manifest: {"experiments": [config, ...]} or a bare array. Experiments run on a
// pool of `threads` workers; each keeps running when another fails.
std::vector<ExperimentConfig> load_manifest(const std::filesystem::path& path, const SuiteOverrides& o = {});
SuiteSummary run_suite(const std::vector<ExperimentConfig>& manifest, int threads = 1, bool write = true);

// Writes to a temporary sibling and renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mlab::harness
