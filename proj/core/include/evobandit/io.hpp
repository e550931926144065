#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evobandit/experiment.hpp"
#include "evobandit/stats.hpp"

namespace evobandit {

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(std::string_view name);

struct RunManifest {
  std::string version;
  std::uint64_t master_seed = 0;
  double duration_seconds = 0.0;
  std::string config_json;  // snapshot of every scenario config in the run

  struct OutputFile {
    std::string path;       // relative to the output directory
    std::size_t rows = 0;   // data rows, header excluded
  };
  std::vector<OutputFile> outputs;
};

struct ScenarioRun {
  ScenarioConfig config;
  std::vector<RebootResult> reboots;
};

// Writes telemetry, summary, optional learning curves, and the manifest to
// out_dir. Numeric fields carry 6 significant digits; every row is
// newline-terminated. Returns the manifest (also written as manifest.json).
RunManifest emit_outputs(std::span<const ScenarioRun> runs,
                         std::span<const SummaryRow> summaries,
                         const std::filesystem::path& out_dir,
                         OutputFormat format = OutputFormat::csv,
                         double duration_seconds = 0.0);

// 6-significant-digit serialization used by every emitter.
std::string format_sig6(double value);

// ScenarioConfig <-> JSON. Environment fields mirror EnvironmentSpec exactly.
std::string scenario_config_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_config_from_json(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::filesystem::path& file);

// Command-line overrides; unset fields keep the file/default values.
struct ConfigOverrides {
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> master_seed;
  std::optional<int> n_reboots;
  std::optional<int> n_agents;
  std::optional<int> n_generations;
  std::optional<std::string> mutation_target;
  std::optional<bool> record_curves;
};

// Resolves a scenario configuration from an optional config file plus
// overrides: defaults, then file values, then flags. Throws
// std::invalid_argument with the offending field and value.
ScenarioConfig parse_config(const std::optional<std::filesystem::path>& config_file,
                            const ConfigOverrides& overrides);

}  // namespace evobandit
