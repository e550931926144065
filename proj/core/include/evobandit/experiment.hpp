#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evobandit/evolution.hpp"

namespace evobandit {

// Everything needed to reproduce one scenario: environments, population and
// schedule sizes, initialization, mutation table, and the master seed.
struct ScenarioConfig {
  std::string name;
  std::vector<EnvironmentSpec> environments;
  int n_agents = 1000;
  int n_generations = 200;
  int n_reboots = 100;
  InitMode init_mode = UniformInit{};
  MutationTable mutation_table{};
  MutationTarget mutation_target = MutationTarget::five_percent_of_survivors;
  std::uint64_t master_seed = 0;
  bool record_curves = false;  // per-trial correct counts at the final generation

  // Throws std::invalid_argument naming the offending field and value.
  void validate() const;
};

// One independent run of the evolutionary process.
struct RebootResult {
  int reboot = 0;
  std::vector<GenerationStats> generations;  // one entry per generation

  // Final-generation population means (the last telemetry entry).
  double final_alpha_plus = 0.0;
  double final_alpha_minus = 0.0;
  double final_beta = 0.0;
  double final_tau = 0.0;
  double final_phi = 0.0;
  double final_delta_alpha = 0.0;  // alpha+ minus alpha-

  // Final-generation per-trial correct counts, one array per environment;
  // empty unless the config asked for curves.
  std::vector<std::vector<std::uint32_t>> correct_counts;
  int curve_agents = 0;
};

// Runs one reboot with streams derived from (master seed, reboot index).
RebootResult run_reboot(const ScenarioConfig& config, int reboot_index,
                        int threads = 1);

// Runs all reboots; independent, so they may execute in parallel without
// changing any result.
std::vector<RebootResult> run_scenario(const ScenarioConfig& config,
                                       int threads = 1);

// The full scenario catalog: the five initialization studies of the baseline
// environment, the seven stable and nine volatile single-environment
// scenarios, and the two macro scenarios. "init-uniform" and "baseline" name
// the same configuration (it belongs to both views).
std::vector<ScenarioConfig> scenario_grid();

const ScenarioConfig* find_scenario(std::span<const ScenarioConfig> grid,
                                    std::string_view name);

}  // namespace evobandit
