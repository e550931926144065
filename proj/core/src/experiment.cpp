#include "evobandit/experiment.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "evobandit/parallel.hpp"

namespace evobandit {

void ScenarioConfig::validate() const {
  std::ostringstream err;
  if (n_agents <= 0 || n_agents % 20 != 0) {
    err << "n_agents must be a positive multiple of 20, got " << n_agents;
  } else if (n_generations < 1) {
    err << "n_generations must be at least 1, got " << n_generations;
  } else if (n_reboots < 1) {
    err << "n_reboots must be at least 1, got " << n_reboots;
  } else if (environments.empty()) {
    err << "at least one environment is required";
  } else if (mutation_table.alpha_plus < 0.0 || mutation_table.alpha_minus < 0.0 ||
             mutation_table.beta < 0.0 || mutation_table.tau < 0.0 ||
             mutation_table.phi < 0.0) {
    err << "mutation_table standard deviations must be non-negative";
  } else {
    if (const auto* fixed = std::get_if<FixedInit>(&init_mode)) {
      const Genome& g = fixed->genome;
      if (!kAlphaRange.contains(g.alpha_plus)) {
        err << "init genome alpha_plus out of range [0,1]: " << g.alpha_plus;
      } else if (!kAlphaRange.contains(g.alpha_minus)) {
        err << "init genome alpha_minus out of range [0,1]: " << g.alpha_minus;
      } else if (!kBetaRange.contains(g.beta)) {
        err << "init genome beta out of range [0,20]: " << g.beta;
      } else if (!kTauRange.contains(g.tau)) {
        err << "init genome tau out of range [0,1]: " << g.tau;
      } else if (!kPhiRange.contains(g.phi)) {
        err << "init genome phi out of range [-20,20]: " << g.phi;
      }
    }
    if (err.str().empty()) {
      for (const auto& env : environments) env.validate();
      return;
    }
  }
  throw std::invalid_argument(err.str());
}

RebootResult run_reboot(const ScenarioConfig& config, int reboot_index,
                        int threads) {
  const Rng reboot_stream =
      Rng(config.master_seed).child(static_cast<std::uint64_t>(reboot_index));

  Rng init_stream = reboot_stream.child(stream_tag::init);
  Population population =
      init_population(config.init_mode, config.n_agents, init_stream);

  StepConfig step;
  step.environments = config.environments;
  step.mutation_table = config.mutation_table;
  step.mutate = mutation_enabled(config.init_mode);
  step.mutation_target = config.mutation_target;
  step.threads = threads;

  // Atomic counters so the final-generation curve accumulation stays exact
  // (and therefore thread-count independent): integer adds commute.
  std::vector<std::vector<std::atomic<std::uint32_t>>> curves;
  if (config.record_curves) {
    curves.resize(config.environments.size());
    for (std::size_t e = 0; e < curves.size(); ++e) {
      curves[e] = std::vector<std::atomic<std::uint32_t>>(
          static_cast<std::size_t>(config.environments[e].n_trials));
    }
  }

  RebootResult result;
  result.reboot = reboot_index;
  result.generations.reserve(static_cast<std::size_t>(config.n_generations));
  for (int gen = 0; gen < config.n_generations; ++gen) {
    const bool final_generation = gen == config.n_generations - 1;
    auto sink = (config.record_curves && final_generation)
                    ? std::span<std::vector<std::atomic<std::uint32_t>>>(curves)
                    : std::span<std::vector<std::atomic<std::uint32_t>>>();
    result.generations.push_back(step_generation(population, step, reboot_stream, sink));
  }

  const GenerationStats& last = result.generations.back();
  result.final_alpha_plus = last.mean_alpha_plus;
  result.final_alpha_minus = last.mean_alpha_minus;
  result.final_beta = last.mean_beta;
  result.final_tau = last.mean_tau;
  result.final_phi = last.mean_phi;
  result.final_delta_alpha = last.mean_alpha_plus - last.mean_alpha_minus;

  if (config.record_curves) {
    result.curve_agents = config.n_agents;
    result.correct_counts.resize(curves.size());
    for (std::size_t e = 0; e < curves.size(); ++e) {
      result.correct_counts[e].reserve(curves[e].size());
      for (const auto& counter : curves[e]) {
        result.correct_counts[e].push_back(counter.load(std::memory_order_relaxed));
      }
    }
  }
  return result;
}

std::vector<RebootResult> run_scenario(const ScenarioConfig& config, int threads) {
  config.validate();
  const int n = config.n_reboots;
  const int outer = std::max(1, std::min(threads, n));
  const int inner = std::max(1, threads / outer);

  std::vector<RebootResult> results(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), outer, [&](std::size_t i) {
    results[i] = run_reboot(config, static_cast<int>(i), inner);
  });
  return results;
}

namespace {

ScenarioConfig scenario_base(std::string name, std::vector<EnvironmentSpec> envs) {
  ScenarioConfig config;
  config.name = std::move(name);
  config.environments = std::move(envs);
  return config;
}

ScenarioConfig init_study_scenario(std::string name, const Genome& start,
                                   const EnvironmentSpec& baseline_env) {
  ScenarioConfig config = scenario_base(std::move(name), {baseline_env});
  config.init_mode = FixedInit{start};
  return config;
}

}  // namespace

std::vector<ScenarioConfig> scenario_grid() {
  const auto stable = stable_catalog();
  const auto volatiles = volatile_catalog();
  const EnvironmentSpec& baseline_env = stable[1];

  std::vector<ScenarioConfig> grid;
  grid.reserve(23);

  // Initialization studies of the baseline environment. The uniform entry is
  // the baseline scenario itself; it appears under both names.
  grid.push_back(init_study_scenario("init-zero", Genome{}, baseline_env));
  grid.push_back(init_study_scenario(
      "init-persev", Genome{0.5, 0.5, 10.0, 0.5, 10.0}, baseline_env));
  grid.push_back(init_study_scenario(
      "init-neutral", Genome{0.5, 0.5, 10.0, 0.5, 0.0}, baseline_env));
  grid.push_back(init_study_scenario(
      "init-posbias", Genome{0.5, 0.25, 10.0, 0.5, 0.0}, baseline_env));
  grid.push_back(scenario_base("init-uniform", {baseline_env}));

  for (const auto& env : stable) {
    grid.push_back(scenario_base(env.label, {env}));
  }
  for (const auto& env : volatiles) {
    grid.push_back(scenario_base(env.label, {env}));
  }

  grid.push_back(scenario_base("macro-stable", stable));
  grid.push_back(scenario_base("macro-volatile", volatiles));
  return grid;
}

const ScenarioConfig* find_scenario(std::span<const ScenarioConfig> grid,
                                    std::string_view name) {
  const auto it = std::find_if(grid.begin(), grid.end(), [&](const auto& config) {
    return config.name == name;
  });
  return it == grid.end() ? nullptr : &*it;
}

}  // namespace evobandit
