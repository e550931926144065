#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "evobandit/agent.hpp"
#include "evobandit/environment.hpp"
#include "evobandit/genome.hpp"
#include "evobandit/rng.hpp"

namespace evobandit {

// Standard deviations of the zero-mean gaussian mutation noise, one per
// parameter: 5% of each parameter's range.
struct MutationTable {
  double alpha_plus = 0.05;
  double alpha_minus = 0.05;
  double beta = 1.0;
  double tau = 0.05;
  double phi = 2.0;

  bool operator==(const MutationTable&) const = default;
};

// All agents start from one genome and variability comes from mutations.
struct FixedInit {
  Genome genome;
};

// Parameters drawn uniformly from their ranges; no mutations afterwards.
struct UniformInit {};

using InitMode = std::variant<FixedInit, UniformInit>;

inline bool mutation_enabled(const InitMode& mode) noexcept {
  return std::holds_alternative<FixedInit>(mode);
}

// Who receives mutations after reproduction. The default mutates a random 5%
// of the surviving agents; the alternative mutates every descendant.
enum class MutationTarget { five_percent_of_survivors, all_descendants };

struct Population {
  std::vector<Genome> members;
  int generation = 0;

  int size() const noexcept { return static_cast<int>(members.size()); }
};

struct FitnessRecord {
  int agent;
  double accuracy;  // fraction of trials on the currently-best option
};

// Per-generation telemetry, captured after fitness evaluation and before
// selection.
struct GenerationStats {
  int generation = 0;
  double fitness_mean = 0.0;
  double fitness_top5_mean = 0.0;
  double fitness_bottom5_mean = 0.0;
  double mean_alpha_plus = 0.0;
  double mean_alpha_minus = 0.0;
  double mean_beta = 0.0;
  double mean_tau = 0.0;
  double mean_phi = 0.0;

  bool operator==(const GenerationStats&) const = default;
};

// Plays one full task run: builds the schedule, then per trial choose ->
// trace update -> reward -> Q-update, with Q/C reset at period boundaries.
// Returns the fraction of trials on the currently-best option. Optionally
// records per-trial details and/or increments per-trial correct counters.
double run_episode(const Genome& genome, const EnvironmentSpec& env, Rng& rng,
                   std::vector<TrialRecord>* trials = nullptr,
                   std::atomic<std::uint32_t>* correct_counts = nullptr);

// Unweighted mean accuracy across the given environments, one run each.
// curve_counts, when given, must hold one counter array of length n_trials
// per environment.
double evaluate_fitness(const Genome& genome,
                        std::span<const EnvironmentSpec> envs, Rng& rng,
                        std::span<std::vector<std::atomic<std::uint32_t>>> curve_counts = {});

Population init_population(const InitMode& mode, int n_agents, Rng& rng);

// Rank-based selection: bottom 5% leave no descendants, top 5% leave two,
// everyone else one. Ties are broken by a seeded uniform shuffle ahead of a
// stable sort, so the outcome depends only on ranks and the tie-break stream.
Population select_and_reproduce(const std::vector<FitnessRecord>& fitness,
                                const Population& population, Rng& rng);

// Independent gaussian perturbation of each parameter, then clamping.
Genome mutate(const Genome& genome, const MutationTable& table, Rng& rng);

struct StepConfig {
  std::span<const EnvironmentSpec> environments;
  MutationTable mutation_table{};
  bool mutate = false;  // fixed-init mode only
  MutationTarget mutation_target = MutationTarget::five_percent_of_survivors;
  int threads = 1;
};

// One generation: parallel fitness evaluation, telemetry, selection, and (in
// fixed-init mode) mutation. Per-agent streams derive from
// (reboot_stream, generation, agent index), so results do not depend on the
// thread count.
GenerationStats step_generation(Population& population, const StepConfig& config,
                                const Rng& reboot_stream,
                                std::span<std::vector<std::atomic<std::uint32_t>>> curve_counts = {});

}  // namespace evobandit
