#include "evobandit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "evobandit/parallel.hpp"

namespace evobandit {

double run_episode(const Genome& genome, const EnvironmentSpec& env, Rng& rng,
                   std::vector<TrialRecord>* trials,
                   std::atomic<std::uint32_t>* correct_counts) {
  const ReversalSchedule schedule = build_schedule(env, rng);
  const auto& reversals = schedule.reversal_trials;

  AgentState state = reset_state();
  const int initial_best = env.p_reward[0] > env.p_reward[1] ? 0 : 1;
  int swapped = 0;  // parity of reversals so far
  std::size_t next_reversal = 0;
  int n_correct = 0;

  for (int t = 0; t < env.n_trials; ++t) {
    // A period boundary presents the options anew: learned values and choice
    // history do not carry over.
    if (t > 0 && env.n_periods > 1 && t % env.period_length == 0) {
      state = reset_state();
    }
    if (next_reversal < reversals.size() && reversals[next_reversal] == t) {
      swapped ^= 1;
      ++next_reversal;
    }

    const int chosen = rng.bernoulli(choice_probability(genome, state)) ? 0 : 1;
    update_choice_trace(state, chosen, genome);

    const double p_chosen = env.p_reward[static_cast<std::size_t>(chosen ^ swapped)];
    const double reward = sample_reward(p_chosen, rng);
    const double pe = reward - state.q[static_cast<std::size_t>(chosen)];
    update_q(state, chosen, reward, genome);

    const bool correct = chosen == (initial_best ^ swapped);
    n_correct += correct;
    if (correct && correct_counts) {
      correct_counts[t].fetch_add(1, std::memory_order_relaxed);
    }
    if (trials) trials->push_back({t, chosen, reward, pe, correct});
  }
  return static_cast<double>(n_correct) / static_cast<double>(env.n_trials);
}

double evaluate_fitness(const Genome& genome,
                        std::span<const EnvironmentSpec> envs, Rng& rng,
                        std::span<std::vector<std::atomic<std::uint32_t>>> curve_counts) {
  if (envs.empty()) {
    throw std::invalid_argument("evaluate_fitness requires at least one environment");
  }
  double accuracy_sum = 0.0;
  for (std::size_t e = 0; e < envs.size(); ++e) {
    std::atomic<std::uint32_t>* counts =
        e < curve_counts.size() ? curve_counts[e].data() : nullptr;
    accuracy_sum += run_episode(genome, envs[e], rng, nullptr, counts);
  }
  return accuracy_sum / static_cast<double>(envs.size());
}

Population init_population(const InitMode& mode, int n_agents, Rng& rng) {
  if (n_agents <= 0 || n_agents % 20 != 0) {
    throw std::invalid_argument("n_agents must be a positive multiple of 20, got " +
                                std::to_string(n_agents));
  }
  Population population;
  population.generation = 0;
  population.members.reserve(static_cast<std::size_t>(n_agents));
  if (const auto* fixed = std::get_if<FixedInit>(&mode)) {
    Genome genome = fixed->genome;
    genome.clamp();
    population.members.assign(static_cast<std::size_t>(n_agents), genome);
  } else {
    for (int i = 0; i < n_agents; ++i) {
      population.members.push_back(uniform_genome(rng));
    }
  }
  return population;
}

Population select_and_reproduce(const std::vector<FitnessRecord>& fitness,
                                const Population& population, Rng& rng) {
  const int n = population.size();
  if (n % 20 != 0 || n == 0) {
    throw std::invalid_argument("population size must be a positive multiple of 20, got " +
                                std::to_string(n));
  }
  if (static_cast<int>(fitness.size()) != n) {
    throw std::invalid_argument("fitness must cover every member: got " +
                                std::to_string(fitness.size()) + " records for " +
                                std::to_string(n) + " members");
  }

  std::vector<double> accuracy(static_cast<std::size_t>(n),
                               std::numeric_limits<double>::quiet_NaN());
  for (const auto& record : fitness) {
    if (record.agent < 0 || record.agent >= n) {
      throw std::invalid_argument("fitness record for unknown agent " +
                                  std::to_string(record.agent));
    }
    accuracy[static_cast<std::size_t>(record.agent)] = record.accuracy;
  }
  for (double a : accuracy) {
    if (std::isnan(a)) {
      throw std::invalid_argument("fitness must cover every member");
    }
  }

  // Shuffle first, then stable-sort by fitness: equal-fitness agents end up
  // in seeded random order.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<int>(order));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return accuracy[static_cast<std::size_t>(a)] > accuracy[static_cast<std::size_t>(b)];
  });

  const int bonus = n / 20;  // top 5% leave two descendants, bottom 5% none
  Population next;
  next.generation = population.generation + 1;
  next.members.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n - bonus; ++r) {
    next.members.push_back(population.members[static_cast<std::size_t>(order[r])]);
  }
  for (int r = 0; r < bonus; ++r) {
    next.members.push_back(population.members[static_cast<std::size_t>(order[r])]);
  }
  return next;
}

Genome mutate(const Genome& genome, const MutationTable& table, Rng& rng) {
  return perturbed(genome, {rng.normal(0.0, table.alpha_plus),
                            rng.normal(0.0, table.alpha_minus),
                            rng.normal(0.0, table.beta),
                            rng.normal(0.0, table.tau),
                            rng.normal(0.0, table.phi)});
}

namespace {

GenerationStats population_stats(int generation, const std::vector<double>& accuracy,
                                 const Population& population) {
  const auto n = accuracy.size();
  const std::size_t slice = n / 20;

  // Long-double accumulation keeps the bottom5 <= mean <= top5 ordering exact
  // even when every fitness value is identical.
  long double sum = 0.0L;
  for (double a : accuracy) sum += a;

  std::vector<double> sorted = accuracy;
  std::sort(sorted.begin(), sorted.end());
  long double bottom = 0.0L, top = 0.0L;
  for (std::size_t i = 0; i < slice; ++i) bottom += sorted[i];
  for (std::size_t i = n - slice; i < n; ++i) top += sorted[i];

  long double ap = 0.0L, am = 0.0L, b = 0.0L, tau = 0.0L, phi = 0.0L;
  for (const Genome& g : population.members) {
    ap += g.alpha_plus;
    am += g.alpha_minus;
    b += g.beta;
    tau += g.tau;
    phi += g.phi;
  }

  GenerationStats stats;
  stats.generation = generation;
  stats.fitness_mean = static_cast<double>(sum / n);
  stats.fitness_top5_mean = static_cast<double>(top / slice);
  stats.fitness_bottom5_mean = static_cast<double>(bottom / slice);
  stats.mean_alpha_plus = static_cast<double>(ap / n);
  stats.mean_alpha_minus = static_cast<double>(am / n);
  stats.mean_beta = static_cast<double>(b / n);
  stats.mean_tau = static_cast<double>(tau / n);
  stats.mean_phi = static_cast<double>(phi / n);
  return stats;
}

}  // namespace

GenerationStats step_generation(Population& population, const StepConfig& config,
                                const Rng& reboot_stream,
                                std::span<std::vector<std::atomic<std::uint32_t>>> curve_counts) {
  const int n = population.size();
  const int generation = population.generation;

  std::vector<double> accuracy(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), config.threads, [&](std::size_t i) {
    Rng stream = reboot_stream.child(stream_tag::fitness,
                                     static_cast<std::uint64_t>(generation), i);
    accuracy[i] = evaluate_fitness(population.members[i], config.environments,
                                   stream, curve_counts);
  });

  const GenerationStats stats = population_stats(generation, accuracy, population);

  std::vector<FitnessRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    records.push_back({i, accuracy[static_cast<std::size_t>(i)]});
  }
  Rng selection_stream = reboot_stream.child(stream_tag::selection,
                                             static_cast<std::uint64_t>(generation));
  Population next = select_and_reproduce(records, population, selection_stream);

  if (config.mutate) {
    Rng mutation_stream = reboot_stream.child(stream_tag::mutation,
                                              static_cast<std::uint64_t>(generation));
    if (config.mutation_target == MutationTarget::all_descendants) {
      for (Genome& g : next.members) {
        g = mutate(g, config.mutation_table, mutation_stream);
      }
    } else {
      // Uniform 5% subset of the survivors, drawn without replacement and
      // applied in index order.
      const int k = n / 20;
      std::vector<int> indices(static_cast<std::size_t>(n));
      std::iota(indices.begin(), indices.end(), 0);
      for (int i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       mutation_stream.below(static_cast<std::uint64_t>(n - i));
        std::swap(indices[static_cast<std::size_t>(i)], indices[j]);
      }
      indices.resize(static_cast<std::size_t>(k));
      std::sort(indices.begin(), indices.end());
      for (int idx : indices) {
        Genome& g = next.members[static_cast<std::size_t>(idx)];
        g = mutate(g, config.mutation_table, mutation_stream);
      }
    }
  }

  population = std::move(next);
  return stats;
}

}  // namespace evobandit
