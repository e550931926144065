#include <benchmark/benchmark.h>

#include "evobandit/evolution.hpp"
#include "evobandit/experiment.hpp"

using namespace evobandit;

namespace {

EnvironmentSpec baseline_env() {
  EnvironmentSpec env;
  env.p_reward = {0.75, 0.25};
  env.label = "baseline";
  return env;
}

void BM_RngDraws(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_double());
  }
}
BENCHMARK(BM_RngDraws);

void BM_ChoiceProbability(benchmark::State& state) {
  const Genome g = Genome::clamped(0.3, 0.2, 7.0, 0.4, -3.0);
  AgentState s;
  s.q = {0.4, -0.2};
  s.c = {0.7, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.q[0]);
    benchmark::DoNotOptimize(choice_probability(g, s));
  }
}
BENCHMARK(BM_ChoiceProbability);

void BM_EpisodeBaseline(benchmark::State& state) {
  const EnvironmentSpec env = baseline_env();
  const Genome g = Genome::clamped(0.4, 0.3, 8.0, 0.2, 1.0);
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(g, env, rng));
  }
  state.SetItemsProcessed(state.iterations() * env.n_trials);
}
BENCHMARK(BM_EpisodeBaseline);

void BM_EpisodeUniform31(benchmark::State& state) {
  EnvironmentSpec env;
  env.p_reward = {0.75, 0.25};
  env.n_periods = 1;
  env.period_length = 160;
  env.reversal_kind = ReversalKind::uniform;
  env.n_reversals = 31;
  const Genome g = Genome::clamped(0.4, 0.3, 8.0, 0.2, 1.0);
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(g, env, rng));
  }
  state.SetItemsProcessed(state.iterations() * env.n_trials);
}
BENCHMARK(BM_EpisodeUniform31);

void BM_StepGeneration(benchmark::State& state) {
  const auto n_agents = static_cast<int>(state.range(0));
  const std::vector<EnvironmentSpec> envs{baseline_env()};
  const Rng reboot_stream(4);
  Rng init_stream = reboot_stream.child(stream_tag::init);
  Population population = init_population(UniformInit{}, n_agents, init_stream);
  StepConfig config;
  config.environments = envs;
  config.threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_generation(population, config, reboot_stream));
  }
  state.SetItemsProcessed(state.iterations() * n_agents * 160);
}
BENCHMARK(BM_StepGeneration)->Args({1000, 1})->Args({1000, 2});

void BM_Reboot(benchmark::State& state) {
  ScenarioConfig config;
  config.name = "baseline";
  config.environments = {baseline_env()};
  config.n_agents = 200;
  config.n_generations = 20;
  config.n_reboots = 1;
  config.master_seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_reboot(config, 0, 1));
  }
}
BENCHMARK(BM_Reboot);

}  // namespace

BENCHMARK_MAIN();
