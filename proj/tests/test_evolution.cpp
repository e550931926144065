#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "evobandit/evolution.hpp"

using namespace evobandit;

namespace {

EnvironmentSpec baseline_env() {
  EnvironmentSpec spec;
  spec.p_reward = {0.75, 0.25};
  spec.label = "baseline";
  return spec;
}

EnvironmentSpec easy_env() {
  EnvironmentSpec spec;
  spec.p_reward = {0.95, 0.05};
  spec.label = "easy";
  return spec;
}

std::multiset<double> phi_multiset(const Population& population) {
  std::multiset<double> values;
  for (const auto& g : population.members) values.insert(g.phi);
  return values;
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("random and frozen agents sit at chance accuracy") {
  const std::vector<EnvironmentSpec> envs{baseline_env()};
  Rng root(2024);

  SUBCASE("beta = 0, phi = 0") {
    const Genome agent = Genome::clamped(0.5, 0.5, 0.0, 0.5, 0.0);
    double sum = 0.0;
    const int runs = 10'000;
    for (int i = 0; i < runs; ++i) {
      Rng stream = root.child(1, i);
      sum += evaluate_fitness(agent, envs, stream);
    }
    CHECK(std::fabs(sum / runs - 0.5) <= 0.02);
  }
  SUBCASE("zero learning rates never move the Q-values") {
    const Genome agent = Genome::clamped(0.0, 0.0, 20.0, 0.0, 0.0);
    double sum = 0.0;
    const int runs = 10'000;
    for (int i = 0; i < runs; ++i) {
      Rng stream = root.child(2, i);
      sum += evaluate_fitness(agent, envs, stream);
    }
    CHECK(std::fabs(sum / runs - 0.5) <= 0.02);
  }
}

TEST_CASE("a strong learner beats 0.85 on the easy task") {
  const std::vector<EnvironmentSpec> envs{easy_env()};
  const Genome agent = Genome::clamped(0.5, 0.5, 20.0, 0.0, 0.0);
  Rng root(2025);
  double sum = 0.0;
  const int runs = 10'000;
  for (int i = 0; i < runs; ++i) {
    Rng stream = root.child(3, i);
    sum += evaluate_fitness(agent, envs, stream);
  }
  CHECK(sum / runs > 0.85);
}

TEST_CASE("multi-environment fitness is the sequential mean") {
  const EnvironmentSpec env = baseline_env();
  const std::vector<EnvironmentSpec> twice{env, env};
  const Genome agent = Genome::clamped(0.3, 0.2, 5.0, 0.1, 1.0);
  Rng root(99);

  Rng joint = root.child(4);
  const double mean = evaluate_fitness(agent, twice, joint);

  Rng replay = root.child(4);
  const double first = run_episode(agent, env, replay);
  const double second = run_episode(agent, env, replay);
  CHECK(mean == (first + second) / 2.0);
}

TEST_CASE("episodes reset values at period boundaries") {
  // A fresh state means the first trial of every period carries a unit
  // prediction error, whatever was learned before.
  EnvironmentSpec env = baseline_env();
  env.p_reward = {1.0, 0.0001};  // distinct, near-deterministic
  const Genome agent = Genome::clamped(1.0, 1.0, 20.0, 0.5, 0.0);
  Rng rng(7);
  std::vector<TrialRecord> trials;
  run_episode(agent, env, rng, &trials);
  REQUIRE(trials.size() == 160);
  for (const auto& record : trials) {
    if (record.trial_index % env.period_length == 0) {
      CHECK(std::fabs(record.prediction_error) == 1.0);
    }
    CHECK(record.prediction_error >= -2.0);
    CHECK(record.prediction_error <= 2.0);
  }
}

TEST_CASE("selection culls the bottom twentieth and doubles the top") {
  SUBCASE("n = 1000 with distinct fitness") {
    Population population;
    population.members.resize(1000);
    for (int i = 0; i < 1000; ++i) {
      population.members[static_cast<std::size_t>(i)].phi =
          kPhiRange.clamp(-20.0 + 0.04 * i);
    }
    std::vector<FitnessRecord> fitness;
    for (int i = 0; i < 1000; ++i) {
      fitness.push_back({i, static_cast<double>(i) / 1000.0});
    }
    Rng rng(1);
    const Population next = select_and_reproduce(fitness, population, rng);
    REQUIRE(next.size() == 1000);

    std::map<double, int> counts;
    for (const auto& g : next.members) ++counts[g.phi];
    int doubled = 0, absent = 0;
    for (int i = 0; i < 1000; ++i) {
      const double key = kPhiRange.clamp(-20.0 + 0.04 * i);
      const int count = counts.count(key) ? counts[key] : 0;
      if (i < 50) {
        CHECK(count == 0);
        ++absent;
      } else if (i >= 950) {
        CHECK(count == 2);
        ++doubled;
      } else {
        CHECK(count == 1);
      }
    }
    CHECK(absent == 50);
    CHECK(doubled == 50);
  }

  SUBCASE("n = 20 small instance") {
    Population population;
    population.members.resize(20);
    for (int i = 0; i < 20; ++i) {
      population.members[static_cast<std::size_t>(i)].beta = i;  // marker
    }
    std::vector<FitnessRecord> fitness;
    for (int i = 0; i < 20; ++i) fitness.push_back({i, (i + 1) / 20.0});
    Rng rng(2);
    const Population next = select_and_reproduce(fitness, population, rng);
    REQUIRE(next.size() == 20);
    std::map<double, int> counts;
    for (const auto& g : next.members) ++counts[g.beta];
    CHECK(counts.count(0.0) == 0);   // rank 20 gone
    CHECK(counts[19.0] == 2);        // rank 1 doubled
    for (int i = 1; i < 19; ++i) CHECK(counts[static_cast<double>(i)] == 1);
  }

  SUBCASE("identical fitness keeps the size and swaps exactly one member") {
    Population population;
    population.members.resize(40);
    for (int i = 0; i < 40; ++i) {
      population.members[static_cast<std::size_t>(i)].phi = -20.0 + i;
    }
    std::vector<FitnessRecord> fitness;
    for (int i = 0; i < 40; ++i) fitness.push_back({i, 0.75});
    Rng rng(3);
    const Population next = select_and_reproduce(fitness, population, rng);
    REQUIRE(next.size() == 40);

    std::map<double, int> counts;
    for (const auto& g : next.members) ++counts[g.phi];
    int missing = 0, twice = 0, once = 0;
    for (int i = 0; i < 40; ++i) {
      const int count = counts.count(-20.0 + i) ? counts[-20.0 + i] : 0;
      missing += count == 0;
      twice += count == 2;
      once += count == 1;
    }
    CHECK(missing == 2);
    CHECK(twice == 2);
    CHECK(once == 36);
  }
}

TEST_CASE("population size is invariant under adversarial ties") {
  Rng rng(4);
  for (int n : {20, 40, 100, 200}) {
    for (int round = 0; round < 20; ++round) {
      Population population;
      population.members.resize(static_cast<std::size_t>(n));
      std::vector<FitnessRecord> fitness;
      for (int i = 0; i < n; ++i) {
        // heavy ties: only three distinct fitness levels
        fitness.push_back({i, static_cast<double>(rng.below(3)) / 2.0});
      }
      Rng tie_break = rng.child(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(round));
      CHECK(select_and_reproduce(fitness, population, tie_break).size() == n);
    }
  }
}

TEST_CASE("rank selection is invariant to monotone fitness transforms") {
  Rng rng(5);
  Population population;
  population.members.resize(100);
  for (int i = 0; i < 100; ++i) {
    population.members[static_cast<std::size_t>(i)].tau = i / 100.0;
  }
  std::vector<FitnessRecord> raw;
  for (int i = 0; i < 100; ++i) {
    raw.push_back({i, static_cast<double>(rng.below(10)) / 10.0});  // many ties
  }
  std::vector<FitnessRecord> transformed = raw;
  for (auto& record : transformed) {
    record.accuracy = std::exp(3.0 * record.accuracy + 1.0);  // strictly increasing
  }

  Rng tie_a(777), tie_b(777);
  const Population a = select_and_reproduce(raw, population, tie_a);
  const Population b = select_and_reproduce(transformed, population, tie_b);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.members[static_cast<std::size_t>(i)] == b.members[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("selection rejects invalid inputs") {
  Population population;
  population.members.resize(30);  // not a multiple of 20
  std::vector<FitnessRecord> fitness;
  for (int i = 0; i < 30; ++i) fitness.push_back({i, 0.5});
  Rng rng(6);
  CHECK_THROWS_AS(select_and_reproduce(fitness, population, rng), std::invalid_argument);

  Population ok;
  ok.members.resize(20);
  std::vector<FitnessRecord> partial;
  for (int i = 0; i < 10; ++i) partial.push_back({i, 0.5});
  CHECK_THROWS_AS(select_and_reproduce(partial, ok, rng), std::invalid_argument);
}

TEST_CASE("mutation") {
  SUBCASE("zero-width noise leaves the genome unchanged") {
    MutationTable zero{0.0, 0.0, 0.0, 0.0, 0.0};
    Rng rng(7);
    const Genome g = Genome::clamped(0.3, 0.6, 12.0, 0.2, -4.0);
    CHECK(mutate(g, zero, rng) == g);
  }

  SUBCASE("standard deviations match the mutation table within 1%") {
    // Start mid-range so clamping never bites and the raw noise is visible.
    const Genome center = Genome::clamped(0.5, 0.5, 10.0, 0.5, 0.0);
    const MutationTable table;
    Rng rng(8);
    const int n = 1'000'000;
    long double ss_ap = 0.0L, ss_beta = 0.0L, ss_phi = 0.0L, ss_tau = 0.0L;
    for (int i = 0; i < n; ++i) {
      const Genome m = mutate(center, table, rng);
      const double d_ap = m.alpha_plus - center.alpha_plus;
      const double d_beta = m.beta - center.beta;
      const double d_tau = m.tau - center.tau;
      const double d_phi = m.phi - center.phi;
      ss_ap += d_ap * d_ap;
      ss_beta += d_beta * d_beta;
      ss_tau += d_tau * d_tau;
      ss_phi += d_phi * d_phi;
    }
    CHECK(std::fabs(std::sqrt(static_cast<double>(ss_ap / n)) - 0.05) <= 0.0005);
    CHECK(std::fabs(std::sqrt(static_cast<double>(ss_beta / n)) - 1.0) <= 0.01);
    CHECK(std::fabs(std::sqrt(static_cast<double>(ss_tau / n)) - 0.05) <= 0.0005);
    CHECK(std::fabs(std::sqrt(static_cast<double>(ss_phi / n)) - 2.0) <= 0.02);
  }

  SUBCASE("mutants always stay inside the parameter ranges") {
    MutationTable wild{10.0, 10.0, 200.0, 10.0, 400.0};
    Rng rng(9);
    Genome g;
    for (int i = 0; i < 20'000; ++i) {
      g = mutate(g, wild, rng);
      REQUIRE(g.within_ranges());
    }
  }
}

TEST_CASE("population initialization") {
  Rng rng(10);

  SUBCASE("fixed mode copies the genome") {
    const Genome row4 = Genome::clamped(0.5, 0.25, 10.0, 0.5, 0.0);
    const Population population = init_population(FixedInit{row4}, 1000, rng);
    REQUIRE(population.size() == 1000);
    for (const auto& g : population.members) CHECK(g == row4);
  }

  SUBCASE("all-zero start is exactly zero") {
    const Population population = init_population(FixedInit{Genome{}}, 1000, rng);
    for (const auto& g : population.members) {
      CHECK(g.alpha_plus == 0.0);
      CHECK(g.alpha_minus == 0.0);
      CHECK(g.beta == 0.0);
      CHECK(g.tau == 0.0);
      CHECK(g.phi == 0.0);
    }
  }

  SUBCASE("uniform mode matches the uniform moments") {
    const Population population = init_population(UniformInit{}, 100'000, rng);
    long double sum_phi = 0.0L, sum_ap = 0.0L;
    for (const auto& g : population.members) {
      REQUIRE(g.within_ranges());
      sum_phi += g.phi;
      sum_ap += g.alpha_plus;
    }
    CHECK(std::fabs(static_cast<double>(sum_phi) / 100'000) <= 0.2);
    CHECK(std::fabs(static_cast<double>(sum_ap) / 100'000 - 0.5) <= 0.005);
  }

  SUBCASE("population size must be a positive multiple of 20") {
    CHECK_THROWS_AS(init_population(UniformInit{}, 999, rng), std::invalid_argument);
    CHECK_THROWS_AS(init_population(UniformInit{}, 0, rng), std::invalid_argument);
  }
}

TEST_CASE("step_generation") {
  const std::vector<EnvironmentSpec> envs{baseline_env()};

  SUBCASE("uniform mode never invents new genome values") {
    Rng init_rng = Rng(11).child(stream_tag::init);
    Population population = init_population(UniformInit{}, 100, init_rng);
    StepConfig config;
    config.environments = envs;
    config.mutate = false;

    std::multiset<double> previous = phi_multiset(population);
    const Rng reboot_stream(11);
    for (int gen = 0; gen < 10; ++gen) {
      step_generation(population, config, reboot_stream);
      REQUIRE(population.size() == 100);
      const std::multiset<double> current = phi_multiset(population);
      // every distinct value in the new generation already existed
      for (double value : std::set<double>(current.begin(), current.end())) {
        CHECK(previous.count(value) > 0);
      }
      CHECK(std::set<double>(current.begin(), current.end()).size() <=
            std::set<double>(previous.begin(), previous.end()).size());
      previous = current;
    }
  }

  SUBCASE("fixed mode mutates at most 5% per step") {
    const Genome start = Genome::clamped(0.5, 0.5, 10.0, 0.5, 0.0);
    Rng init_rng = Rng(12).child(stream_tag::init);
    Population population = init_population(FixedInit{start}, 200, init_rng);
    StepConfig config;
    config.environments = envs;
    config.mutate = true;

    const Rng reboot_stream(12);
    const GenerationStats stats = step_generation(population, config, reboot_stream);
    REQUIRE(population.size() == 200);
    int changed = 0;
    for (const auto& g : population.members) changed += !(g == start);
    CHECK(changed <= 10);
    CHECK(changed >= 1);  // ten draws all collapsing to the clamp is absurd

    CHECK(stats.fitness_bottom5_mean <= stats.fitness_mean);
    CHECK(stats.fitness_mean <= stats.fitness_top5_mean);
    CHECK(stats.generation == 0);
    CHECK(population.generation == 1);
  }

  SUBCASE("all_descendants target perturbs everyone") {
    const Genome start = Genome::clamped(0.5, 0.5, 10.0, 0.5, 0.0);
    Rng init_rng = Rng(13).child(stream_tag::init);
    Population population = init_population(FixedInit{start}, 100, init_rng);
    StepConfig config;
    config.environments = envs;
    config.mutate = true;
    config.mutation_target = MutationTarget::all_descendants;

    step_generation(population, config, Rng(13));
    int changed = 0;
    for (const auto& g : population.members) changed += !(g == start);
    CHECK(changed >= 95);  // a few can land back on a clamped boundary
  }
}

}  // TEST_SUITE
