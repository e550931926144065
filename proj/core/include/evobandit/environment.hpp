#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "evobandit/rng.hpp"

namespace evobandit {

enum class ReversalKind { none, fixed, gaussian, uniform };

const char* to_string(ReversalKind kind) noexcept;
ReversalKind reversal_kind_from_string(std::string_view name);

// One bandit task variant: reward probabilities, learning-period structure
// and reversal schedule parameters.
struct EnvironmentSpec {
  std::array<double, 2> p_reward{0.75, 0.25};  // per-option P(reward = +1)
  int n_trials = 160;
  int n_periods = 8;
  int period_length = 20;
  ReversalKind reversal_kind = ReversalKind::none;
  int n_reversals = 0;
  // Standard deviation of the gaussian jitter; 0 selects the default of a
  // quarter of the inter-reversal interval.
  double gaussian_sigma = 0.0;
  std::string label;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// 0-based trial indices at which the two options' reward probabilities swap.
// Strictly increasing, all within [1, n_trials - 1].
struct ReversalSchedule {
  std::vector<int> reversal_trials;
};

struct EnvironmentInstance {
  EnvironmentSpec spec;
  ReversalSchedule schedule;
};

// Realizes a reversal schedule. The fixed kind is deterministic (reversals at
// multiples of n_trials / (n_reversals + 1)); gaussian jitters those times;
// uniform includes each trial independently with p = n_reversals / n_trials.
ReversalSchedule build_schedule(const EnvironmentSpec& spec, Rng& rng);

// +1 with probability p, -1 otherwise.
inline double sample_reward(double p, Rng& rng) noexcept {
  return rng.bernoulli(p) ? 1.0 : -1.0;
}

// The option whose reward probability is higher after applying all reversals
// at indices <= trial.
int current_best(const EnvironmentInstance& instance, int trial);

// The seven stable task variants: three difficulties, two extra richness
// levels, and two extra learning-period structures around the 75/25 baseline.
std::vector<EnvironmentSpec> stable_catalog();

// The nine volatile task variants: {fixed, gaussian, uniform} schedules
// crossed with {1, 7, 31} reversals at the baseline difficulty.
std::vector<EnvironmentSpec> volatile_catalog();

}  // namespace evobandit
