#pragma once

#include <array>
#include <cmath>

#include "evobandit/genome.hpp"
#include "evobandit/rng.hpp"

namespace evobandit {

// Per-option latent variables of one agent during a task run. Q-values track
// past outcomes, C-values track past choice frequency.
struct AgentState {
  std::array<double, 2> q{0.0, 0.0};
  std::array<double, 2> c{0.0, 0.0};

  bool operator==(const AgentState&) const = default;
};

inline AgentState reset_state() noexcept { return AgentState{}; }

struct TrialRecord {
  int trial_index;
  int chosen;
  double reward;
  double prediction_error;
  bool correct;  // chose the currently-higher-expected-reward option
};

// logistic(z) = 1 / (1 + exp(-z)), evaluated so that
// logistic(z) + logistic(-z) == 1 holds exactly in floating point:
// the z >= 0 branch lands in [0.5, 1], where 1 - p is exact (Sterbenz).
inline double logistic(double z) noexcept {
  const double p = 1.0 / (1.0 + std::exp(-std::fabs(z)));
  return z >= 0.0 ? p : 1.0 - p;
}

// Probability of choosing option 0. Values and choice traces enter through a
// single exponent weighted by beta and phi.
inline double choice_probability(const Genome& g, const AgentState& s) noexcept {
  const double z = g.beta * (s.q[0] - s.q[1]) + g.phi * (s.c[0] - s.c[1]);
  return logistic(z);
}

inline int choose(const Genome& g, const AgentState& s, Rng& rng) noexcept {
  return rng.bernoulli(choice_probability(g, s)) ? 0 : 1;
}

// Delta-rule update of the chosen option's Q-value. The learning rate depends
// on the sign of the prediction error; a zero error leaves the state
// untouched. The unchosen option never updates (partial feedback).
inline void update_q(AgentState& s, int chosen, double reward,
                     const Genome& g) noexcept {
  double& q = s.q[static_cast<std::size_t>(chosen)];
  const double pe = reward - q;
  if (pe > 0.0) {
    q += g.alpha_plus * pe;
  } else if (pe < 0.0) {
    q += g.alpha_minus * pe;
  }
}

// Choice-trace update: the chosen option's trace moves toward 1, the
// unchosen option's trace decays toward 0, both at rate tau.
inline void update_choice_trace(AgentState& s, int chosen,
                                const Genome& g) noexcept {
  const auto ci = static_cast<std::size_t>(chosen);
  const auto ui = 1 - ci;
  s.c[ci] += g.tau * (1.0 - s.c[ci]);
  s.c[ui] = (1.0 - g.tau) * s.c[ui];
}

}  // namespace evobandit
