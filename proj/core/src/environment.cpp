#include "evobandit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace evobandit {

const char* to_string(ReversalKind kind) noexcept {
  switch (kind) {
    case ReversalKind::none: return "none";
    case ReversalKind::fixed: return "fixed";
    case ReversalKind::gaussian: return "gaussian";
    case ReversalKind::uniform: return "uniform";
  }
  return "none";
}

ReversalKind reversal_kind_from_string(std::string_view name) {
  if (name == "none") return ReversalKind::none;
  if (name == "fixed") return ReversalKind::fixed;
  if (name == "gaussian") return ReversalKind::gaussian;
  if (name == "uniform") return ReversalKind::uniform;
  throw std::invalid_argument("reversal_kind must be one of none/fixed/gaussian/uniform, got '" +
                              std::string(name) + "'");
}

void EnvironmentSpec::validate() const {
  std::ostringstream err;
  if (n_trials <= 0) {
    err << "n_trials must be positive, got " << n_trials;
  } else if (n_periods <= 0 || period_length <= 0) {
    err << "n_periods and period_length must be positive, got " << n_periods
        << " and " << period_length;
  } else if (n_periods * period_length != n_trials) {
    err << "n_periods * period_length must equal n_trials: " << n_periods
        << " * " << period_length << " != " << n_trials;
  } else if (p_reward[0] < 0.0 || p_reward[0] > 1.0 || p_reward[1] < 0.0 ||
             p_reward[1] > 1.0) {
    err << "p_reward entries must lie in [0,1], got (" << p_reward[0] << ", "
        << p_reward[1] << ")";
  } else if (p_reward[0] == p_reward[1]) {
    err << "p_reward entries must be distinct, got " << p_reward[0] << " twice";
  } else if (reversal_kind != ReversalKind::none && n_periods != 1) {
    err << "reversal_kind " << to_string(reversal_kind)
        << " requires a single learning period, got n_periods = " << n_periods;
  } else if (reversal_kind == ReversalKind::none && n_reversals != 0) {
    err << "n_reversals must be 0 when reversal_kind is none, got " << n_reversals;
  } else if (reversal_kind != ReversalKind::none && n_reversals < 1) {
    err << "n_reversals must be at least 1 for reversal_kind "
        << to_string(reversal_kind) << ", got " << n_reversals;
  } else if (reversal_kind == ReversalKind::uniform && n_reversals > n_trials) {
    err << "n_reversals must not exceed n_trials for the uniform kind, got "
        << n_reversals;
  } else if (gaussian_sigma < 0.0) {
    err << "gaussian_sigma must be non-negative, got " << gaussian_sigma;
  } else {
    return;
  }
  throw std::invalid_argument(err.str());
}

ReversalSchedule build_schedule(const EnvironmentSpec& spec, Rng& rng) {
  ReversalSchedule schedule;
  switch (spec.reversal_kind) {
    case ReversalKind::none:
      break;

    case ReversalKind::fixed:
    case ReversalKind::gaussian: {
      if (spec.n_trials % (spec.n_reversals + 1) != 0) {
        std::ostringstream err;
        err << "n_reversals + 1 must divide n_trials for kind "
            << to_string(spec.reversal_kind) << ": " << spec.n_reversals + 1
            << " does not divide " << spec.n_trials;
        throw std::invalid_argument(err.str());
      }
      const int interval = spec.n_trials / (spec.n_reversals + 1);
      schedule.reversal_trials.reserve(static_cast<std::size_t>(spec.n_reversals));
      if (spec.reversal_kind == ReversalKind::fixed) {
        for (int k = 1; k <= spec.n_reversals; ++k) {
          schedule.reversal_trials.push_back(k * interval);
        }
      } else {
        const double sigma =
            spec.gaussian_sigma > 0.0 ? spec.gaussian_sigma : interval / 4.0;
        for (int k = 1; k <= spec.n_reversals; ++k) {
          const auto t = static_cast<int>(
              std::llround(k * interval + rng.normal(0.0, sigma)));
          schedule.reversal_trials.push_back(
              std::clamp(t, 1, spec.n_trials - 1));
        }
        auto& v = schedule.reversal_trials;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
      break;
    }

    case ReversalKind::uniform: {
      const double p =
          static_cast<double>(spec.n_reversals) / static_cast<double>(spec.n_trials);
      for (int t = 1; t < spec.n_trials; ++t) {
        if (rng.bernoulli(p)) schedule.reversal_trials.push_back(t);
      }
      break;
    }
  }
  return schedule;
}

int current_best(const EnvironmentInstance& instance, int trial) {
  const auto& v = instance.schedule.reversal_trials;
  const auto flips =
      std::upper_bound(v.begin(), v.end(), trial) - v.begin();
  const int initial =
      instance.spec.p_reward[0] > instance.spec.p_reward[1] ? 0 : 1;
  return flips % 2 == 0 ? initial : 1 - initial;
}

namespace {

EnvironmentSpec stable(double p_best, double p_worst, int n_periods,
                       int period_length, std::string label) {
  EnvironmentSpec spec;
  spec.p_reward = {p_best, p_worst};
  spec.n_trials = n_periods * period_length;
  spec.n_periods = n_periods;
  spec.period_length = period_length;
  spec.reversal_kind = ReversalKind::none;
  spec.n_reversals = 0;
  spec.label = std::move(label);
  return spec;
}

EnvironmentSpec volatile_env(ReversalKind kind, int n_reversals, std::string label) {
  EnvironmentSpec spec;
  spec.p_reward = {0.75, 0.25};
  spec.n_trials = 160;
  spec.n_periods = 1;
  spec.period_length = 160;
  spec.reversal_kind = kind;
  spec.n_reversals = n_reversals;
  spec.label = std::move(label);
  return spec;
}

}  // namespace

std::vector<EnvironmentSpec> stable_catalog() {
  return {
      stable(0.95, 0.05, 8, 20, "easy"),
      stable(0.75, 0.25, 8, 20, "baseline"),
      stable(0.55, 0.45, 8, 20, "hard"),
      stable(0.55, 0.05, 8, 20, "poor"),
      stable(0.95, 0.45, 8, 20, "rich"),
      stable(0.75, 0.25, 32, 5, "short-period"),
      stable(0.75, 0.25, 2, 80, "long-period"),
  };
}

std::vector<EnvironmentSpec> volatile_catalog() {
  std::vector<EnvironmentSpec> specs;
  specs.reserve(9);
  const std::pair<ReversalKind, const char*> kinds[] = {
      {ReversalKind::fixed, "fixed"},
      {ReversalKind::gaussian, "gauss"},
      {ReversalKind::uniform, "uniform"},
  };
  for (const auto& [kind, prefix] : kinds) {
    for (int reversals : {1, 7, 31}) {
      specs.push_back(volatile_env(
          kind, reversals, std::string(prefix) + "-" + std::to_string(reversals)));
    }
  }
  return specs;
}

}  // namespace evobandit
