#pragma once

#include <algorithm>
#include <array>

#include "evobandit/rng.hpp"

namespace evobandit {

struct ParamRange {
  double lo;
  double hi;

  constexpr double width() const noexcept { return hi - lo; }
  constexpr double clamp(double v) const noexcept {
    return v < lo ? lo : (v > hi ? hi : v);
  }
  constexpr bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

inline constexpr ParamRange kAlphaRange{0.0, 1.0};  // both learning rates
inline constexpr ParamRange kBetaRange{0.0, 20.0};
inline constexpr ParamRange kTauRange{0.0, 1.0};
inline constexpr ParamRange kPhiRange{-20.0, 20.0};

// The five evolvable parameters of one agent. Values are kept inside their
// closed ranges at all times: construction and mutation clamp.
struct Genome {
  double alpha_plus = 0.0;   // learning rate for positive prediction errors
  double alpha_minus = 0.0;  // learning rate for negative prediction errors
  double beta = 0.0;         // choice inverse temperature
  double tau = 0.0;          // choice trace learning rate
  double phi = 0.0;          // choice trace weight

  static Genome clamped(double ap, double am, double b, double t, double p) noexcept {
    Genome g{ap, am, b, t, p};
    g.clamp();
    return g;
  }

  void clamp() noexcept {
    alpha_plus = kAlphaRange.clamp(alpha_plus);
    alpha_minus = kAlphaRange.clamp(alpha_minus);
    beta = kBetaRange.clamp(beta);
    tau = kTauRange.clamp(tau);
    phi = kPhiRange.clamp(phi);
  }

  bool within_ranges() const noexcept {
    return kAlphaRange.contains(alpha_plus) && kAlphaRange.contains(alpha_minus) &&
           kBetaRange.contains(beta) && kTauRange.contains(tau) &&
           kPhiRange.contains(phi);
  }

  // Delta-alpha: > 0 is a positivity bias, < 0 a negativity bias.
  double update_bias() const noexcept { return alpha_plus - alpha_minus; }

  bool operator==(const Genome&) const = default;
};

// Each parameter drawn independently and uniformly from its full range.
inline Genome uniform_genome(Rng& rng) noexcept {
  Genome g;
  g.alpha_plus = rng.uniform(kAlphaRange.lo, kAlphaRange.hi);
  g.alpha_minus = rng.uniform(kAlphaRange.lo, kAlphaRange.hi);
  g.beta = rng.uniform(kBetaRange.lo, kBetaRange.hi);
  g.tau = rng.uniform(kTauRange.lo, kTauRange.hi);
  g.phi = rng.uniform(kPhiRange.lo, kPhiRange.hi);
  return g;
}

// Adds the given per-parameter offsets (order: alpha+, alpha-, beta, tau,
// phi) and clamps the result back into range.
inline Genome perturbed(const Genome& g, const std::array<double, 5>& deltas) noexcept {
  return Genome::clamped(g.alpha_plus + deltas[0], g.alpha_minus + deltas[1],
                         g.beta + deltas[2], g.tau + deltas[3], g.phi + deltas[4]);
}

}  // namespace evobandit
