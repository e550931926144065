#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evobandit/experiment.hpp"

namespace evobandit {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (modified Lentz). Absolute accuracy well below 1e-8 over the
// parameter region used by the t-test.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value of a t statistic with df degrees of freedom,
// p = I_{df/(df+t^2)}(df/2, 1/2). Infinite t gives 0.
double student_t_two_sided_p(double t, double df);

struct TTestResult {
  double mean = 0.0;
  double sem = 0.0;  // sample sd (n-1 denominator) / sqrt(n)
  double t = 0.0;
  int df = 0;
  double p = 1.0;  // two-sided
};

// One-sample t-test against zero. Degenerate samples (sem == 0) follow the
// convention p = 0 when the mean is nonzero and p = 1 when it is zero.
TTestResult one_sample_t(std::span<const double> values);

// Percentage of strictly positive entries.
double bias_prevalence(std::span<const double> values);

enum class Dispersion { sem, sd };

// Scenario summary: prevalence and t-tests of the final-generation update
// bias and choice-trace weight across reboots.
struct SummaryRow {
  std::string scenario;
  double pct_positivity = 0.0;     // % of reboots with final delta-alpha > 0
  double pct_perseveration = 0.0;  // % of reboots with final phi > 0
  double mean_dalpha = 0.0;
  double sem_dalpha = 0.0;
  double t_dalpha = 0.0;
  double p_dalpha = 1.0;
  double mean_phi = 0.0;
  double sem_phi = 0.0;
  double t_phi = 0.0;
  double p_phi = 1.0;
};

SummaryRow summarize_scenario(std::span<const RebootResult> results,
                              std::string_view label,
                              Dispersion dispersion = Dispersion::sem);

// Final-generation mean correct-choice rate per trial, averaged across agents
// and reboots, for the environment at env_index. Requires curve recording.
std::vector<double> learning_curve(std::span<const RebootResult> results,
                                   std::size_t env_index);

}  // namespace evobandit
