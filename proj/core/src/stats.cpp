#include "evobandit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evobandit {

namespace {

// Continued fraction for the incomplete beta function, modified Lentz
// iteration. Converges quickly for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iterations = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= max_iterations; ++m) {
    const int m2 = 2 * m;
    double coeff = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + coeff * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + coeff / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;

    coeff = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + coeff * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + coeff / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("regularized_incomplete_beta requires a > 0 and b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  const double ln_prefactor = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                              a * std::log(x) + b * std::log1p(-x);
  const double prefactor = std::exp(ln_prefactor);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return prefactor * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - prefactor * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (df <= 0.0) {
    throw std::invalid_argument("student_t_two_sided_p requires df > 0");
  }
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

TTestResult one_sample_t(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw std::invalid_argument("one_sample_t requires at least 2 values, got " +
                                std::to_string(n));
  }

  long double sum = 0.0L;
  for (double v : values) sum += v;
  const double mean = static_cast<double>(sum / static_cast<long double>(n));

  long double ss = 0.0L;
  for (double v : values) {
    const long double d = static_cast<long double>(v) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(static_cast<double>(ss / static_cast<long double>(n - 1)));
  const double sem = sd / std::sqrt(static_cast<double>(n));

  TTestResult result;
  result.mean = mean;
  result.sem = sem;
  result.df = static_cast<int>(n) - 1;
  if (sem == 0.0) {
    if (mean == 0.0) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }
  result.t = mean / sem;
  result.p = student_t_two_sided_p(result.t, static_cast<double>(result.df));
  return result;
}

double bias_prevalence(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("bias_prevalence requires a non-empty sample");
  }
  std::size_t positive = 0;
  for (double v : values) positive += v > 0.0;
  return 100.0 * static_cast<double>(positive) / static_cast<double>(values.size());
}

SummaryRow summarize_scenario(std::span<const RebootResult> results,
                              std::string_view label, Dispersion dispersion) {
  if (results.size() < 2) {
    throw std::invalid_argument("summarize_scenario requires at least 2 reboots, got " +
                                std::to_string(results.size()));
  }
  std::vector<double> dalpha, phi;
  dalpha.reserve(results.size());
  phi.reserve(results.size());
  for (const auto& reboot : results) {
    dalpha.push_back(reboot.final_delta_alpha);
    phi.push_back(reboot.final_phi);
  }

  const TTestResult t_dalpha = one_sample_t(dalpha);
  const TTestResult t_phi = one_sample_t(phi);
  const double scale = dispersion == Dispersion::sd
                           ? std::sqrt(static_cast<double>(results.size()))
                           : 1.0;

  SummaryRow row;
  row.scenario = std::string(label);
  row.pct_positivity = bias_prevalence(dalpha);
  row.pct_perseveration = bias_prevalence(phi);
  row.mean_dalpha = t_dalpha.mean;
  row.sem_dalpha = t_dalpha.sem * scale;
  row.t_dalpha = t_dalpha.t;
  row.p_dalpha = t_dalpha.p;
  row.mean_phi = t_phi.mean;
  row.sem_phi = t_phi.sem * scale;
  row.t_phi = t_phi.t;
  row.p_phi = t_phi.p;
  return row;
}

std::vector<double> learning_curve(std::span<const RebootResult> results,
                                   std::size_t env_index) {
  if (results.empty()) {
    throw std::invalid_argument("learning_curve requires at least one reboot");
  }
  std::size_t n_trials = 0;
  long double total_agents = 0.0L;
  for (const auto& reboot : results) {
    if (env_index >= reboot.correct_counts.size() || reboot.curve_agents <= 0) {
      throw std::invalid_argument(
          "learning_curve requires trial-level recording (record_curves) for "
          "environment index " + std::to_string(env_index));
    }
    n_trials = std::max(n_trials, reboot.correct_counts[env_index].size());
    total_agents += reboot.curve_agents;
  }

  std::vector<double> curve(n_trials, 0.0);
  for (std::size_t t = 0; t < n_trials; ++t) {
    long double correct = 0.0L;
    for (const auto& reboot : results) {
      correct += reboot.correct_counts[env_index][t];
    }
    curve[t] = static_cast<double>(correct / total_agents);
  }
  return curve;
}

}  // namespace evobandit
