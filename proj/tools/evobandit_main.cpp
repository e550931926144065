// Command-line front end: scenario selection, execution, and output emission.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "evobandit/io.hpp"
#include "evobandit/plot.hpp"
#include "evobandit/stats.hpp"
#include "evobandit/version.hpp"

namespace {

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("EVOBANDIT_OUT")) {
    return std::filesystem::path(env);
  }
  return std::filesystem::path("out");
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int run_command(const std::optional<std::string>& config_file,
                const evobandit::ConfigOverrides& overrides,
                const std::filesystem::path& out_dir, const std::string& format,
                const std::string& dispersion, int threads, bool no_plots,
                bool quiet) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();

  std::optional<std::filesystem::path> file;
  if (config_file) file = *config_file;
  const evobandit::ScenarioConfig config = evobandit::parse_config(file, overrides);
  const evobandit::OutputFormat out_format = evobandit::output_format_from_string(format);

  evobandit::Dispersion disp = evobandit::Dispersion::sem;
  if (dispersion == "sd") {
    disp = evobandit::Dispersion::sd;
  } else if (dispersion != "sem") {
    throw std::invalid_argument("dispersion must be sem or sd, got '" + dispersion + "'");
  }

  if (!quiet) {
    std::cout << "scenario " << config.name << ": " << config.n_reboots
              << " reboots x " << config.n_generations << " generations x "
              << config.n_agents << " agents, seed " << config.master_seed
              << ", " << threads << " thread(s)\n";
  }

  evobandit::ScenarioRun run;
  run.config = config;
  run.reboots = evobandit::run_scenario(config, threads);

  const evobandit::SummaryRow summary =
      evobandit::summarize_scenario(run.reboots, config.name, disp);

  const double elapsed =
      std::chrono::duration<double>(clock::now() - started).count();
  const std::vector<evobandit::ScenarioRun> runs{std::move(run)};
  const std::vector<evobandit::SummaryRow> summaries{summary};
  const evobandit::RunManifest manifest =
      evobandit::emit_outputs(runs, summaries, out_dir, out_format, elapsed);

  if (!quiet) {
    std::cout << "dalpha > 0 in " << summary.pct_positivity << "% of reboots, mean "
              << evobandit::format_sig6(summary.mean_dalpha) << "; phi > 0 in "
              << summary.pct_perseveration << "%, mean "
              << evobandit::format_sig6(summary.mean_phi) << "\n";
    for (const auto& output : manifest.outputs) {
      std::cout << "wrote " << (out_dir / output.path).string() << " (" << output.rows
                << " rows)\n";
    }
    std::cout << "wrote " << (out_dir / "manifest.json").string() << "\n";
  }

  if (!no_plots && out_format == evobandit::OutputFormat::csv) {
    for (const auto& path : evobandit::emit_plots(out_dir)) {
      if (!quiet) std::cout << "wrote " << path.string() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evobandit: evolutionary simulation of learning biases in two-armed bandit tasks"};
  app.set_version_flag("--version", evobandit::kVersion);
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a scenario and write outputs");
  std::string scenario, config_file, format = "csv", mutation_target, dispersion = "sem";
  std::string out_dir = default_out_dir().string();
  std::uint64_t seed = 0;
  int reboots = 0, agents = 0, generations = 0;
  int threads = default_threads();
  bool no_curves = false, no_plots = false, quiet = false;
  bool seed_given = false;

  run->add_option("--scenario", scenario, "Scenario name (see `list`)");
  run->add_option("--config", config_file, "JSON config file; flags override its values");
  run->add_option("--out", out_dir, "Output directory (default $EVOBANDIT_OUT or ./out)");
  run->add_option("--seed", seed, "Master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  run->add_option("--reboots", reboots, "Number of independent reboots");
  run->add_option("--agents", agents, "Population size (multiple of 20)");
  run->add_option("--generations", generations, "Generations per reboot");
  run->add_option("--threads", threads, "Worker threads; 1 = reference mode");
  run->add_option("--format", format, "Output format: csv or json");
  run->add_option("--mutation-target", mutation_target,
                  "five_percent_of_survivors or all_descendants");
  run->add_option("--dispersion", dispersion, "Summary spread: sem or sd");
  run->add_flag("--no-curves", no_curves, "Skip per-trial learning-curve recording");
  run->add_flag("--no-plots", no_plots, "Skip SVG plot generation");
  run->add_flag("--quiet", quiet, "Suppress progress output");

  // list
  auto* list = app.add_subcommand("list", "List built-in scenario names");

  // plot
  auto* plot = app.add_subcommand("plot", "Render SVG plots from an output directory");
  std::string plot_dir = default_out_dir().string();
  plot->add_option("--dir", plot_dir, "Directory containing telemetry.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      evobandit::ConfigOverrides overrides;
      if (!scenario.empty()) overrides.scenario = scenario;
      if (seed_given) overrides.master_seed = seed;
      if (reboots > 0) overrides.n_reboots = reboots;
      if (agents != 0) overrides.n_agents = agents;
      if (generations > 0) overrides.n_generations = generations;
      if (!mutation_target.empty()) overrides.mutation_target = mutation_target;
      overrides.record_curves = !no_curves;
      std::optional<std::string> file;
      if (!config_file.empty()) file = config_file;
      return run_command(file, overrides, out_dir, format, dispersion,
                         std::max(1, threads), no_plots, quiet);
    }
    if (list->parsed()) {
      for (const auto& config : evobandit::scenario_grid()) {
        std::cout << config.name << ": " << config.environments.size()
                  << (config.environments.size() == 1 ? " environment" : " environments");
        if (evobandit::mutation_enabled(config.init_mode)) {
          std::cout << ", fixed init + mutation";
        } else {
          std::cout << ", uniform init";
        }
        std::cout << "\n";
      }
      return 0;
    }
    if (plot->parsed()) {
      for (const auto& path : evobandit::emit_plots(plot_dir)) {
        std::cout << "wrote " << path.string() << "\n";
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
