#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "evobandit/io.hpp"
#include "evobandit/plot.hpp"

using namespace evobandit;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& stem) {
  const fs::path dir = fs::temp_directory_path() / ("evobandit_test_" + stem);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::size_t data_rows(const std::string& body) {
  std::size_t lines = 0;
  for (char c : body) lines += c == '\n';
  return lines == 0 ? 0 : lines - 1;  // header excluded
}

ScenarioConfig tiny_config(std::uint64_t seed, bool curves) {
  ScenarioConfig config;
  config.name = "baseline";
  EnvironmentSpec env;
  env.p_reward = {0.75, 0.25};
  env.label = "baseline";
  config.environments = {env};
  config.n_agents = 40;
  config.n_generations = 3;
  config.n_reboots = 2;
  config.master_seed = seed;
  config.record_curves = curves;
  return config;
}

ScenarioRun make_run(const ScenarioConfig& config, int threads) {
  ScenarioRun run;
  run.config = config;
  run.reboots = run_scenario(config, threads);
  return run;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("six-significant-digit formatting is round-trip stable") {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const double value = rng.uniform(-20.0, 20.0) * std::pow(10.0, rng.below(7));
    const std::string once = format_sig6(value);
    const double parsed = std::strtod(once.c_str(), nullptr);
    CHECK(format_sig6(parsed) == once);
    CHECK(parsed == doctest::Approx(value).epsilon(5e-6));
  }
  CHECK(format_sig6(0.5) == "0.5");
  CHECK(format_sig6(0.0) == "0");
}

TEST_CASE("scenario configs survive a JSON round trip") {
  for (const auto& config : scenario_grid()) {
    const std::string text = scenario_config_to_json(config);
    const ScenarioConfig parsed = scenario_config_from_json(text);
    CHECK(scenario_config_to_json(parsed) == text);
    CHECK(parsed.name == config.name);
    CHECK(parsed.environments.size() == config.environments.size());
    CHECK(parsed.n_agents == config.n_agents);
    CHECK(mutation_enabled(parsed.init_mode) == mutation_enabled(config.init_mode));
  }
}

TEST_CASE("parse_config resolves scenario names and applies overrides") {
  ConfigOverrides overrides;
  overrides.scenario = "baseline";
  overrides.n_reboots = 25;
  overrides.master_seed = 42;
  const ScenarioConfig config = parse_config(std::nullopt, overrides);
  CHECK(config.name == "baseline");
  CHECK(config.n_reboots == 25);
  CHECK(config.master_seed == 42);
  CHECK(config.n_agents == 1000);          // default retained
  CHECK(config.n_generations == 200);      // default retained

  ConfigOverrides macro;
  macro.scenario = "macro-volatile";
  CHECK(parse_config(std::nullopt, macro).environments.size() == 9);
}

TEST_CASE("parse_config rejects bad input with the field and value") {
  ConfigOverrides unknown;
  unknown.scenario = "basline";
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, unknown),
                       doctest::Contains("unknown scenario name: 'basline'"),
                       std::invalid_argument);

  ConfigOverrides bad_agents;
  bad_agents.scenario = "baseline";
  bad_agents.n_agents = 999;
  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, bad_agents),
                       doctest::Contains("999"), std::invalid_argument);

  CHECK_THROWS_WITH_AS(parse_config(std::nullopt, ConfigOverrides{}),
                       doctest::Contains("no scenario selected"),
                       std::invalid_argument);

  CHECK_THROWS_AS(parse_config(fs::path("/nonexistent/config.json"), ConfigOverrides{}),
                  std::invalid_argument);
}

TEST_CASE("config files merge with flag overrides") {
  const fs::path dir = fresh_dir("config");
  const fs::path file = dir / "config.json";
  {
    std::ofstream out(file);
    out << R"({"scenario": "easy", "n_reboots": 10, "master_seed": 5})";
  }
  ConfigOverrides overrides;
  overrides.n_reboots = 3;  // flag wins over file
  const ScenarioConfig config = parse_config(file, overrides);
  CHECK(config.name == "easy");
  CHECK(config.n_reboots == 3);
  CHECK(config.master_seed == 5);
  CHECK(config.environments[0].p_reward[0] == 0.95);
}

TEST_CASE("emit_outputs writes consistent tables and manifest") {
  const fs::path dir = fresh_dir("emit");
  const ScenarioConfig config = tiny_config(9, true);
  const std::vector<ScenarioRun> runs{make_run(config, 2)};
  const std::vector<SummaryRow> summaries{
      summarize_scenario(runs[0].reboots, config.name)};

  const RunManifest manifest = emit_outputs(runs, summaries, dir, OutputFormat::csv, 1.5);

  REQUIRE(fs::exists(dir / "telemetry.csv"));
  REQUIRE(fs::exists(dir / "summary.csv"));
  REQUIRE(fs::exists(dir / "learning_curves.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));

  const std::string telemetry = slurp(dir / "telemetry.csv");
  CHECK(data_rows(telemetry) == 2 * 3);  // reboots x generations
  CHECK(telemetry.starts_with(
      "scenario,reboot,generation,fitness_mean,fitness_top5,fitness_bottom5,"
      "mean_alpha_plus,mean_alpha_minus,mean_beta,mean_tau,mean_phi\n"));
  CHECK(telemetry.back() == '\n');

  const std::string summary = slurp(dir / "summary.csv");
  CHECK(data_rows(summary) == 1);
  CHECK(summary.starts_with(
      "scenario,pct_positivity,pct_perseveration,mean_dalpha,sem_dalpha,"
      "t_dalpha,p_dalpha,mean_phi,sem_phi,t_phi,p_phi\n"));

  const std::string curves = slurp(dir / "learning_curves.csv");
  CHECK(data_rows(curves) == 160);

  // manifest row counts match the files
  const auto manifest_json = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest_json["master_seed"] == 9);
  CHECK(manifest_json["version"].get<std::string>() == manifest.version);
  for (const auto& output : manifest_json["outputs"]) {
    const std::string body = slurp(dir / output["path"].get<std::string>());
    CHECK(data_rows(body) == output["rows"].get<std::size_t>());
  }
}

TEST_CASE("same seed reproduces byte-identical CSV bodies") {
  const ScenarioConfig config = tiny_config(77, true);

  const fs::path dir_a = fresh_dir("bytes_a");
  const fs::path dir_b = fresh_dir("bytes_b");
  {
    const std::vector<ScenarioRun> runs{make_run(config, 1)};
    const std::vector<SummaryRow> summaries{
        summarize_scenario(runs[0].reboots, config.name)};
    emit_outputs(runs, summaries, dir_a, OutputFormat::csv, 0.0);
  }
  {
    const std::vector<ScenarioRun> runs{make_run(config, 2)};  // thread count must not matter
    const std::vector<SummaryRow> summaries{
        summarize_scenario(runs[0].reboots, config.name)};
    emit_outputs(runs, summaries, dir_b, OutputFormat::csv, 0.0);
  }
  for (const char* name : {"telemetry.csv", "summary.csv", "learning_curves.csv"}) {
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
}

TEST_CASE("emitted CSV numbers parse back to 6 significant digits") {
  const fs::path dir = fresh_dir("roundtrip");
  const ScenarioConfig config = tiny_config(5, false);
  const std::vector<ScenarioRun> runs{make_run(config, 1)};
  const std::vector<SummaryRow> summaries{
      summarize_scenario(runs[0].reboots, config.name)};
  emit_outputs(runs, summaries, dir, OutputFormat::csv, 0.0);

  std::ifstream in(dir / "telemetry.csv");
  std::string line;
  std::getline(in, line);  // header
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::stringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // scenario
    std::getline(cells, cell, ',');
    const int reboot = std::stoi(cell);
    std::getline(cells, cell, ',');
    const int generation = std::stoi(cell);
    std::getline(cells, cell, ',');
    const double fitness = std::strtod(cell.c_str(), nullptr);
    const auto& stats =
        runs[0].reboots[static_cast<std::size_t>(reboot)]
            .generations[static_cast<std::size_t>(generation)];
    REQUIRE(fitness == doctest::Approx(stats.fitness_mean).epsilon(5e-6));
    ++row;
  }
  CHECK(row == 6);
}

TEST_CASE("json format mirrors the tables") {
  const fs::path dir = fresh_dir("jsonfmt");
  const ScenarioConfig config = tiny_config(5, false);
  const std::vector<ScenarioRun> runs{make_run(config, 1)};
  const std::vector<SummaryRow> summaries{
      summarize_scenario(runs[0].reboots, config.name)};
  emit_outputs(runs, summaries, dir, OutputFormat::json, 0.0);

  REQUIRE(fs::exists(dir / "telemetry.json"));
  const auto telemetry = nlohmann::json::parse(slurp(dir / "telemetry.json"));
  REQUIRE(telemetry.is_array());
  CHECK(telemetry.size() == 6);
  CHECK(telemetry[0]["scenario"] == "baseline");
  CHECK(telemetry[0].contains("fitness_mean"));
}

TEST_CASE("plots render from the emitted CSVs") {
  const fs::path dir = fresh_dir("plots");
  const ScenarioConfig config = tiny_config(6, true);
  const std::vector<ScenarioRun> runs{make_run(config, 2)};
  const std::vector<SummaryRow> summaries{
      summarize_scenario(runs[0].reboots, config.name)};
  emit_outputs(runs, summaries, dir, OutputFormat::csv, 0.0);

  const auto written = emit_plots(dir);
  CHECK(written.size() == 4);
  for (const auto& path : written) {
    CAPTURE(path.string());
    REQUIRE(fs::exists(path));
    const std::string body = slurp(path);
    CHECK(body.starts_with("<svg"));
    CHECK(body.find("</svg>") != std::string::npos);
  }

  const fs::path empty = fresh_dir("noplots");
  CHECK_THROWS_AS(emit_plots(empty), std::invalid_argument);
}

}  // TEST_SUITE
