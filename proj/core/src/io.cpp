#include "evobandit/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "evobandit/version.hpp"

namespace evobandit {

using nlohmann::json;

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  out << body;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

json environment_to_json(const EnvironmentSpec& env) {
  return json{{"p_reward", {env.p_reward[0], env.p_reward[1]}},
              {"n_trials", env.n_trials},
              {"n_periods", env.n_periods},
              {"period_length", env.period_length},
              {"reversal_kind", to_string(env.reversal_kind)},
              {"n_reversals", env.n_reversals},
              {"gaussian_sigma", env.gaussian_sigma},
              {"label", env.label}};
}

EnvironmentSpec environment_from_json(const json& j) {
  EnvironmentSpec env;
  if (j.contains("p_reward")) {
    const auto& p = j.at("p_reward");
    if (!p.is_array() || p.size() != 2) {
      throw std::invalid_argument("p_reward must be an array of 2 probabilities");
    }
    env.p_reward = {p[0].get<double>(), p[1].get<double>()};
  }
  env.n_trials = j.value("n_trials", env.n_trials);
  env.n_periods = j.value("n_periods", env.n_periods);
  env.period_length = j.value("period_length", env.period_length);
  if (j.contains("reversal_kind")) {
    env.reversal_kind = reversal_kind_from_string(j.at("reversal_kind").get<std::string>());
  }
  env.n_reversals = j.value("n_reversals", env.n_reversals);
  env.gaussian_sigma = j.value("gaussian_sigma", env.gaussian_sigma);
  env.label = j.value("label", env.label);
  return env;
}

json genome_to_json(const Genome& g) {
  return json{{"alpha_plus", g.alpha_plus},
              {"alpha_minus", g.alpha_minus},
              {"beta", g.beta},
              {"tau", g.tau},
              {"phi", g.phi}};
}

Genome genome_from_json(const json& j) {
  Genome g;
  g.alpha_plus = j.value("alpha_plus", 0.0);
  g.alpha_minus = j.value("alpha_minus", 0.0);
  g.beta = j.value("beta", 0.0);
  g.tau = j.value("tau", 0.0);
  g.phi = j.value("phi", 0.0);
  return g;
}

const char* mutation_target_name(MutationTarget target) {
  return target == MutationTarget::all_descendants ? "all_descendants"
                                                   : "five_percent_of_survivors";
}

MutationTarget mutation_target_from_string(std::string_view name) {
  if (name == "five_percent_of_survivors") return MutationTarget::five_percent_of_survivors;
  if (name == "all_descendants") return MutationTarget::all_descendants;
  throw std::invalid_argument(
      "mutation_target must be five_percent_of_survivors or all_descendants, got '" +
      std::string(name) + "'");
}

json config_to_json_value(const ScenarioConfig& config) {
  json j;
  j["name"] = config.name;
  json envs = json::array();
  for (const auto& env : config.environments) envs.push_back(environment_to_json(env));
  j["environments"] = envs;
  j["n_agents"] = config.n_agents;
  j["n_generations"] = config.n_generations;
  j["n_reboots"] = config.n_reboots;
  if (const auto* fixed = std::get_if<FixedInit>(&config.init_mode)) {
    j["init_mode"] = json{{"mode", "fixed"}, {"genome", genome_to_json(fixed->genome)}};
  } else {
    j["init_mode"] = json{{"mode", "uniform"}};
  }
  j["mutation_table"] = json{{"alpha_plus", config.mutation_table.alpha_plus},
                             {"alpha_minus", config.mutation_table.alpha_minus},
                             {"beta", config.mutation_table.beta},
                             {"tau", config.mutation_table.tau},
                             {"phi", config.mutation_table.phi}};
  j["mutation_target"] = mutation_target_name(config.mutation_target);
  j["master_seed"] = config.master_seed;
  j["record_curves"] = config.record_curves;
  return j;
}

ScenarioConfig config_from_json_value(const json& j) {
  ScenarioConfig config;
  // A config may start from a named scenario and override parts of it.
  if (j.contains("scenario")) {
    const auto wanted = j.at("scenario").get<std::string>();
    const auto grid = scenario_grid();
    const ScenarioConfig* named = find_scenario(grid, wanted);
    if (!named) {
      throw std::invalid_argument("unknown scenario name: '" + wanted + "'");
    }
    config = *named;
  }
  config.name = j.value("name", config.name);
  if (j.contains("environments")) {
    config.environments.clear();
    for (const auto& env : j.at("environments")) {
      config.environments.push_back(environment_from_json(env));
    }
  }
  config.n_agents = j.value("n_agents", config.n_agents);
  config.n_generations = j.value("n_generations", config.n_generations);
  config.n_reboots = j.value("n_reboots", config.n_reboots);
  if (j.contains("init_mode")) {
    const auto& init = j.at("init_mode");
    const auto mode = init.value("mode", "uniform");
    if (mode == std::string("fixed")) {
      config.init_mode = FixedInit{genome_from_json(init.value("genome", json::object()))};
    } else if (mode == std::string("uniform")) {
      config.init_mode = UniformInit{};
    } else {
      throw std::invalid_argument("init_mode.mode must be fixed or uniform, got '" +
                                  std::string(mode) + "'");
    }
  }
  if (j.contains("mutation_table")) {
    const auto& table = j.at("mutation_table");
    config.mutation_table.alpha_plus = table.value("alpha_plus", config.mutation_table.alpha_plus);
    config.mutation_table.alpha_minus = table.value("alpha_minus", config.mutation_table.alpha_minus);
    config.mutation_table.beta = table.value("beta", config.mutation_table.beta);
    config.mutation_table.tau = table.value("tau", config.mutation_table.tau);
    config.mutation_table.phi = table.value("phi", config.mutation_table.phi);
  }
  if (j.contains("mutation_target")) {
    config.mutation_target =
        mutation_target_from_string(j.at("mutation_target").get<std::string>());
  }
  config.master_seed = j.value("master_seed", config.master_seed);
  config.record_curves = j.value("record_curves", config.record_curves);
  return config;
}

}  // namespace

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("format must be csv or json, got '" + std::string(name) + "'");
}

std::string format_sig6(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string scenario_config_to_json(const ScenarioConfig& config) {
  return config_to_json_value(config).dump(2) + "\n";
}

ScenarioConfig scenario_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json_value(j);
}

ScenarioConfig load_scenario_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::invalid_argument("config file does not exist: " + file.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return scenario_config_from_json(text.str());
}

ScenarioConfig parse_config(const std::optional<std::filesystem::path>& config_file,
                            const ConfigOverrides& overrides) {
  ScenarioConfig config;
  bool selected = false;

  if (config_file) {
    config = load_scenario_config(*config_file);
    selected = true;
  }
  if (overrides.scenario) {
    const auto grid = scenario_grid();
    const ScenarioConfig* named = find_scenario(grid, *overrides.scenario);
    if (!named) {
      std::ostringstream err;
      err << "unknown scenario name: '" << *overrides.scenario << "' (valid:";
      for (const auto& entry : grid) err << ' ' << entry.name;
      err << ')';
      throw std::invalid_argument(err.str());
    }
    // Keep file-level size/seed overrides when both are given.
    ScenarioConfig named_copy = *named;
    if (selected) {
      named_copy.n_agents = config.n_agents;
      named_copy.n_generations = config.n_generations;
      named_copy.n_reboots = config.n_reboots;
      named_copy.master_seed = config.master_seed;
      named_copy.record_curves = config.record_curves;
      named_copy.mutation_target = config.mutation_target;
    }
    config = std::move(named_copy);
    selected = true;
  }
  if (!selected) {
    throw std::invalid_argument("no scenario selected: use --scenario NAME or --config FILE");
  }
  if (config.name.empty()) config.name = "custom";

  if (overrides.master_seed) config.master_seed = *overrides.master_seed;
  if (overrides.n_reboots) config.n_reboots = *overrides.n_reboots;
  if (overrides.n_agents) config.n_agents = *overrides.n_agents;
  if (overrides.n_generations) config.n_generations = *overrides.n_generations;
  if (overrides.mutation_target) {
    config.mutation_target = mutation_target_from_string(*overrides.mutation_target);
  }
  if (overrides.record_curves) config.record_curves = *overrides.record_curves;

  config.validate();
  return config;
}

namespace {

struct Table {
  std::string header;
  std::vector<std::string> rows;

  std::string csv_body() const {
    std::string body = header + "\n";
    for (const auto& row : rows) body += row + "\n";
    return body;
  }
};

Table telemetry_table(std::span<const ScenarioRun> runs) {
  Table table;
  table.header =
      "scenario,reboot,generation,fitness_mean,fitness_top5,fitness_bottom5,"
      "mean_alpha_plus,mean_alpha_minus,mean_beta,mean_tau,mean_phi";
  for (const auto& run : runs) {
    for (const auto& reboot : run.reboots) {
      for (const auto& gen : reboot.generations) {
        std::string row = run.config.name;
        row += ',';
        row += std::to_string(reboot.reboot);
        row += ',';
        row += std::to_string(gen.generation);
        for (double v : {gen.fitness_mean, gen.fitness_top5_mean, gen.fitness_bottom5_mean,
                         gen.mean_alpha_plus, gen.mean_alpha_minus, gen.mean_beta,
                         gen.mean_tau, gen.mean_phi}) {
          row += ',';
          row += format_sig6(v);
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

Table summary_table(std::span<const SummaryRow> summaries) {
  Table table;
  table.header =
      "scenario,pct_positivity,pct_perseveration,mean_dalpha,sem_dalpha,t_dalpha,"
      "p_dalpha,mean_phi,sem_phi,t_phi,p_phi";
  for (const auto& s : summaries) {
    std::string row = s.scenario;
    for (double v : {s.pct_positivity, s.pct_perseveration, s.mean_dalpha, s.sem_dalpha,
                     s.t_dalpha, s.p_dalpha, s.mean_phi, s.sem_phi, s.t_phi, s.p_phi}) {
      row += ',';
      row += format_sig6(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table curves_table(std::span<const ScenarioRun> runs) {
  Table table;
  table.header = "scenario,trial,p_correct";
  for (const auto& run : runs) {
    const auto& envs = run.config.environments;
    bool recorded = !run.reboots.empty();
    for (const auto& reboot : run.reboots) {
      recorded = recorded && reboot.correct_counts.size() == envs.size() &&
                 reboot.curve_agents > 0;
    }
    if (!recorded) continue;
    for (std::size_t e = 0; e < envs.size(); ++e) {
      const auto curve = learning_curve(run.reboots, e);
      // Single-environment scenarios keep the plain scenario label; macro
      // scenarios qualify it with the environment label.
      std::string label = run.config.name;
      if (envs.size() > 1) label += ":" + envs[e].label;
      for (std::size_t t = 0; t < curve.size(); ++t) {
        std::string row = label;
        row += ',';
        row += std::to_string(t);
        row += ',';
        row += format_sig6(curve[t]);
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

json table_to_json(const Table& table) {
  std::vector<std::string> columns;
  std::stringstream header(table.header);
  std::string column;
  while (std::getline(header, column, ',')) columns.push_back(column);

  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj;
    std::stringstream cells(row);
    std::string cell;
    for (const auto& name : columns) {
      std::getline(cells, cell, ',');
      char* end = nullptr;
      const double value = std::strtod(cell.c_str(), &end);
      if (end && *end == '\0' && end != cell.c_str()) {
        obj[name] = value;
      } else {
        obj[name] = cell;
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace

RunManifest emit_outputs(std::span<const ScenarioRun> runs,
                         std::span<const SummaryRow> summaries,
                         const std::filesystem::path& out_dir, OutputFormat format,
                         double duration_seconds) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out_dir.string() +
                             ": " + ec.message());
  }

  RunManifest manifest;
  manifest.version = kVersion;
  manifest.master_seed = runs.empty() ? 0 : runs.front().config.master_seed;
  manifest.duration_seconds = duration_seconds;

  json config_snapshot = json::array();
  for (const auto& run : runs) config_snapshot.push_back(config_to_json_value(run.config));
  manifest.config_json = config_snapshot.dump(2);

  const char* extension = format == OutputFormat::csv ? ".csv" : ".json";
  auto emit_table = [&](const std::string& stem, const Table& table) {
    const std::string name = stem + extension;
    const auto path = out_dir / name;
    if (format == OutputFormat::csv) {
      write_file(path, table.csv_body());
    } else {
      write_file(path, table_to_json(table).dump(2) + "\n");
    }
    manifest.outputs.push_back({name, table.rows.size()});
  };

  emit_table("telemetry", telemetry_table(runs));
  emit_table("summary", summary_table(summaries));
  const Table curves = curves_table(runs);
  if (!curves.rows.empty()) {
    emit_table("learning_curves", curves);
  }

  json manifest_json;
  manifest_json["version"] = manifest.version;
  manifest_json["master_seed"] = manifest.master_seed;
  manifest_json["duration_seconds"] = manifest.duration_seconds;
  manifest_json["config"] = config_snapshot;
  json outputs = json::array();
  for (const auto& file : manifest.outputs) {
    outputs.push_back(json{{"path", file.path}, {"rows", file.rows}});
  }
  manifest_json["outputs"] = outputs;
  write_file(out_dir / "manifest.json", manifest_json.dump(2) + "\n");

  return manifest;
}

}  // namespace evobandit
