#include "evobandit/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace evobandit {

namespace {

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error("missing CSV column: " + name);
  }
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  return cells;
}

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Csv csv;
  std::string line;
  if (std::getline(in, line)) csv.columns = split_line(line);
  while (std::getline(in, line)) {
    if (!line.empty()) csv.rows.push_back(split_line(line));
  }
  return csv;
}

std::string gradient_color(double fraction) {
  const int r = static_cast<int>(std::lround(255.0 * fraction));
  const int b = 255 - r;
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "#%02x00%02x", r, b);
  return buffer;
}

// Fixed-frame line/scatter canvas with linear axes.
class SvgCanvas {
 public:
  SvgCanvas(double x_min, double x_max, double y_min, double y_max,
            std::string title, std::string x_label, std::string y_label)
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
          << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
          << kHeight << "\">\n";
    body_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    body_ << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" "
          << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    frame(x_label, y_label);
  }

  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& color, double width = 1.5) {
    if (points.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << width << "\" points=\"";
    for (const auto& [x, y] : points) {
      body_ << px(x) << ',' << py(y) << ' ';
    }
    body_ << "\"/>\n";
  }

  void dot(double x, double y, const std::string& color, double radius = 2.2) {
    body_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << radius
          << "\" fill=\"" << color << "\"/>\n";
  }

  void reference_line(double x0, double y0, double x1, double y1) {
    body_ << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(x1)
          << "\" y2=\"" << py(y1)
          << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kMarginTop + 14.0;
    for (const auto& [label, color] : entries) {
      body_ << "<line x1=\"" << kWidth - 150 << "\" y1=\"" << y << "\" x2=\""
            << kWidth - 130 << "\" y2=\"" << y << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
      body_ << "<text x=\"" << kWidth - 125 << "\" y=\"" << y + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << label
            << "</text>\n";
      y += 16.0;
    }
  }

  std::string finish() {
    body_ << "</svg>\n";
    return body_.str();
  }

 private:
  static constexpr double kWidth = 640.0;
  static constexpr double kHeight = 420.0;
  static constexpr double kMarginLeft = 62.0;
  static constexpr double kMarginRight = 20.0;
  static constexpr double kMarginTop = 32.0;
  static constexpr double kMarginBottom = 48.0;

  double px(double x) const {
    const double w = kWidth - kMarginLeft - kMarginRight;
    return kMarginLeft + (x - x_min_) / (x_max_ - x_min_) * w;
  }
  double py(double y) const {
    const double h = kHeight - kMarginTop - kMarginBottom;
    return kHeight - kMarginBottom - (y - y_min_) / (y_max_ - y_min_) * h;
  }

  void frame(const std::string& x_label, const std::string& y_label) {
    body_ << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom
          << "\" x2=\"" << kWidth - kMarginRight << "\" y2=\""
          << kHeight - kMarginBottom << "\" stroke=\"black\"/>\n";
    body_ << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
          << kMarginLeft << "\" y2=\"" << kHeight - kMarginBottom
          << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double fx = x_min_ + (x_max_ - x_min_) * i / 4.0;
      const double fy = y_min_ + (y_max_ - y_min_) * i / 4.0;
      body_ << "<text x=\"" << px(fx) << "\" y=\"" << kHeight - kMarginBottom + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << trim_number(fx) << "</text>\n";
      body_ << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << py(fy) + 3
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << trim_number(fy) << "</text>\n";
    }
    body_ << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
          << kHeight - 12
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
          << x_label << "</text>\n";
    body_ << "<text x=\"16\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
          << "transform=\"rotate(-90 16 " << (kMarginTop + kHeight - kMarginBottom) / 2
          << ")\">" << y_label << "</text>\n";
  }

  static std::string trim_number(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", v);
    return buffer;
  }

  double x_min_, x_max_, y_min_, y_max_;
  std::ostringstream body_;
};

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << body;
}

struct GenerationAverages {
  // Indexed by generation; each entry averages across reboots.
  std::vector<double> fitness_mean, fitness_top5, fitness_bottom5;
  std::vector<double> alpha_plus, alpha_minus, beta, phi;
};

GenerationAverages average_by_generation(const Csv& telemetry,
                                         const std::string& scenario) {
  const int c_scenario = telemetry.column("scenario");
  const int c_generation = telemetry.column("generation");
  const int c_mean = telemetry.column("fitness_mean");
  const int c_top = telemetry.column("fitness_top5");
  const int c_bottom = telemetry.column("fitness_bottom5");
  const int c_ap = telemetry.column("mean_alpha_plus");
  const int c_am = telemetry.column("mean_alpha_minus");
  const int c_beta = telemetry.column("mean_beta");
  const int c_phi = telemetry.column("mean_phi");

  std::map<int, std::array<double, 8>> sums;  // generation -> sums + count
  for (const auto& row : telemetry.rows) {
    if (row[static_cast<std::size_t>(c_scenario)] != scenario) continue;
    const int gen = std::stoi(row[static_cast<std::size_t>(c_generation)]);
    auto& entry = sums[gen];
    entry[0] += std::stod(row[static_cast<std::size_t>(c_mean)]);
    entry[1] += std::stod(row[static_cast<std::size_t>(c_top)]);
    entry[2] += std::stod(row[static_cast<std::size_t>(c_bottom)]);
    entry[3] += std::stod(row[static_cast<std::size_t>(c_ap)]);
    entry[4] += std::stod(row[static_cast<std::size_t>(c_am)]);
    entry[5] += std::stod(row[static_cast<std::size_t>(c_beta)]);
    entry[6] += std::stod(row[static_cast<std::size_t>(c_phi)]);
    entry[7] += 1.0;
  }

  GenerationAverages averages;
  for (const auto& [gen, entry] : sums) {
    const double count = entry[7];
    averages.fitness_mean.push_back(entry[0] / count);
    averages.fitness_top5.push_back(entry[1] / count);
    averages.fitness_bottom5.push_back(entry[2] / count);
    averages.alpha_plus.push_back(entry[3] / count);
    averages.alpha_minus.push_back(entry[4] / count);
    averages.beta.push_back(entry[5] / count);
    averages.phi.push_back(entry[6] / count);
  }
  return averages;
}

std::filesystem::path plot_fitness(const std::filesystem::path& out_dir,
                                   const std::string& scenario,
                                   const std::string& suffix,
                                   const GenerationAverages& averages) {
  const auto n = averages.fitness_mean.size();
  SvgCanvas canvas(0.0, static_cast<double>(n > 1 ? n - 1 : 1), 0.0, 1.0,
                   "Fitness across generations (" + scenario + ")", "generation",
                   "accuracy");
  auto series = [&](const std::vector<double>& values) {
    std::vector<std::pair<double, double>> points;
    points.reserve(values.size());
    for (std::size_t g = 0; g < values.size(); ++g) {
      points.emplace_back(static_cast<double>(g), values[g]);
    }
    return points;
  };
  canvas.reference_line(0.0, 0.5, static_cast<double>(n > 1 ? n - 1 : 1), 0.5);
  canvas.polyline(series(averages.fitness_top5), "#1f66c1");
  canvas.polyline(series(averages.fitness_mean), "#000000");
  canvas.polyline(series(averages.fitness_bottom5), "#d8a400");
  canvas.legend({{"top 5%", "#1f66c1"}, {"mean", "#000000"}, {"bottom 5%", "#d8a400"}});
  const auto path = out_dir / ("fitness_vs_generation" + suffix + ".svg");
  write_file(path, canvas.finish());
  return path;
}

std::filesystem::path plot_learning_rates(const std::filesystem::path& out_dir,
                                          const std::string& scenario,
                                          const std::string& suffix,
                                          const GenerationAverages& averages) {
  SvgCanvas canvas(0.0, 1.0, 0.0, 1.0,
                   "Learning-rate trajectory (" + scenario + ")", "alpha-",
                   "alpha+");
  canvas.reference_line(0.0, 0.0, 1.0, 1.0);
  const auto n = averages.alpha_plus.size();
  for (std::size_t g = 0; g < n; ++g) {
    const double fraction = n > 1 ? static_cast<double>(g) / (n - 1) : 0.0;
    canvas.dot(averages.alpha_minus[g], averages.alpha_plus[g], gradient_color(fraction));
  }
  const auto path = out_dir / ("learning_rates_trajectory" + suffix + ".svg");
  write_file(path, canvas.finish());
  return path;
}

std::filesystem::path plot_choice_trace(const std::filesystem::path& out_dir,
                                        const std::string& scenario,
                                        const std::string& suffix,
                                        const GenerationAverages& averages) {
  SvgCanvas canvas(0.0, 20.0, -20.0, 20.0,
                   "Choice-trace weight trajectory (" + scenario + ")", "beta",
                   "phi");
  canvas.reference_line(0.0, 0.0, 20.0, 0.0);
  const auto n = averages.beta.size();
  for (std::size_t g = 0; g < n; ++g) {
    const double fraction = n > 1 ? static_cast<double>(g) / (n - 1) : 0.0;
    canvas.dot(averages.beta[g], averages.phi[g], gradient_color(fraction));
  }
  const auto path = out_dir / ("choice_trace_trajectory" + suffix + ".svg");
  write_file(path, canvas.finish());
  return path;
}

std::filesystem::path plot_curves(const std::filesystem::path& out_dir, const Csv& curves) {
  const int c_scenario = curves.column("scenario");
  const int c_trial = curves.column("trial");
  const int c_rate = curves.column("p_correct");

  std::map<std::string, std::vector<std::pair<double, double>>> by_label;
  int max_trial = 1;
  for (const auto& row : curves.rows) {
    const int trial = std::stoi(row[static_cast<std::size_t>(c_trial)]);
    max_trial = std::max(max_trial, trial);
    by_label[row[static_cast<std::size_t>(c_scenario)]].emplace_back(
        static_cast<double>(trial), std::stod(row[static_cast<std::size_t>(c_rate)]));
  }

  SvgCanvas canvas(0.0, static_cast<double>(max_trial), 0.0, 1.0,
                   "Final-generation learning curves", "trial", "p(correct)");
  canvas.reference_line(0.0, 0.5, static_cast<double>(max_trial), 0.5);
  std::vector<std::pair<std::string, std::string>> legend;
  std::size_t index = 0;
  for (auto& [label, points] : by_label) {
    std::sort(points.begin(), points.end());
    const double fraction =
        by_label.size() > 1 ? static_cast<double>(index) / (by_label.size() - 1) : 0.0;
    const std::string color = gradient_color(fraction);
    canvas.polyline(points, color);
    if (legend.size() < 10) legend.emplace_back(label, color);
    ++index;
  }
  canvas.legend(legend);
  const auto path = out_dir / "learning_curves.svg";
  write_file(path, canvas.finish());
  return path;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& out_dir) {
  const auto telemetry_path = out_dir / "telemetry.csv";
  if (!std::filesystem::exists(telemetry_path)) {
    throw std::invalid_argument("no telemetry.csv in " + out_dir.string() +
                                "; run a scenario with CSV output first");
  }
  const Csv telemetry = read_csv(telemetry_path);

  std::vector<std::string> scenarios;
  const int c_scenario = telemetry.column("scenario");
  for (const auto& row : telemetry.rows) {
    const auto& name = row[static_cast<std::size_t>(c_scenario)];
    if (std::find(scenarios.begin(), scenarios.end(), name) == scenarios.end()) {
      scenarios.push_back(name);
    }
  }

  std::vector<std::filesystem::path> written;
  for (const auto& scenario : scenarios) {
    const std::string suffix = scenarios.size() > 1 ? "_" + scenario : "";
    const GenerationAverages averages = average_by_generation(telemetry, scenario);
    written.push_back(plot_fitness(out_dir, scenario, suffix, averages));
    written.push_back(plot_learning_rates(out_dir, scenario, suffix, averages));
    written.push_back(plot_choice_trace(out_dir, scenario, suffix, averages));
  }

  const auto curves_path = out_dir / "learning_curves.csv";
  if (std::filesystem::exists(curves_path)) {
    written.push_back(plot_curves(out_dir, read_csv(curves_path)));
  } else {
    std::cerr << "warning: no learning_curves.csv in " << out_dir.string()
              << "; skipping the learning-curve plot\n";
  }
  return written;
}

}  // namespace evobandit
