#pragma once

#include <filesystem>
#include <vector>

namespace evobandit {

// Renders static SVG plots from the CSV files in out_dir: fitness versus
// generation, the two parameter trajectories, and (when learning_curves.csv
// exists) the per-environment learning curves. Returns the files written.
// A convenience layer over the CSVs; missing optional inputs are skipped
// with a warning on stderr.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& out_dir);

}  // namespace evobandit
