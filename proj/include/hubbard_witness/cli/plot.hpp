#pragma once

#include <string>
#include <vector>

namespace hw::cli {

/// Self-contained matplotlib script for one figure kind ("witness",
/// "tc-vs-u" or "qmc") reading the given CSV files at run time. The script
/// is only generated, never executed.
std::string plot_script(const std::string& figure, const std::vector<std::string>& csv_paths);

}  // namespace hw::cli
