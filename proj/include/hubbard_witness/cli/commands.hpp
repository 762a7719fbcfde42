#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hubbard_witness/cli/config.hpp"
#include "hubbard_witness/cli/csv.hpp"

namespace hw::cli {

/// Subcommand entry points. Each returns a process exit status; progress
/// and reports go to `out`, problems to `err`.
int cmd_witness_scan(const ResolvedConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_tc_vs_u(const ResolvedConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_extrapolate(const ResolvedConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_qmc_run(const ResolvedConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_plot(const ResolvedConfig& cfg, std::ostream& out, std::ostream& err);

/// Validates and dispatches on cfg.command.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Output path for one U value when several are scanned: "scan.csv" ->
/// "scan_U4.csv".
std::string per_u_path(const std::string& base, double u, bool multiple);

/// Rows of a witness scan, exposed for the bindings and tests.
CsvTable witness_scan_table(const ResolvedConfig& cfg, double u);
CsvTable tc_vs_u_table(const ResolvedConfig& cfg);
CsvTable qmc_table(const ResolvedConfig& cfg, double u, std::string* bin_log = nullptr);

}  // namespace hw::cli
