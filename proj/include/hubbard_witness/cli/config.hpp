#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hubbard_witness/dqmc.hpp"
#include "hubbard_witness/lattice.hpp"
#include "hubbard_witness/thermo.hpp"

namespace hw::cli {

/// Every option of every subcommand, as written on the command line or in
/// a config file. Grid-valued options stay textual until validate().
struct RunConfig {
  std::string command;

  std::string lattice = "chain";
  std::string dims = "4";
  double t = 1.0;
  std::string u = "4";
  std::string ensemble = "grand_canonical";
  std::optional<double> mu;
  std::string method = "ed";

  std::string temps = "log:0.05:10:64";
  double tc_t_min = 0.01;
  double tc_t_max = 50.0;

  std::string sizes = "2,4,6";
  int order = 2;
  std::string eta_u = "16,32,64";
  std::string tc_table;

  double delta_tau = 0.125;
  int warmup = 500;
  int sweeps = 2000;
  int bin_size = 50;
  int stabilization = 8;
  std::uint64_t seed = 1;
  std::string log;
  double significance = 2.0;

  std::string output;
  int threads = 1;

  std::string figure;
  std::vector<std::string> inputs;
};

/// Parsed and checked form of a RunConfig.
struct ResolvedConfig {
  RunConfig raw;
  std::optional<ClusterGeometry> geometry;
  Ensemble ensemble;
  std::vector<double> u_values;
  std::vector<double> temperatures;
  std::vector<int> sizes;
  std::vector<double> eta_u;
};

/// Grid syntax: "a,b,c" | "start:stop:step" (inclusive) | "log:start:stop:count".
std::vector<double> parse_grid(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);
/// "4", "4x4", "4,4,4".
std::vector<int> parse_dims(const std::string& spec);

/// Checks every field relevant to raw.command and returns all problems at
/// once; `resolved` is only meaningful when the list is empty.
std::vector<std::string> validate(const RunConfig& raw, ResolvedConfig& resolved);

/// `# key = value` lines describing every field, enough to rerun.
std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& cfg);

QmcConfig qmc_config(const ResolvedConfig& cfg, double u, double temperature);

}  // namespace hw::cli
