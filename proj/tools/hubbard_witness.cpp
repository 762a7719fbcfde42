// Command-line front end: witness scans, T_c sweeps, thermodynamic-limit
// extrapolation, QMC runs and plot-script generation.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hubbard_witness/cli/commands.hpp"
#include "hubbard_witness/parallel.hpp"

namespace {

using hw::cli::RunConfig;

void add_lattice_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--lattice", c.lattice, "chain | ring | square | cubic")->capture_default_str();
  sub.add_option("--dims", c.dims, "cluster extent, e.g. 4, 4x4, 4x4x4")->capture_default_str();
  sub.add_option("--t", c.t, "hopping amplitude")->capture_default_str();
  sub.add_option("--u", c.u, "U value(s): a,b,c | start:stop:step | log:start:stop:n")
      ->capture_default_str();
}

void add_ensemble_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--ensemble", c.ensemble, "canonical | grand_canonical")->capture_default_str();
  sub.add_option("--mu", c.mu, "grand-canonical chemical potential (default U/2)");
}

void add_qmc_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--delta-tau", c.delta_tau, "imaginary-time step")->capture_default_str();
  sub.add_option("--warmup", c.warmup, "warmup sweeps")->capture_default_str();
  sub.add_option("--sweeps", c.sweeps, "measurement sweeps")->capture_default_str();
  sub.add_option("--bin-size", c.bin_size, "sweeps per bin")->capture_default_str();
  sub.add_option("--stabilization", c.stabilization, "slices between Green recomputations")
      ->capture_default_str();
  sub.add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub.add_option("--significance", c.significance, "sigma level for T_c brackets")->capture_default_str();
}

void add_common(CLI::App& sub, RunConfig& c) {
  sub.add_option("-o,--output", c.output, "output file");
  sub.add_option("--threads", c.threads, "worker threads (env HW_NUM_THREADS)")->capture_default_str();
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat "key = value" file; [sections] and # comments are ignored, and
// underscores in keys are read as dashes so keys mirror the flag names.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    for (char& ch : key) ch = ch == '_' ? '-' : ch;
    out.emplace_back(key, value);
  }
  return out;
}

// Rebuilds argv with config-file values placed right after the subcommand
// name, so that explicit flags (parsed later, last one wins) override them.
std::vector<std::string> splice_config(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (config_path.empty()) return args;

  CLI::App* sub = nullptr;
  std::size_t at = 0;
  for (std::size_t i = 1; i < args.size() && !sub; ++i) {
    for (auto* s : app.get_subcommands({})) {
      if (s->get_name() == args[i]) {
        sub = s;
        at = i;
      }
    }
  }
  if (!sub) return args;

  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config_file(config_path)) {
    bool known_anywhere = false;
    for (auto* s : app.get_subcommands({})) known_anywhere |= s->get_option_no_throw("--" + key) != nullptr;
    if (!known_anywhere) throw std::runtime_error("config file " + config_path + ": unknown key '" + key + "'");
    if (!sub->get_option_no_throw("--" + key)) continue;  // belongs to another subcommand
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  args.insert(args.begin() + static_cast<long>(at) + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal entanglement witness for the half-filled Hubbard model"};
  app.add_option("--config", "flat key = value file; flags on the command line override it");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", HW_VERSION);
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.threads = hw::default_thread_count();

  auto* scan = app.add_subcommand("witness-scan", "witness E(T) on a temperature grid");
  add_lattice_options(*scan, cfg);
  add_ensemble_options(*scan, cfg);
  scan->add_option("--method", cfg.method, "ed | qmc")->capture_default_str();
  scan->add_option("--temps", cfg.temps, "temperature grid")->capture_default_str();
  add_qmc_options(*scan, cfg);
  add_common(*scan, cfg);

  auto* tc = app.add_subcommand("tc-vs-u", "critical temperature over a U grid (ED)");
  add_lattice_options(*tc, cfg);
  add_ensemble_options(*tc, cfg);
  tc->add_option("--tc-t-min", cfg.tc_t_min, "lower end of the T_c search window")->capture_default_str();
  tc->add_option("--tc-t-max", cfg.tc_t_max, "upper end of the T_c search window")->capture_default_str();
  add_common(*tc, cfg);

  auto* ext = app.add_subcommand("extrapolate", "thermodynamic-limit T_c(U), its maximum and eta");
  add_lattice_options(*ext, cfg);
  add_ensemble_options(*ext, cfg);
  ext->add_option("--sizes", cfg.sizes, "cluster sizes")->capture_default_str();
  ext->add_option("--order", cfg.order, "polynomial order in 1/N")->capture_default_str();
  ext->add_option("--eta-u", cfg.eta_u, "U values for the large-U eta fit")->capture_default_str();
  ext->add_option("--tc-table", cfg.tc_table, "CSV with columns N,U,Tc to extrapolate instead of running ED");
  ext->add_option("--tc-t-min", cfg.tc_t_min, "lower end of the T_c search window")->capture_default_str();
  ext->add_option("--tc-t-max", cfg.tc_t_max, "upper end of the T_c search window")->capture_default_str();
  add_common(*ext, cfg);

  auto* qmc = app.add_subcommand("qmc-run", "determinant QMC over a temperature grid");
  add_lattice_options(*qmc, cfg);
  qmc->add_option("--temps", cfg.temps, "temperature grid")->capture_default_str();
  qmc->add_option("--log", cfg.log, "append per-bin measurements to this file");
  add_qmc_options(*qmc, cfg);
  add_common(*qmc, cfg);

  auto* plot = app.add_subcommand("plot", "emit a matplotlib script for CSV outputs");
  plot->add_option("--figure", cfg.figure, "witness | tc-vs-u | qmc")->required();
  plot->add_option("inputs", cfg.inputs, "CSV files")->required();
  plot->add_option("-o,--output", cfg.output, "script path (default plot_<figure>.py)");

  std::vector<std::string> args;
  try {
    args = splice_config(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::vector<char*> ptrs;
  for (auto& a : args) ptrs.push_back(a.data());
  CLI11_PARSE(app, static_cast<int>(ptrs.size()), ptrs.data());

  for (auto* sub : {scan, tc, ext, qmc, plot}) {
    if (sub->parsed()) cfg.command = sub->get_name();
  }
  return hw::cli::run_command(cfg, std::cout, std::cerr);
}
