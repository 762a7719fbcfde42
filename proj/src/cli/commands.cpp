#include "hubbard_witness/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <algorithm>
#include <map>
#include <set>
#include <ostream>
#include <sstream>

#include "hubbard_witness/cli/plot.hpp"
#include "hubbard_witness/format.hpp"
#include "hubbard_witness/parallel.hpp"
#include "hubbard_witness/witness_analysis.hpp"

namespace hw::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Reference values the extrapolation report compares against.
constexpr double kReferenceTcMax = 0.712;
constexpr double kReferenceUMax = 4.1;
constexpr double kReferenceEta = 1.568;
constexpr double kHeisenbergEta = 1.6;

CsvCell opt_cell(const std::optional<double>& v) { return v ? CsvCell{*v} : CsvCell{kNaN}; }

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }

}  // namespace

std::string per_u_path(const std::string& base, double u, bool multiple) {
  if (!multiple) return base;
  const std::filesystem::path p(base);
  std::string stem = p.stem().string() + "_U" + format_double(u);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

CsvTable witness_scan_table(const ResolvedConfig& cfg, double u) {
  if (cfg.raw.method == "qmc") return qmc_table(cfg, u);
  CsvTable table;
  table.metadata = metadata(cfg.raw);
  table.metadata.emplace_back("U", format_double(u));
  table.columns = {"T", "chi_z", "l0_z", "witness_e", "chi_total"};
  const EdModel model(*cfg.geometry, HubbardParams{cfg.raw.t, u, 0.0}, cfg.ensemble, cfg.raw.threads);
  for (double temp : cfg.temperatures) {
    const auto o = model.observables(temp);
    table.rows.push_back({temp, o.chi_z, o.l0_z, o.witness_e, o.chi_total()});
  }
  return table;
}

CsvTable qmc_table(const ResolvedConfig& cfg, double u, std::string* bin_log) {
  const auto& temps = cfg.temperatures;
  std::vector<QmcEstimate> est(temps.size());
  std::vector<std::string> logs(temps.size());
  parallel_for(temps.size(), cfg.raw.threads, [&](std::size_t i) {
    std::ostringstream log;
    est[i] = run_qmc(qmc_config(cfg, u, temps[i]), bin_log ? &log : nullptr);
    logs[i] = log.str();
  });

  CsvTable table;
  table.metadata = metadata(cfg.raw);
  table.metadata.emplace_back("U", format_double(u));
  table.metadata.emplace_back("mu", format_double(0.5 * u));
  // Brackets need ascending temperature.
  std::vector<std::size_t> order(temps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return temps[a] < temps[b]; });
  std::vector<QmcEstimate> ascending;
  for (auto i : order) ascending.push_back(est[i]);
  if (auto b = qmc_tc_bracket(ascending, cfg.raw.significance)) {
    table.metadata.emplace_back("tc_bracket", format_double(b->t_low) + " " + format_double(b->t_high));
    table.metadata.emplace_back("tc_estimate", format_double(b->tc) + " +- " + format_double(b->tc_error));
  } else {
    table.metadata.emplace_back("tc_bracket", "none");
  }
  for (const auto& e : est) {
    for (const auto& w : e.warnings) table.metadata.emplace_back("warning", "T=" + format_double(e.temperature) + ": " + w);
  }

  table.columns = {"T",       "chi_z",       "l0_z",   "witness_e",  "err_chi_z",
                   "err_l0_z", "err_witness_e", "filling", "err_filling", "energy",
                   "err_energy", "beta",       "acceptance", "stability_warnings", "negative_weights",
                   "chi_total"};
  for (const auto& e : est) {
    table.rows.push_back({e.temperature, e.chi_z.mean, e.l0_z.mean, e.witness_e.mean, e.chi_z.error,
                          e.l0_z.error, e.witness_e.error, e.filling.mean, e.filling.error,
                          e.energy.mean, e.energy.error, e.beta, e.acceptance,
                          static_cast<double>(e.stability_warnings),
                          static_cast<double>(e.negative_weight_count), 3.0 * e.chi_z.mean});
  }
  if (bin_log) {
    std::ostringstream os;
    os << "# measurement log: one bin per line\n";
    os << "T,bin,mz,mz2,l0,filling,energy\n";
    for (std::size_t i = 0; i < temps.size(); ++i) {
      std::istringstream lines(logs[i]);
      std::string line;
      while (std::getline(lines, line)) os << format_double(est[i].temperature) << ',' << line << '\n';
    }
    *bin_log = os.str();
  }
  return table;
}

int cmd_witness_scan(const ResolvedConfig& cfg, std::ostream& out, std::ostream&) {
  const bool multiple = cfg.u_values.size() > 1;
  for (double u : cfg.u_values) {
    const auto path = per_u_path(cfg.raw.output, u, multiple);
    write_csv(path, witness_scan_table(cfg, u));
    out << "wrote " << path << '\n';
  }
  return 0;
}

CsvTable tc_vs_u_table(const ResolvedConfig& cfg) {
  const auto curve = tc_vs_u_sweep(*cfg.geometry, cfg.ensemble, cfg.u_values,
                                   {cfg.raw.tc_t_min, cfg.raw.tc_t_max}, cfg.raw.t, cfg.raw.threads);
  CsvTable table;
  table.metadata = metadata(cfg.raw);
  table.metadata.emplace_back("u_max", opt_text(curve.u_max));
  table.metadata.emplace_back("tc_max", opt_text(curve.tc_max));
  table.columns = {"U", "Tc", "status"};
  for (const auto& p : curve.points) {
    table.rows.push_back({p.u, opt_cell(p.tc), std::string(to_string(p.status))});
  }
  return table;
}

int cmd_tc_vs_u(const ResolvedConfig& cfg, std::ostream& out, std::ostream&) {
  const auto table = tc_vs_u_table(cfg);
  write_csv(cfg.raw.output, table);
  out << "wrote " << cfg.raw.output << '\n';
  return 0;
}

namespace {

struct ExtrapolationSummary {
  int order = 2;
  std::vector<double> u_grid;
  std::vector<std::vector<std::optional<double>>> by_size;
  std::vector<std::optional<double>> extrapolated;
  std::optional<double> u_max;
  std::optional<double> tc_max;
  std::vector<double> eta_u;
  std::vector<double> eta;
  std::optional<double> eta_limit;
};

ExtrapolationSummary from_report(const ExtrapolationReport& r, int order) {
  return {order, r.u_grid, r.tc_by_size, r.tc_extrapolated, r.u_max, r.tc_max, r.eta_u, r.eta_values, r.eta_limit};
}

// Extrapolates a precomputed table with columns N, U, Tc.
ExtrapolationSummary from_table(const CsvTable& t, int order, const std::vector<double>& eta_u,
                                std::vector<int>& sizes_out) {
  std::map<double, std::map<int, double>> by_u;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double tc = t.number(r, "Tc");
    if (std::isnan(tc)) continue;
    by_u[t.number(r, "U")][static_cast<int>(t.number(r, "N"))] = tc;
  }
  std::set<int> sizes;
  for (const auto& [u, m] : by_u) {
    for (const auto& [n, tc] : m) sizes.insert(n);
  }
  sizes_out.assign(sizes.begin(), sizes.end());
  ExtrapolationSummary s;
  s.order = order;
  s.by_size.assign(sizes_out.size(), {});
  for (const auto& [u, m] : by_u) {
    s.u_grid.push_back(u);
    std::vector<std::pair<int, double>> pts(m.begin(), m.end());
    for (std::size_t k = 0; k < sizes_out.size(); ++k) {
      auto it = m.find(sizes_out[k]);
      s.by_size[k].push_back(it == m.end() ? std::nullopt : std::optional<double>(it->second));
    }
    s.extrapolated.push_back(pts.size() == sizes_out.size()
                                 ? std::optional<double>(extrapolate_thermodynamic(pts, order))
                                 : std::nullopt);
  }
  for (std::size_t i = 0; i < s.u_grid.size(); ++i) {
    if (s.extrapolated[i] && (!s.tc_max || *s.extrapolated[i] > *s.tc_max)) {
      s.tc_max = s.extrapolated[i];
      s.u_max = s.u_grid[i];
    }
  }
  std::vector<double> inv_u, etas;
  for (double u : eta_u) {
    for (std::size_t i = 0; i < s.u_grid.size(); ++i) {
      if (s.u_grid[i] == u && s.extrapolated[i] && u > 0.0) {
        s.eta_u.push_back(u);
        s.eta.push_back(eta(u, *s.extrapolated[i]));
        inv_u.push_back(1.0 / u);
        etas.push_back(s.eta.back());
      }
    }
  }
  if (etas.size() >= 2) s.eta_limit = linear_fit(inv_u, etas).first;
  return s;
}

}  // namespace

int cmd_extrapolate(const ResolvedConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<int> sizes = cfg.sizes;
  std::vector<ExtrapolationSummary> runs;
  std::vector<int> orders{cfg.raw.order};
  for (int alt : {1, 2}) {
    if (alt != cfg.raw.order) orders.push_back(alt);
  }
  for (int order : orders) {
    if (!cfg.raw.tc_table.empty()) {
      const auto table = read_csv(cfg.raw.tc_table);
      std::vector<int> found;
      auto s = from_table(table, order, cfg.eta_u, found);
      if (found.size() < 3 || static_cast<int>(found.size()) < order + 1) {
        if (order == cfg.raw.order) {
          throw std::invalid_argument("tc table needs at least max(3, order + 1) cluster sizes");
        }
        continue;
      }
      sizes = found;
      runs.push_back(std::move(s));
    } else {
      if (static_cast<int>(sizes.size()) < order + 1) continue;
      ExtrapolationOptions opts;
      opts.sizes = sizes;
      opts.kind = parse_lattice_kind(cfg.raw.lattice);
      opts.ensemble = cfg.ensemble;
      opts.u_grid = cfg.u_values;
      opts.t_window = {cfg.raw.tc_t_min, cfg.raw.tc_t_max};
      opts.order = order;
      opts.eta_u = cfg.eta_u;
      opts.t = cfg.raw.t;
      opts.threads = cfg.raw.threads;
      runs.push_back(from_report(extrapolation_study(opts), order));
    }
  }
  const auto& main = runs.front();

  CsvTable table;
  table.metadata = metadata(cfg.raw);
  table.metadata.emplace_back("u_max", opt_text(main.u_max));
  table.metadata.emplace_back("tc_max", opt_text(main.tc_max));
  table.metadata.emplace_back("eta_limit", opt_text(main.eta_limit));
  table.columns = {"U"};
  for (int n : sizes) table.columns.push_back("Tc_N" + std::to_string(n));
  table.columns.emplace_back("Tc_extrapolated");
  for (std::size_t i = 0; i < main.u_grid.size(); ++i) {
    std::vector<CsvCell> row{main.u_grid[i]};
    for (const auto& col : main.by_size) row.push_back(opt_cell(col[i]));
    row.push_back(opt_cell(main.extrapolated[i]));
    table.rows.push_back(std::move(row));
  }
  write_csv(cfg.raw.output, table);

  std::ostringstream rep;
  rep << "Thermodynamic-limit extrapolation (" << cfg.raw.lattice << ", sizes";
  for (int n : sizes) rep << ' ' << n;
  rep << ", " << cfg.raw.ensemble << ")\n";
  auto deviation = [](const std::optional<double>& v, double ref) {
    return v ? format_double(*v - ref) : std::string("n/a");
  };
  for (const auto& r : runs) {
    rep << "order " << r.order << (r.order == cfg.raw.order ? " (selected)" : " (sensitivity)") << ":\n";
    rep << "  Tc_max   = " << opt_text(r.tc_max) << "  reference " << kReferenceTcMax
        << "  deviation " << deviation(r.tc_max, kReferenceTcMax) << '\n';
    rep << "  U_max    = " << opt_text(r.u_max) << "  reference " << kReferenceUMax
        << "  deviation " << deviation(r.u_max, kReferenceUMax) << '\n';
    for (std::size_t k = 0; k < r.eta_u.size(); ++k) {
      rep << "  eta(U=" << format_double(r.eta_u[k]) << ") = " << format_double(r.eta[k]) << '\n';
    }
    rep << "  eta(inf) = " << opt_text(r.eta_limit) << "  reference " << kReferenceEta
        << " (spin-1/2 Heisenberg " << kHeisenbergEta << ")  deviation "
        << deviation(r.eta_limit, kReferenceEta) << '\n';
  }
  const std::filesystem::path report_path =
      std::filesystem::path(cfg.raw.output).replace_extension(".report.txt");
  std::ofstream(report_path) << rep.str();
  out << rep.str() << "wrote " << cfg.raw.output << " and " << report_path.string() << '\n';
  return 0;
}

int cmd_qmc_run(const ResolvedConfig& cfg, std::ostream& out, std::ostream& err) {
  const bool multiple = cfg.u_values.size() > 1;
  for (double u : cfg.u_values) {
    std::string log;
    const auto table = qmc_table(cfg, u, cfg.raw.log.empty() ? nullptr : &log);
    const auto path = per_u_path(cfg.raw.output, u, multiple);
    write_csv(path, table);
    out << "wrote " << path << '\n';
    for (const auto& [k, v] : table.metadata) {
      if (k == "tc_bracket" || k == "tc_estimate") out << "  U=" << format_double(u) << ' ' << k << ": " << v << '\n';
      if (k == "warning") err << "warning: U=" << format_double(u) << ' ' << v << '\n';
    }
    if (!cfg.raw.log.empty()) {
      const auto log_path = per_u_path(cfg.raw.log, u, multiple);
      std::ofstream(log_path, std::ios::app) << log;
      out << "appended measurement log to " << log_path << '\n';
    }
  }
  return 0;
}

int cmd_plot(const ResolvedConfig& cfg, std::ostream& out, std::ostream&) {
  const std::string script = plot_script(cfg.raw.figure, cfg.raw.inputs);
  const std::string path = cfg.raw.output.empty() ? "plot_" + cfg.raw.figure + ".py" : cfg.raw.output;
  std::ofstream(path) << script;
  out << "wrote " << path << '\n';
  return 0;
}

int run_command(const RunConfig& raw, std::ostream& out, std::ostream& err) {
  ResolvedConfig cfg;
  const auto errors = validate(raw, cfg);
  if (!errors.empty()) {
    err << "invalid configuration (" << errors.size() << " problem" << (errors.size() > 1 ? "s" : "") << "):\n";
    for (const auto& e : errors) err << "  " << e << '\n';
    return 2;
  }
  try {
    if (raw.command == "witness-scan") return cmd_witness_scan(cfg, out, err);
    if (raw.command == "tc-vs-u") return cmd_tc_vs_u(cfg, out, err);
    if (raw.command == "extrapolate") return cmd_extrapolate(cfg, out, err);
    if (raw.command == "qmc-run") return cmd_qmc_run(cfg, out, err);
    if (raw.command == "plot") return cmd_plot(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "unknown command '" << raw.command << "'\n";
  return 2;
}

}  // namespace hw::cli
