#include "hubbard_witness/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hubbard_witness/format.hpp"

namespace hw::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  if (spec.empty()) return {};
  if (spec.rfind("log:", 0) == 0) {
    const auto parts = split(spec.substr(4), ':');
    if (parts.size() != 3) throw std::invalid_argument("log grid needs log:start:stop:count");
    const double a = parse_double(parts[0]);
    const double b = parse_double(parts[1]);
    const int n = static_cast<int>(parse_double(parts[2]));
    if (!(a > 0.0) || !(b > a) || n < 1) {
      throw std::invalid_argument("log grid needs 0 < start < stop and count >= 1");
    }
    std::vector<double> out;
    for (int k = 0; k < n; ++k) {
      out.push_back(n == 1 ? a : (k == n - 1 ? b : a * std::pow(b / a, static_cast<double>(k) / (n - 1))));
    }
    return out;
  }
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("range grid needs start:stop:step");
    const double a = parse_double(parts[0]);
    const double b = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || b < a) throw std::invalid_argument("range grid needs stop >= start and step > 0");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) out.push_back(parse_double(p));
  return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  for (const auto& p : split(trim(spec), ',')) {
    const double v = parse_double(p);
    if (v != std::floor(v)) throw std::invalid_argument("not an integer: " + p);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<int> parse_dims(const std::string& spec) {
  std::string s = spec;
  std::replace(s.begin(), s.end(), 'x', ',');
  std::replace(s.begin(), s.end(), 'X', ',');
  return parse_int_list(s);
}

std::vector<std::string> validate(const RunConfig& raw, ResolvedConfig& out) {
  std::vector<std::string> errors;
  out = ResolvedConfig{};
  out.raw = raw;
  const std::string& cmd = raw.command;
  const bool needs_lattice = cmd == "witness-scan" || cmd == "tc-vs-u" || cmd == "qmc-run";
  const bool needs_u = needs_lattice || cmd == "extrapolate";

  auto attempt = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.push_back(what + ": " + e.what());
    }
  };

  if (needs_lattice) {
    attempt("lattice", [&] {
      out.geometry = build_lattice(parse_lattice_kind(raw.lattice), parse_dims(raw.dims));
    });
    if (out.geometry && (cmd != "qmc-run" && raw.method == "ed") && out.geometry->n_sites > kMaxEdSites) {
      errors.push_back("lattice: exact diagonalisation supports at most " +
                       std::to_string(kMaxEdSites) + " sites");
    }
  }
  if (needs_u) {
    attempt("u", [&] {
      out.u_values = parse_grid(raw.u);
      if (out.u_values.empty()) throw std::invalid_argument("empty U grid");
      for (double u : out.u_values) {
        if (!(u >= 0.0)) throw std::invalid_argument("U values must be >= 0");
      }
      for (std::size_t i = 1; i < out.u_values.size(); ++i) {
        if (!(out.u_values[i] > out.u_values[i - 1])) {
          throw std::invalid_argument("U grid must be strictly increasing");
        }
      }
    });
  }
  if (needs_u || cmd == "extrapolate") {
    if (!(raw.t > 0.0)) errors.push_back("t: hopping must be > 0");
    attempt("ensemble", [&] {
      out.ensemble = Ensemble{parse_ensemble_kind(raw.ensemble), raw.mu};
      if (raw.mu && out.ensemble.kind == EnsembleKind::canonical_half_filled) {
        throw std::invalid_argument("mu only applies to the grand canonical ensemble");
      }
    });
  }
  if (cmd == "witness-scan" || cmd == "qmc-run") {
    if (cmd == "witness-scan" && raw.method != "ed" && raw.method != "qmc") {
      errors.push_back("method: must be 'ed' or 'qmc'");
    }
    attempt("temps", [&] {
      out.temperatures = parse_grid(raw.temps);
      if (out.temperatures.empty()) throw std::invalid_argument("empty temperature grid");
      for (double t : out.temperatures) {
        if (!(t > 0.0)) throw std::invalid_argument("temperatures must be > 0");
      }
    });
  }
  if (cmd == "tc-vs-u" || cmd == "extrapolate") {
    if (!(raw.tc_t_min > 0.0) || !(raw.tc_t_max > raw.tc_t_min)) {
      errors.push_back("tc-t-min/tc-t-max: need 0 < tc-t-min < tc-t-max");
    }
  }
  if (cmd == "extrapolate") {
    attempt("sizes", [&] {
      out.sizes = parse_int_list(raw.sizes);
      std::vector<int> sorted = out.sizes;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("repeated cluster size");
      }
    });
    if (raw.tc_table.empty() && out.sizes.size() < 3) {
      errors.push_back("sizes: extrapolation needs at least 3 cluster sizes");
    }
    if (raw.order < 0) errors.push_back("order: must be >= 0");
    if (!raw.tc_table.empty() || out.sizes.size() >= 3) {
      if (raw.tc_table.empty() && static_cast<int>(out.sizes.size()) < raw.order + 1) {
        errors.push_back("order: needs at least order + 1 cluster sizes");
      }
    }
    attempt("eta-u", [&] { out.eta_u = parse_grid(raw.eta_u); });
    if (raw.tc_table.empty()) {
      attempt("lattice", [&] {
        const auto kind = parse_lattice_kind(raw.lattice);
        if (kind != LatticeKind::chain && kind != LatticeKind::ring) {
          throw std::invalid_argument("extrapolation runs over chains or rings");
        }
      });
    }
  }
  const bool uses_qmc = cmd == "qmc-run" || (cmd == "witness-scan" && raw.method == "qmc");
  if (uses_qmc) {
    if (!(raw.delta_tau > 0.0)) errors.push_back("delta-tau: must be > 0");
    if (raw.warmup < 0) errors.push_back("warmup: must be >= 0");
    if (raw.bin_size < 1) errors.push_back("bin-size: must be >= 1");
    if (raw.sweeps < std::max(1, raw.bin_size)) errors.push_back("sweeps: must hold at least one bin");
    if (raw.stabilization < 1) errors.push_back("stabilization: must be >= 1");
    if (!(raw.significance > 0.0)) errors.push_back("significance: must be > 0");
    if (out.geometry && !out.temperatures.empty() && raw.delta_tau > 0.0) {
      for (double temp : out.temperatures) {
        if (std::lround(1.0 / temp / raw.delta_tau) < 2) {
          errors.push_back("temps: T = " + format_double(temp) + " gives fewer than 2 time slices");
          break;
        }
      }
    }
  }
  if (cmd == "plot") {
    if (raw.figure != "witness" && raw.figure != "tc-vs-u" && raw.figure != "qmc") {
      errors.push_back("figure: must be witness, tc-vs-u or qmc");
    }
    if (raw.inputs.empty()) errors.push_back("inputs: at least one CSV is required");
  }
  if (cmd != "plot" && raw.output.empty()) errors.push_back("output: an output path is required");
  if (raw.threads < 1) errors.push_back("threads: must be >= 1");
  return errors;
}

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> m;
  m.emplace_back("tool", "hubbard-witness");
  m.emplace_back("version", HW_VERSION);
  m.emplace_back("command", c.command);
  m.emplace_back("lattice", c.lattice);
  m.emplace_back("dims", c.dims);
  m.emplace_back("t", format_double(c.t));
  m.emplace_back("u", c.u);
  m.emplace_back("ensemble", c.ensemble);
  m.emplace_back("mu", c.mu ? format_double(*c.mu) : "U/2");
  m.emplace_back("method", c.method);
  m.emplace_back("temps", c.temps);
  m.emplace_back("tc-t-min", format_double(c.tc_t_min));
  m.emplace_back("tc-t-max", format_double(c.tc_t_max));
  m.emplace_back("sizes", c.sizes);
  m.emplace_back("order", std::to_string(c.order));
  m.emplace_back("eta-u", c.eta_u);
  m.emplace_back("tc-table", c.tc_table);
  m.emplace_back("delta-tau", format_double(c.delta_tau));
  m.emplace_back("warmup", std::to_string(c.warmup));
  m.emplace_back("sweeps", std::to_string(c.sweeps));
  m.emplace_back("bin-size", std::to_string(c.bin_size));
  m.emplace_back("stabilization", std::to_string(c.stabilization));
  m.emplace_back("seed", std::to_string(c.seed));
  m.emplace_back("significance", format_double(c.significance));
  return m;
}

QmcConfig qmc_config(const ResolvedConfig& cfg, double u, double temperature) {
  QmcConfig q;
  q.geometry = *cfg.geometry;
  q.t = cfg.raw.t;
  q.u = u;
  q.beta = 1.0 / temperature;
  q.delta_tau = cfg.raw.delta_tau;
  q.warmup_sweeps = cfg.raw.warmup;
  q.measure_sweeps = cfg.raw.sweeps;
  q.bin_size = cfg.raw.bin_size;
  q.stabilization_interval = cfg.raw.stabilization;
  q.seed = cfg.raw.seed;
  return q;
}

}  // namespace hw::cli
