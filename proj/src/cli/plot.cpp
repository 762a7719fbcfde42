#include "hubbard_witness/cli/plot.hpp"

#include <sstream>
#include <stdexcept>

namespace hw::cli {

namespace {

std::string python_string(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out + "'";
}

constexpr const char* kPreamble = R"PY(#!/usr/bin/env python3
# Generated by hubbard-witness plot. Reads the listed CSV files (with their
# '# key = value' preambles) and renders one panel.
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    meta, rows, header = {}, [], None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
                continue
            rows.append(dict(zip(header, cells)))
    return meta, rows


def num(text):
    try:
        return float(text)
    except ValueError:
        return float("nan")

)PY";

}  // namespace

std::string plot_script(const std::string& figure, const std::vector<std::string>& csv_paths) {
  std::ostringstream s;
  s << kPreamble << "FILES = [";
  for (std::size_t i = 0; i < csv_paths.size(); ++i) s << (i ? ", " : "") << python_string(csv_paths[i]);
  s << "]\n";
  s << "OUTPUT = sys.argv[1] if len(sys.argv) > 1 else " << python_string(figure + ".png") << "\n\n";
  s << "fig, ax = plt.subplots(figsize=(4.8, 3.6))\n";
  if (figure == "witness") {
    s << R"PY(for path in FILES:
    meta, rows = load(path)
    T = [num(r["T"]) for r in rows]
    E = [num(r["witness_e"]) for r in rows]
    ax.plot(T, E, label="U = " + meta.get("U", "?"))
ax.axhline(0.0, color="black", lw=0.6)
ax.set_xlabel("T")
ax.set_ylabel("E")
)PY";
  } else if (figure == "tc-vs-u") {
    s << R"PY(for path in FILES:
    meta, rows = load(path)
    U = [num(r["U"]) for r in rows]
    Tc = [num(r["Tc"]) for r in rows]
    dims = meta.get("dims", "?")
    style = "--" if meta.get("lattice") == "ring" else "-"
    ax.plot(U, Tc, style, label=dims + " (" + meta.get("ensemble", "") + ")")
ax.set_xlabel("U")
ax.set_ylabel("T_c")
)PY";
  } else if (figure == "qmc") {
    s << R"PY(for path in FILES:
    meta, rows = load(path)
    if rows and "Tc_extrapolated" in rows[0]:
        U = [num(r["U"]) for r in rows]
        ax.plot(U, [num(r["Tc_extrapolated"]) for r in rows], "-", color="black", label="extrapolation")
    elif rows and "witness_e" in rows[0]:
        T = [num(r["T"]) for r in rows]
        E = [num(r["witness_e"]) for r in rows]
        err = [num(r.get("err_witness_e", "nan")) for r in rows]
        label = meta.get("lattice", "") + " " + meta.get("dims", "") + " U=" + meta.get("U", "?")
        ax.errorbar(T, E, yerr=err, fmt="o", ms=3, capsize=2, label=label)
        ax.axhline(0.0, color="black", lw=0.6)
        ax.set_xlabel("T")
        ax.set_ylabel("E")
    else:
        U = [num(r["U"]) for r in rows]
        ax.plot(U, [num(r["Tc"]) for r in rows], "o", label=meta.get("dims", ""))
)PY";
  } else {
    throw std::invalid_argument("unknown figure kind: " + figure);
  }
  s << R"PY(ax.legend(frameon=False, fontsize=8)
fig.tight_layout()
fig.savefig(OUTPUT, dpi=150)
print("saved", OUTPUT)
)PY";
  return s.str();
}

}  // namespace hw::cli
