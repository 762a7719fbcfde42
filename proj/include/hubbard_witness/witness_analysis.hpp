#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hubbard_witness/lattice.hpp"
#include "hubbard_witness/thermo.hpp"

namespace hw {

enum class TcStatus {
  ok,           // crossing found and refined
  none,         // no negative-to-positive crossing: no entanglement detected
  unbracketed,  // witness still negative at t_max
};

std::string_view to_string(TcStatus status);

struct TcPoint {
  double u = 0.0;
  std::optional<double> tc;
  double t_low = 0.0;
  double t_high = 0.0;
  TcStatus status = TcStatus::none;
  std::string ensemble;
  std::string geometry;
};

inline constexpr int kTcScanPoints = 64;

/// Scans 64 geometrically spaced temperatures in [t_min, t_max] and refines
/// the highest negative-to-positive crossing of the witness by bisection.
/// Refinement continues until the bracket is below 1e-6 and the witness at
/// the midpoint is below 1e-8 in magnitude (or the bracket reaches double
/// resolution).
TcPoint find_tc(const std::function<double(double)>& witness, double t_min, double t_max);

TcPoint find_tc(const ClusterGeometry& geom, const HubbardParams& params, const Ensemble& ens,
                double t_min, double t_max);

struct TcCurve {
  std::string geometry;
  std::string ensemble;
  std::vector<TcPoint> points;
  std::optional<double> u_max;
  std::optional<double> tc_max;
};

/// Maximises f over [lo, hi] by golden-section search to |hi - lo| < tol.
std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo,
                                             double hi, double tol = 1e-2);

/// Locates the maximum of sampled values `ys` over ascending `xs`, then
/// refines it with golden-section search between the neighbouring grid
/// points. `f` returns nullopt where the quantity is undefined. Returns
/// (x_max, y_max), or nullopt when nothing is defined.
std::optional<std::pair<double, double>> refine_grid_maximum(
    const std::function<std::optional<double>(double)>& f, const std::vector<double>& xs,
    const std::vector<std::optional<double>>& ys, double tol = 1e-2);

/// One find_tc per U (mu = U/2 in the grand-canonical case unless fixed),
/// evaluated in parallel; points are returned in grid order.
TcCurve tc_vs_u_sweep(const ClusterGeometry& geom, const Ensemble& ens,
                      const std::vector<double>& u_grid, std::pair<double, double> t_window,
                      double t = 1.0, int threads = 1);

/// Least-squares fit tc(N) = sum_{k<=order} c_k N^{-k}; returns c_0.
/// Needs at least order + 1 distinct sizes (and always at least 3).
double extrapolate_thermodynamic(const std::vector<std::pair<int, double>>& points, int order = 2);

/// k_B T_c / (4 t^2 / U), the Heisenberg-comparison ratio with A_N = 1.
double eta(double u, double tc, double t = 1.0);

/// Linear fit y = a + b x; returns (a, b).
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ExtrapolationOptions {
  std::vector<int> sizes{2, 4, 6};
  LatticeKind kind = LatticeKind::chain;
  Ensemble ensemble = Ensemble::grand_canonical();
  std::vector<double> u_grid;
  std::pair<double, double> t_window{0.01, 50.0};
  int order = 2;
  std::vector<double> eta_u{16.0, 32.0, 64.0};
  double t = 1.0;
  int threads = 1;
};

struct ExtrapolationReport {
  std::vector<double> u_grid;
  std::vector<std::vector<std::optional<double>>> tc_by_size;  // [size][u]
  std::vector<std::optional<double>> tc_extrapolated;          // [u]
  std::optional<double> u_max;
  std::optional<double> tc_max;
  std::vector<double> eta_u;
  std::vector<double> eta_values;
  std::optional<double> eta_limit;  // intercept of eta vs 1/U
};

/// Thermodynamic-limit study over cluster sizes: extrapolated T_c(U), its
/// maximum and the large-U eta limit.
ExtrapolationReport extrapolation_study(const ExtrapolationOptions& opts);

}  // namespace hw
