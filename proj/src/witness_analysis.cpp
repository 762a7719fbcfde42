#include "hubbard_witness/witness_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "hubbard_witness/parallel.hpp"

namespace hw {

std::string_view to_string(TcStatus status) {
  switch (status) {
    case TcStatus::ok: return "ok";
    case TcStatus::none: return "none";
    case TcStatus::unbracketed: return "unbracketed";
  }
  return "unknown";
}

TcPoint find_tc(const std::function<double(double)>& witness, double t_min, double t_max) {
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw std::invalid_argument("find_tc needs 0 < t_min < t_max");
  }
  std::vector<double> temps(kTcScanPoints);
  std::vector<double> values(kTcScanPoints);
  const double ratio = std::log(t_max / t_min);
  for (int k = 0; k < kTcScanPoints; ++k) {
    temps[k] = k == kTcScanPoints - 1
                   ? t_max
                   : t_min * std::exp(ratio * k / (kTcScanPoints - 1));
    values[k] = witness(temps[k]);
  }

  TcPoint p;
  p.t_low = t_min;
  p.t_high = t_max;
  if (values.back() < 0.0) {
    p.status = TcStatus::unbracketed;
    return p;
  }
  int crossing = -1;
  for (int k = kTcScanPoints - 2; k >= 0; --k) {
    if (values[k] < 0.0 && values[k + 1] >= 0.0) {
      crossing = k;
      break;
    }
  }
  if (crossing < 0) {
    p.status = TcStatus::none;
    return p;
  }

  double lo = temps[crossing];
  double hi = temps[crossing + 1];
  p.t_low = lo;
  p.t_high = hi;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double e = witness(mid);
    const bool narrow = hi - lo < 1e-6;
    if ((narrow && std::abs(e) < 1e-8) || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      break;
    }
    if (e < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  p.tc = mid;
  p.status = TcStatus::ok;
  return p;
}

TcPoint find_tc(const ClusterGeometry& geom, const HubbardParams& params, const Ensemble& ens,
                double t_min, double t_max) {
  const EdModel model(geom, params, ens);
  TcPoint p = find_tc([&](double temp) { return model.witness(temp); }, t_min, t_max);
  p.u = params.u;
  p.geometry = geom.label();
  p.ensemble = std::string(to_string(ens.kind));
  return p;
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo,
                                             double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a >= tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

std::optional<std::pair<double, double>> refine_grid_maximum(
    const std::function<std::optional<double>(double)>& f, const std::vector<double>& xs,
    const std::vector<std::optional<double>>& ys, double tol) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i] && (!best || *ys[i] > *ys[*best])) best = i;
  }
  if (!best) return std::nullopt;
  const std::size_t i = *best;
  if (i == 0 || i + 1 >= xs.size() || !ys[i - 1] || !ys[i + 1]) {
    return std::pair{xs[i], *ys[i]};
  }
  // Undefined values are treated as -inf so the search stays in the defined region.
  auto g = [&](double x) { return f(x).value_or(-std::numeric_limits<double>::infinity()); };
  auto refined = golden_section_max(g, xs[i - 1], xs[i + 1], tol);
  if (refined.second < *ys[i]) return std::pair{xs[i], *ys[i]};
  return refined;
}

TcCurve tc_vs_u_sweep(const ClusterGeometry& geom, const Ensemble& ens,
                      const std::vector<double>& u_grid, std::pair<double, double> t_window,
                      double t, int threads) {
  if (u_grid.empty()) throw std::invalid_argument("U grid is empty");
  for (std::size_t i = 1; i < u_grid.size(); ++i) {
    if (!(u_grid[i] > u_grid[i - 1])) throw std::invalid_argument("U grid must be strictly increasing");
  }
  TcCurve curve;
  curve.geometry = geom.label();
  curve.ensemble = std::string(to_string(ens.kind));
  curve.points.resize(u_grid.size());

  auto tc_at = [&](double u) {
    return find_tc(geom, HubbardParams{t, u, 0.0}, ens, t_window.first, t_window.second);
  };
  parallel_for(u_grid.size(), threads, [&](std::size_t i) {
    try {
      curve.points[i] = tc_at(u_grid[i]);
    } catch (const std::exception&) {
      // A failing point is reported without a value; the sweep continues.
      TcPoint p;
      p.u = u_grid[i];
      p.status = TcStatus::none;
      p.geometry = curve.geometry;
      p.ensemble = curve.ensemble;
      curve.points[i] = p;
    }
  });

  std::vector<std::optional<double>> tcs;
  for (const auto& p : curve.points) tcs.push_back(p.tc);
  if (auto best = refine_grid_maximum([&](double u) { return tc_at(u).tc; }, u_grid, tcs)) {
    curve.u_max = best->first;
    curve.tc_max = best->second;
  }
  return curve;
}

double extrapolate_thermodynamic(const std::vector<std::pair<int, double>>& points, int order) {
  if (order < 0) throw std::invalid_argument("extrapolation order must be >= 0");
  std::set<int> sizes;
  for (const auto& [n, tc] : points) {
    if (n <= 0) throw std::invalid_argument("cluster sizes must be positive");
    if (!sizes.insert(n).second) throw std::invalid_argument("repeated cluster size in extrapolation");
  }
  const auto need = static_cast<std::size_t>(std::max(3, order + 1));
  if (points.size() < need) {
    throw std::invalid_argument("extrapolation needs at least " + std::to_string(need) +
                                " distinct cluster sizes");
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), order + 1);
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (std::size_t r = 0; r < points.size(); ++r) {
    const double x = 1.0 / points[r].first;
    double pw = 1.0;
    for (int c = 0; c <= order; ++c, pw *= x) a(static_cast<Eigen::Index>(r), c) = pw;
    y(static_cast<Eigen::Index>(r)) = points[r].second;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  return coef(0);
}

double eta(double u, double tc, double t) {
  if (!(u > 0.0)) throw std::invalid_argument("eta needs U > 0");
  return tc * u / (4.0 * t * t);
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("linear fit needs distinct abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  return {(sy - slope * sx) / n, slope};
}

ExtrapolationReport extrapolation_study(const ExtrapolationOptions& opts) {
  const std::size_t need = static_cast<std::size_t>(std::max(3, opts.order + 1));
  if (opts.sizes.size() < need) {
    throw std::invalid_argument("extrapolation needs at least " + std::to_string(need) +
                                " cluster sizes");
  }
  std::vector<ClusterGeometry> geoms;
  for (int n : opts.sizes) geoms.push_back(build_lattice(opts.kind, {n}));

  // Extrapolated T_c at one U; undefined unless every size has a crossing.
  auto extrapolated = [&](double u) -> std::pair<std::vector<std::optional<double>>, std::optional<double>> {
    std::vector<std::optional<double>> per_size;
    std::vector<std::pair<int, double>> pts;
    for (std::size_t s = 0; s < geoms.size(); ++s) {
      const auto p = find_tc(geoms[s], HubbardParams{opts.t, u, 0.0}, opts.ensemble,
                             opts.t_window.first, opts.t_window.second);
      per_size.push_back(p.tc);
      if (p.tc) pts.emplace_back(opts.sizes[s], *p.tc);
    }
    if (pts.size() != geoms.size()) return {per_size, std::nullopt};
    return {per_size, extrapolate_thermodynamic(pts, opts.order)};
  };

  ExtrapolationReport rep;
  rep.u_grid = opts.u_grid;
  rep.tc_by_size.assign(opts.sizes.size(), std::vector<std::optional<double>>(opts.u_grid.size()));
  rep.tc_extrapolated.resize(opts.u_grid.size());
  parallel_for(opts.u_grid.size(), opts.threads, [&](std::size_t i) {
    auto [per_size, ext] = extrapolated(opts.u_grid[i]);
    for (std::size_t s = 0; s < per_size.size(); ++s) rep.tc_by_size[s][i] = per_size[s];
    rep.tc_extrapolated[i] = ext;
  });
  if (auto best = refine_grid_maximum([&](double u) { return extrapolated(u).second; },
                                      opts.u_grid, rep.tc_extrapolated)) {
    rep.u_max = best->first;
    rep.tc_max = best->second;
  }

  rep.eta_u = opts.eta_u;
  std::vector<double> inv_u;
  std::vector<double> etas;
  for (double u : opts.eta_u) {
    const auto ext = extrapolated(u).second;
    rep.eta_values.push_back(ext ? eta(u, *ext, opts.t) : std::numeric_limits<double>::quiet_NaN());
    if (ext) {
      inv_u.push_back(1.0 / u);
      etas.push_back(rep.eta_values.back());
    }
  }
  if (etas.size() >= 2) rep.eta_limit = linear_fit(inv_u, etas).first;
  return rep;
}

}  // namespace hw
