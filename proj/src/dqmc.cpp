#include "hubbard_witness/dqmc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hubbard_witness/format.hpp"
#include "hubbard_witness/thermo.hpp"

namespace hw {

int QmcConfig::n_slices() const { return static_cast<int>(std::lround(beta / delta_tau)); }

double QmcConfig::effective_beta() const { return n_slices() * delta_tau; }

void QmcConfig::validate() const {
  std::vector<std::string> errors;
  if (geometry.n_sites < 1) errors.emplace_back("geometry has no sites");
  if (!(t > 0.0)) errors.emplace_back("t must be > 0");
  if (!(u >= 0.0)) errors.emplace_back("U must be >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) errors.emplace_back("beta must be positive");
  if (!(delta_tau > 0.0)) errors.emplace_back("delta_tau must be positive");
  if (beta > 0.0 && delta_tau > 0.0 && n_slices() < 2) {
    errors.emplace_back("beta / delta_tau must round to at least 2 slices");
  }
  if (warmup_sweeps < 0) errors.emplace_back("warmup_sweeps must be >= 0");
  if (bin_size < 1) errors.emplace_back("bin_size must be >= 1");
  if (measure_sweeps < 1) errors.emplace_back("measure_sweeps must be >= 1");
  if (bin_size >= 1 && measure_sweeps < bin_size) {
    errors.emplace_back("measure_sweeps must hold at least one bin");
  }
  if (stabilization_interval < 1) errors.emplace_back("stabilization_interval must be >= 1");
  if (errors.empty()) return;
  std::string msg = "invalid QMC configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw std::invalid_argument(msg);
}

double hs_coupling(double u, double delta_tau) {
  if (u < 0.0) throw std::invalid_argument("HS coupling needs U >= 0");
  return std::acosh(std::exp(0.5 * delta_tau * u));
}

namespace {

Eigen::MatrixXd symmetric_exp(const Eigen::MatrixXd& k, double scale) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  const Eigen::VectorXd e = (scale * es.eigenvalues().array()).exp();
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
}

double species_sign(int species) { return species == 0 ? 1.0 : -1.0; }

// A = U diag(D) T, kept column-pivoted QR factorised so that products of
// many slice matrices stay representable.
struct Udt {
  Eigen::MatrixXd u;
  Eigen::VectorXd d;
  Eigen::MatrixXd t;

  explicit Udt(Eigen::Index n)
      : u(Eigen::MatrixXd::Identity(n, n)), d(Eigen::VectorXd::Ones(n)), t(Eigen::MatrixXd::Identity(n, n)) {}

  void left_multiply(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd x = (m * u) * d.asDiagonal();
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::MatrixXd r = qr.matrixR().triangularView<Eigen::Upper>();
    u = qr.householderQ();
    d = r.diagonal();
    Eigen::MatrixXd scaled = d.cwiseInverse().asDiagonal() * r;
    t = (scaled * qr.colsPermutation().transpose()) * t;
  }

  // (1 + U D T)^-1 with D split into large and small parts.
  Eigen::MatrixXd inverse_one_plus() const {
    const Eigen::Index n = d.size();
    Eigen::VectorXd big(n), small(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(d(i)) > 1.0) {
        big(i) = d(i);
        small(i) = 1.0;
      } else {
        big(i) = 1.0;
        small(i) = d(i);
      }
    }
    const Eigen::MatrixXd rhs = big.cwiseInverse().asDiagonal() * u.transpose();
    const Eigen::MatrixXd lhs = rhs + small.asDiagonal() * t;
    return lhs.partialPivLu().solve(rhs);
  }
};

}  // namespace

DqmcSimulation::DqmcSimulation(QmcConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  cfg_.validate();
  n_ = cfg_.geometry.n_sites;
  slices_ = cfg_.n_slices();
  block_len_ = std::min(cfg_.stabilization_interval, slices_);

  const Eigen::MatrixXd k = hopping_adjacency(cfg_.geometry);
  exp_k_ = symmetric_exp(k, cfg_.delta_tau * cfg_.t);
  exp_k_inv_ = symmetric_exp(k, -cfg_.delta_tau * cfg_.t);
  exp_k_half_ = symmetric_exp(k, 0.5 * cfg_.delta_tau * cfg_.t);
  exp_k_half_inv_ = symmetric_exp(k, -0.5 * cfg_.delta_tau * cfg_.t);
  for (const auto& b : cfg_.geometry.bonds) bonds_.emplace_back(b.from, b.to);

  field_.n_sites = n_;
  field_.n_slices = slices_;
  field_.lambda = hs_coupling(cfg_.u, cfg_.delta_tau);
  field_.spins.resize(static_cast<std::size_t>(n_) * slices_);
  for (auto& s : field_.spins) s = uniform_(rng_) < 0.5 ? 1 : -1;

  const int n_blocks = (slices_ + block_len_ - 1) / block_len_;
  for (auto& b : blocks_) b.resize(static_cast<std::size_t>(n_blocks));
  for (int b = 0; b < n_blocks; ++b) rebuild_block(b);
  slice_ = slices_ - 1;
  recompute_green();
}

Eigen::MatrixXd DqmcSimulation::slice_matrix(int species, int slice) const {
  const double sign = species_sign(species);
  Eigen::VectorXd v(n_);
  for (int i = 0; i < n_; ++i) v(i) = std::exp(sign * field_.lambda * field_(i, slice));
  return v.asDiagonal() * exp_k_;
}

Eigen::MatrixXd DqmcSimulation::slice_matrix_inverse(int species, int slice) const {
  const double sign = species_sign(species);
  Eigen::VectorXd v(n_);
  for (int i = 0; i < n_; ++i) v(i) = std::exp(-sign * field_.lambda * field_(i, slice));
  return exp_k_inv_ * v.asDiagonal();
}

void DqmcSimulation::rebuild_block(int block) {
  const int first = block * block_len_;
  const int last = std::min(first + block_len_, slices_);
  for (int s = 0; s < 2; ++s) {
    Eigen::MatrixXd prod = slice_matrix(s, first);
    for (int l = first + 1; l < last; ++l) prod = slice_matrix(s, l) * prod;
    blocks_[s][static_cast<std::size_t>(block)] = std::move(prod);
  }
}

Eigen::MatrixXd DqmcSimulation::green_from_scratch(int species, int slice) const {
  Udt chain(n_);
  const bool block_end = (slice + 1) % block_len_ == 0 || slice == slices_ - 1;
  if (block_end) {
    const int n_blocks = static_cast<int>(blocks_[species].size());
    const int own = slice / block_len_;
    for (int step = 1; step <= n_blocks; ++step) {
      chain.left_multiply(blocks_[species][static_cast<std::size_t>((own + step) % n_blocks)]);
    }
    return chain.inverse_one_plus();
  }
  Eigen::MatrixXd group = Eigen::MatrixXd::Identity(n_, n_);
  int in_group = 0;
  for (int step = 1; step <= slices_; ++step) {
    group = slice_matrix(species, (slice + step) % slices_) * group;
    if (++in_group == block_len_ || step == slices_) {
      chain.left_multiply(group);
      group.setIdentity();
      in_group = 0;
    }
  }
  return chain.inverse_one_plus();
}

void DqmcSimulation::recompute_green() {
  for (int s = 0; s < 2; ++s) green_[s] = green_from_scratch(s, slice_);
}

void DqmcSimulation::set_current_slice(int slice) {
  if (slice < 0 || slice >= slices_) throw std::out_of_range("slice index out of range");
  slice_ = slice;
  recompute_green();
}

void DqmcSimulation::wrap_to(int slice) {
  for (int s = 0; s < 2; ++s) {
    green_[s] = slice_matrix(s, slice) * green_[s] * slice_matrix_inverse(s, slice);
  }
  slice_ = slice;
}

double DqmcSimulation::flip_ratio(int site) const {
  double ratio = 1.0;
  for (int s = 0; s < 2; ++s) {
    const double delta =
        std::exp(-2.0 * species_sign(s) * field_.lambda * field_(site, slice_)) - 1.0;
    ratio *= 1.0 + delta * (1.0 - green_[s](site, site));
  }
  return ratio;
}

void DqmcSimulation::flip(int site) {
  for (int s = 0; s < 2; ++s) {
    Eigen::MatrixXd& g = green_[s];
    const double delta =
        std::exp(-2.0 * species_sign(s) * field_.lambda * field_(site, slice_)) - 1.0;
    const double r = 1.0 + delta * (1.0 - g(site, site));
    // G' = G - (delta / r) G e_i (e_i - G^T e_i)^T
    const Eigen::VectorXd col = g.col(site);
    Eigen::RowVectorXd row = -g.row(site);
    row(site) += 1.0;
    g.noalias() -= (delta / r) * col * row;
  }
  field_(site, slice_) = static_cast<std::int8_t>(-field_(site, slice_));
}

QmcSample DqmcSimulation::measure() const {
  QmcSample out;
  Eigen::MatrixXd g[2];
  Eigen::VectorXd dens[2];
  for (int s = 0; s < 2; ++s) {
    g[s] = exp_k_half_ * green_[s] * exp_k_half_inv_;
    dens[s] = Eigen::VectorXd::Ones(n_) - g[s].diagonal();
  }
  const double inv_n = 1.0 / n_;
  const double mz = 0.5 * (dens[0].sum() - dens[1].sum());
  double fluct = 0.0;
  for (int s = 0; s < 2; ++s) {
    // sum_ij <n_i n_j> - (sum_i <n_i>)^2 = tr G - sum_ij G_ij G_ji
    fluct += g[s].trace() - g[s].cwiseProduct(g[s].transpose()).sum();
  }
  out.mz = mz;
  out.mz2 = mz * mz + 0.25 * fluct;
  const Eigen::VectorXd dbl = dens[0].cwiseProduct(dens[1]);
  out.l0 = 0.25 * (dens[0].sum() + dens[1].sum() - 2.0 * dbl.sum()) * inv_n;
  out.filling = (dens[0].sum() + dens[1].sum()) * inv_n;
  double kinetic = 0.0;
  for (const auto& [i, j] : bonds_) {
    for (int s = 0; s < 2; ++s) kinetic += cfg_.t * (g[s](i, j) + g[s](j, i));
  }
  out.energy = (kinetic + cfg_.u * dbl.sum()) * inv_n;
  return out;
}

std::optional<QmcSample> DqmcSimulation::sweep(bool measure_now) {
  QmcSample acc;
  for (int step = 0; step < slices_; ++step) {
    const int next = (slice_ + 1) % slices_;
    wrap_to(next);
    for (int i = 0; i < n_; ++i) {
      const double ratio = flip_ratio(i);
      ++proposals_;
      if (ratio < 0.0) ++negative_;
      const double u = uniform_(rng_);
      if (u < std::abs(ratio)) {
        flip(i);
        ++accepted_;
      }
    }
    const bool block_end = (next + 1) % block_len_ == 0 || next == slices_ - 1;
    if (block_end) {
      rebuild_block(next / block_len_);
      for (int s = 0; s < 2; ++s) {
        Eigen::MatrixXd fresh = green_from_scratch(s, next);
        const double dev = (fresh - green_[s]).cwiseAbs().maxCoeff();
        max_deviation_ = std::max(max_deviation_, dev);
        if (dev > 1e-4) ++warnings_;
        green_[s] = std::move(fresh);
      }
    }
    if (measure_now) {
      const QmcSample m = measure();
      acc.mz += m.mz;
      acc.mz2 += m.mz2;
      acc.l0 += m.l0;
      acc.filling += m.filling;
      acc.energy += m.energy;
    }
  }
  if (!measure_now) return std::nullopt;
  const double inv = 1.0 / slices_;
  acc.mz *= inv;
  acc.mz2 *= inv;
  acc.l0 *= inv;
  acc.filling *= inv;
  acc.energy *= inv;
  return acc;
}

QmcEstimate estimate_from_samples(const std::vector<QmcSample>& samples, int n_sites, double beta,
                                  int bin_size) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(s.as_row());
  const auto bins = bin_rows(rows, static_cast<std::size_t>(bin_size));
  if (bins.empty()) throw std::invalid_argument("not enough samples for one bin");
  const double inv_n = 1.0 / n_sites;
  auto chi = [=](std::span<const double> m) { return beta * (m[1] - m[0] * m[0]) * inv_n; };
  QmcEstimate e;
  e.bins = static_cast<int>(bins.size());
  e.beta = beta;
  e.temperature = 1.0 / beta;
  e.chi_z = jackknife(bins, chi);
  e.l0_z = jackknife_mean(bins, 2);
  e.witness_e = jackknife(bins, [=](std::span<const double> m) {
    return witness_value(chi(m), m[2], 1.0 / beta);
  });
  e.filling = jackknife_mean(bins, 3);
  e.energy = jackknife_mean(bins, 4);
  return e;
}

QmcEstimate run_qmc(const QmcConfig& cfg, std::ostream* bin_log) {
  DqmcSimulation sim(cfg);
  for (int s = 0; s < cfg.warmup_sweeps; ++s) sim.sweep(false);
  std::vector<QmcSample> samples;
  samples.reserve(static_cast<std::size_t>(cfg.measure_sweeps));
  for (int s = 0; s < cfg.measure_sweeps; ++s) samples.push_back(*sim.sweep(true));

  QmcEstimate e = estimate_from_samples(samples, cfg.geometry.n_sites, cfg.effective_beta(), cfg.bin_size);
  e.acceptance = sim.proposals() ? static_cast<double>(sim.accepted()) / sim.proposals() : 0.0;
  e.negative_weight_count = sim.negative_weight_count();
  e.stability_warnings = sim.stability_warnings();
  e.max_stability_deviation = sim.max_stability_deviation();
  if (e.stability_warnings > 0) {
    e.warnings.push_back(std::to_string(e.stability_warnings) +
                         " Green-function recomputations deviated by more than 1e-4");
  }
  if (e.negative_weight_count > 0) {
    e.warnings.push_back(std::to_string(e.negative_weight_count) +
                         " proposals had a negative weight ratio (sign problem)");
  }
  if (cfg.u > 12.0 && cfg.beta > 8.0) {
    e.warnings.push_back("U > 12 with beta > 8: the simulation may be numerically unstable");
  }

  if (bin_log) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : samples) rows.push_back(s.as_row());
    const auto bins = bin_rows(rows, static_cast<std::size_t>(cfg.bin_size));
    for (std::size_t b = 0; b < bins.size(); ++b) {
      *bin_log << b;
      for (double v : bins[b]) *bin_log << ',' << format_double(v);
      *bin_log << '\n';
    }
  }
  return e;
}

std::optional<QmcTcBracket> qmc_tc_bracket(const std::vector<QmcEstimate>& by_temperature,
                                           double significance) {
  std::optional<std::size_t> last_neg;
  for (std::size_t k = 0; k < by_temperature.size(); ++k) {
    const auto& w = by_temperature[k].witness_e;
    if (w.mean + significance * w.error < 0.0) last_neg = k;
  }
  if (!last_neg) return std::nullopt;
  for (std::size_t k = *last_neg + 1; k < by_temperature.size(); ++k) {
    const auto& w = by_temperature[k].witness_e;
    if (w.mean - significance * w.error > 0.0) {
      const auto& lo = by_temperature[*last_neg];
      const auto& hi = by_temperature[k];
      const double t1 = lo.temperature, t2 = hi.temperature;
      const double e1 = lo.witness_e.mean, e2 = hi.witness_e.mean;
      QmcTcBracket b;
      b.t_low = t1;
      b.t_high = t2;
      b.tc = t1 - e1 * (t2 - t1) / (e2 - e1);
      const double scale = (t2 - t1) / ((e2 - e1) * (e2 - e1));
      b.tc_error = scale * std::hypot(e2 * lo.witness_e.error, e1 * hi.witness_e.error);
      return b;
    }
  }
  return std::nullopt;
}

}  // namespace hw
