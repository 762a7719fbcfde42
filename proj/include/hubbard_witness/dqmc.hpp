#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hubbard_witness/lattice.hpp"
#include "hubbard_witness/stats.hpp"

namespace hw {

/// Parameters of one finite-temperature determinant QMC run of the
/// half-filled Hubbard model (mu = U/2).
struct QmcConfig {
  ClusterGeometry geometry;
  double t = 1.0;
  double u = 0.0;
  double beta = 1.0;
  double delta_tau = 0.125;
  int warmup_sweeps = 500;
  int measure_sweeps = 2000;
  int bin_size = 50;
  int stabilization_interval = 8;
  std::uint64_t seed = 1;

  /// round(beta / delta_tau).
  int n_slices() const;
  /// n_slices * delta_tau, the inverse temperature actually simulated.
  double effective_beta() const;
  /// Throws std::invalid_argument listing every violated constraint.
  void validate() const;
};

/// lambda with cosh(lambda) = exp(delta_tau U / 2).
double hs_coupling(double u, double delta_tau);

/// Auxiliary Ising field s(i, l), stored slice-major.
struct HsField {
  int n_sites = 0;
  int n_slices = 0;
  double lambda = 0.0;
  std::vector<std::int8_t> spins;

  std::int8_t& operator()(int site, int slice) { return spins[static_cast<std::size_t>(slice) * n_sites + site]; }
  std::int8_t operator()(int site, int slice) const {
    return spins[static_cast<std::size_t>(slice) * n_sites + site];
  }
};

/// Equal-time measurement averaged over the slices of one sweep. `mz` and
/// `mz2` are configuration expectations of M_z and M_z^2; the susceptibility
/// is formed from their Monte Carlo averages.
struct QmcSample {
  double mz = 0.0;
  double mz2 = 0.0;
  double l0 = 0.0;
  double filling = 0.0;
  double energy = 0.0;

  std::vector<double> as_row() const { return {mz, mz2, l0, filling, energy}; }
};

struct QmcEstimate {
  Estimate chi_z;
  Estimate l0_z;
  Estimate witness_e;
  Estimate filling;
  Estimate energy;
  int bins = 0;
  double beta = 0.0;  // effective inverse temperature
  double temperature = 0.0;
  double acceptance = 0.0;
  long negative_weight_count = 0;
  int stability_warnings = 0;
  double max_stability_deviation = 0.0;
  std::vector<std::string> warnings;
};

/// Markov chain over HS fields. B_sigma(l) = diag(exp(sigma lambda s(., l))) exp(dtau t K);
/// the slice-l Green function is G = (1 + B(l) ... B(1) B(L) ... B(l+1))^-1.
class DqmcSimulation {
 public:
  explicit DqmcSimulation(QmcConfig cfg);

  /// One pass over all slices and sites. When `measure` is set the sample
  /// averaged over the slices is returned.
  std::optional<QmcSample> sweep(bool measure = false);

  /// Green function of species 0 (up) or 1 (down) at the current slice.
  const Eigen::MatrixXd& green(int species) const { return green_[species]; }
  const HsField& field() const { return field_; }
  const QmcConfig& config() const { return cfg_; }

  /// Rebuilds the current-slice Green functions from the field.
  void recompute_green();
  /// G_sigma at the end of slice `slice` from scratch, via a stabilised
  /// UDT chain.
  Eigen::MatrixXd green_from_scratch(int species, int slice) const;

  /// Metropolis ratio for flipping s(site, current slice).
  double flip_ratio(int site) const;
  /// Flips s(site, current slice) and applies the rank-one Green update.
  void flip(int site);
  /// Measurement at the current slice from the current Green functions.
  QmcSample measure() const;

  int current_slice() const { return slice_; }
  void set_current_slice(int slice);

  long proposals() const { return proposals_; }
  long accepted() const { return accepted_; }
  long negative_weight_count() const { return negative_; }
  int stability_warnings() const { return warnings_; }
  double max_stability_deviation() const { return max_deviation_; }

 private:
  Eigen::MatrixXd slice_matrix(int species, int slice) const;
  Eigen::MatrixXd slice_matrix_inverse(int species, int slice) const;
  void rebuild_block(int block);
  void wrap_to(int slice);

  QmcConfig cfg_;
  int n_ = 0;
  int slices_ = 0;
  int block_len_ = 1;
  HsField field_;
  Eigen::MatrixXd exp_k_;       // exp(dtau t K)
  Eigen::MatrixXd exp_k_inv_;   // exp(-dtau t K)
  Eigen::MatrixXd exp_k_half_;  // exp(dtau t K / 2)
  Eigen::MatrixXd exp_k_half_inv_;
  std::vector<std::pair<int, int>> bonds_;
  std::vector<Eigen::MatrixXd> blocks_[2];  // products over consecutive slices
  Eigen::MatrixXd green_[2];
  int slice_ = 0;  // Green functions belong to the end of this slice
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  long proposals_ = 0;
  long accepted_ = 0;
  long negative_ = 0;
  int warnings_ = 0;
  double max_deviation_ = 0.0;
};

/// Turns per-sweep samples into jackknife estimates (bins of `bin_size`).
QmcEstimate estimate_from_samples(const std::vector<QmcSample>& samples, int n_sites, double beta,
                                  int bin_size);

/// Warmup, measurement and binning. When `bin_log` is set, one line per bin
/// is appended: bin index followed by the bin means of mz, mz2, l0,
/// filling, energy.
QmcEstimate run_qmc(const QmcConfig& cfg, std::ostream* bin_log = nullptr);

struct QmcTcBracket {
  double t_low = 0.0;   // witness significantly negative here
  double t_high = 0.0;  // and significantly positive here
  double tc = 0.0;      // linear interpolation of E between the two
  double tc_error = 0.0;
};

/// Highest adjacent temperature pair (ascending input) where the witness
/// changes sign from below -k sigma to above +k sigma.
std::optional<QmcTcBracket> qmc_tc_bracket(const std::vector<QmcEstimate>& by_temperature,
                                           double significance = 2.0);

}  // namespace hw
