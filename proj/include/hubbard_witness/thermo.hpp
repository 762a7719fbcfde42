#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hubbard_witness/ed_engine.hpp"
#include "hubbard_witness/lattice.hpp"

namespace hw {

enum class EnsembleKind { canonical_half_filled, grand_canonical };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);

/// Canonical: every sector with n_up + n_dn = N (all S^z resolutions).
/// Grand canonical: all sectors with fugacity exp(beta mu (n_up + n_dn));
/// mu defaults to U/2, which pins half filling on bipartite clusters.
struct Ensemble {
  EnsembleKind kind = EnsembleKind::grand_canonical;
  std::optional<double> mu;

  static Ensemble canonical() { return {EnsembleKind::canonical_half_filled, std::nullopt}; }
  static Ensemble grand_canonical(std::optional<double> mu = std::nullopt) {
    return {EnsembleKind::grand_canonical, mu};
  }

  double chemical_potential(const HubbardParams& params) const {
    return kind == EnsembleKind::grand_canonical ? mu.value_or(0.5 * params.u) : 0.0;
  }
};

std::vector<SectorKey> required_sectors(int n_sites, const Ensemble& ens);

/// Per-site thermal averages in units k_B = t = mu_B = 1.
struct ThermalObservables {
  double temperature = 0.0;
  double chi_z = 0.0;         // beta (<M_z^2> - <M_z>^2) / N
  double l0_z = 0.0;          // (1/N) sum_i <(S_i^z)^2>
  double witness_e = 0.0;     // chi_z - (l0_z - 1/12) / T; negative certifies entanglement
  double mean_filling = 0.0;  // electrons per site
  double mean_energy = 0.0;   // <H> per site, without the -mu N term

  double chi_total() const { return 3.0 * chi_z; }
};

/// chi - (L0 - 1/12)/T. The 1/12 is s_max^2 = 1/4 split over three
/// isotropic components.
inline double witness_value(double chi_z, double l0_z, double temperature) {
  return chi_z - (l0_z - 1.0 / 12.0) / temperature;
}

/// Boltzmann averages over the supplied sector spectra, which must be
/// exactly the sectors `ens` requires.
ThermalObservables thermal_observables(std::span<const Spectrum> spectra, const Ensemble& ens,
                                       const HubbardParams& params, double temperature);

/// Per-eigenstate scalars flattened out of a set of spectra, so repeated
/// temperature evaluations cost O(states).
class ThermalTable {
 public:
  ThermalTable(std::span<const Spectrum> spectra, double mu);

  ThermalObservables evaluate(double temperature) const;
  int n_sites() const { return n_sites_; }
  std::size_t n_states() const { return energy_.size(); }

 private:
  int n_sites_ = 0;
  double mu_ = 0.0;
  double shift_ = 0.0;  // min over states of (E - mu N_e)
  std::vector<double> energy_;
  std::vector<double> electrons_;
  std::vector<double> mz_;
  std::vector<double> moment_;  // sum_i (n_up + n_dn - 2 n_up n_dn) / 4
};

/// Exact-diagonalisation model of one cluster at fixed couplings and ensemble.
class EdModel {
 public:
  EdModel(ClusterGeometry geom, HubbardParams params, Ensemble ens, int threads = 1);
  EdModel(ClusterGeometry geom, HubbardParams params, Ensemble ens, std::vector<Spectrum> spectra);

  ThermalObservables observables(double temperature) const { return table_.evaluate(temperature); }
  double witness(double temperature) const { return observables(temperature).witness_e; }

  const ClusterGeometry& geometry() const { return geom_; }
  const HubbardParams& params() const { return params_; }
  const Ensemble& ensemble() const { return ens_; }
  const std::vector<Spectrum>& spectra() const { return spectra_; }

 private:
  ClusterGeometry geom_;
  HubbardParams params_;
  Ensemble ens_;
  std::vector<Spectrum> spectra_;
  ThermalTable table_;
};

/// Exact U = 0 averages from the one-body hopping matrix: Fermi occupations,
/// same-spin Wick contraction, opposite spins independent.
ThermalObservables free_fermion_reference(const ClusterGeometry& geom, double temperature,
                                          double mu, double t = 1.0);

/// One-body hopping adjacency K with K_ij = number of bonds joining i and j.
Eigen::MatrixXd hopping_adjacency(const ClusterGeometry& geom);

}  // namespace hw
