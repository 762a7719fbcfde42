#include "hubbard_witness/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace hw {

std::string_view to_string(EnsembleKind kind) {
  return kind == EnsembleKind::canonical_half_filled ? "canonical" : "grand_canonical";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "canonical" || name == "canonical_half_filled") {
    return EnsembleKind::canonical_half_filled;
  }
  if (name == "grand_canonical" || name == "grand-canonical" || name == "gc") {
    return EnsembleKind::grand_canonical;
  }
  throw std::invalid_argument("unknown ensemble: " + std::string(name));
}

std::vector<SectorKey> required_sectors(int n_sites, const Ensemble& ens) {
  std::vector<SectorKey> out;
  for (int up = 0; up <= n_sites; ++up) {
    for (int dn = 0; dn <= n_sites; ++dn) {
      if (ens.kind == EnsembleKind::canonical_half_filled && up + dn != n_sites) continue;
      out.push_back({up, dn});
    }
  }
  return out;
}

namespace {

void check_temperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("temperature must be positive and finite");
  }
}

}  // namespace

ThermalTable::ThermalTable(std::span<const Spectrum> spectra, double mu) : mu_(mu) {
  if (spectra.empty()) throw std::invalid_argument("no spectra supplied");
  n_sites_ = spectra.front().n_sites;
  std::size_t total = 0;
  for (const auto& s : spectra) total += s.size();
  energy_.reserve(total);
  electrons_.reserve(total);
  mz_.reserve(total);
  moment_.reserve(total);
  shift_ = std::numeric_limits<double>::infinity();
  for (const auto& s : spectra) {
    if (s.n_sites != n_sites_) throw std::invalid_argument("spectra from different cluster sizes");
    const Eigen::VectorXd moment =
        0.25 * (s.density_up + s.density_dn - 2.0 * s.double_occupancy).rowwise().sum();
    for (std::size_t n = 0; n < s.size(); ++n) {
      const auto idx = static_cast<Eigen::Index>(n);
      energy_.push_back(s.energies(idx));
      electrons_.push_back(s.electrons());
      mz_.push_back(s.sz());
      moment_.push_back(moment(idx));
      shift_ = std::min(shift_, s.energies(idx) - mu_ * s.electrons());
    }
  }
}

ThermalObservables ThermalTable::evaluate(double temperature) const {
  check_temperature(temperature);
  const double beta = 1.0 / temperature;
  double z = 0.0, m1 = 0.0, m2 = 0.0, ne = 0.0, en = 0.0, l0 = 0.0;
  for (std::size_t n = 0; n < energy_.size(); ++n) {
    const double w = std::exp(-beta * (energy_[n] - mu_ * electrons_[n] - shift_));
    z += w;
    m1 += w * mz_[n];
    m2 += w * mz_[n] * mz_[n];
    ne += w * electrons_[n];
    en += w * energy_[n];
    l0 += w * moment_[n];
  }
  const double inv_n = 1.0 / n_sites_;
  m1 /= z;
  m2 /= z;
  ThermalObservables o;
  o.temperature = temperature;
  o.chi_z = beta * std::max(0.0, m2 - m1 * m1) * inv_n;
  o.l0_z = l0 / z * inv_n;
  o.witness_e = witness_value(o.chi_z, o.l0_z, temperature);
  o.mean_filling = ne / z * inv_n;
  o.mean_energy = en / z * inv_n;
  return o;
}

ThermalObservables thermal_observables(std::span<const Spectrum> spectra, const Ensemble& ens,
                                       const HubbardParams& params, double temperature) {
  check_temperature(temperature);
  if (spectra.empty()) throw std::invalid_argument("no spectra supplied");
  const auto wanted = required_sectors(spectra.front().n_sites, ens);
  std::set<SectorKey> expected(wanted.begin(), wanted.end());
  std::set<SectorKey> given;
  for (const auto& s : spectra) {
    if (!given.insert(s.sector).second) throw std::invalid_argument("duplicate sector spectrum");
  }
  if (given != expected) {
    throw std::invalid_argument("spectra do not match the sectors required by the " +
                                std::string(to_string(ens.kind)) + " ensemble");
  }
  return ThermalTable(spectra, ens.chemical_potential(params)).evaluate(temperature);
}

EdModel::EdModel(ClusterGeometry geom, HubbardParams params, Ensemble ens, int threads)
    : EdModel(geom, params, ens,
              solve_sectors(geom, params, required_sectors(geom.n_sites, ens), threads)) {}

EdModel::EdModel(ClusterGeometry geom, HubbardParams params, Ensemble ens,
                 std::vector<Spectrum> spectra)
    : geom_(std::move(geom)),
      params_(params),
      ens_(ens),
      spectra_(std::move(spectra)),
      table_(spectra_, ens_.chemical_potential(params_)) {}

Eigen::MatrixXd hopping_adjacency(const ClusterGeometry& geom) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(geom.n_sites, geom.n_sites);
  for (const auto& b : geom.bonds) {
    k(b.from, b.to) += 1.0;
    k(b.to, b.from) += 1.0;
  }
  return k;
}

ThermalObservables free_fermion_reference(const ClusterGeometry& geom, double temperature,
                                          double mu, double t) {
  check_temperature(temperature);
  const double beta = 1.0 / temperature;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-t * hopping_adjacency(geom));
  const Eigen::VectorXd& eps = es.eigenvalues();
  const Eigen::MatrixXd& vecs = es.eigenvectors();
  Eigen::VectorXd f(eps.size());
  for (Eigen::Index k = 0; k < eps.size(); ++k) {
    // Numerically safe logistic.
    const double x = beta * (eps(k) - mu);
    f(k) = x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
  }
  // One-body density matrix <c_i^dag c_j> per spin species.
  const Eigen::MatrixXd rho = vecs * f.asDiagonal() * vecs.transpose();
  const int n = geom.n_sites;
  const Eigen::VectorXd diag = rho.diagonal();

  // Same-spin density covariance: rho_ii delta_ij - rho_ij rho_ji. Both
  // species contribute equally and are uncorrelated with each other.
  const double var_per_species = diag.sum() - rho.cwiseAbs2().sum();
  ThermalObservables o;
  o.temperature = temperature;
  o.chi_z = beta * 0.25 * 2.0 * var_per_species / n;
  o.l0_z = 0.25 * (2.0 * diag.sum() - 2.0 * diag.squaredNorm()) / n;
  o.witness_e = witness_value(o.chi_z, o.l0_z, temperature);
  o.mean_filling = 2.0 * diag.sum() / n;
  o.mean_energy = 2.0 * eps.dot(f) / n;
  return o;
}

}  // namespace hw
