#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hubbard_witness/hilbert.hpp"
#include "hubbard_witness/lattice.hpp"

namespace hw {

/// Hubbard couplings in units where t = 1 unless overridden. `mu` only
/// matters for grand-canonical averages.
struct HubbardParams {
  double t = 1.0;
  double u = 0.0;
  double mu = 0.0;

  void validate() const;
};

struct SectorKey {
  int n_up = 0;
  int n_dn = 0;
  friend bool operator==(const SectorKey&, const SectorKey&) = default;
  friend auto operator<=>(const SectorKey&, const SectorKey&) = default;
};

/// Eigenvalues of one (n_up, n_dn) block together with the
/// occupation-diagonal expectation values of every eigenstate. Eigenvectors
/// are dropped after the observables are formed. Row n of each matrix
/// belongs to eigenvalue n; columns are sites.
struct Spectrum {
  int n_sites = 0;
  SectorKey sector;
  Eigen::VectorXd energies;
  Eigen::MatrixXd density_up;
  Eigen::MatrixXd density_dn;
  Eigen::MatrixXd double_occupancy;

  std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
  int electrons() const { return sector.n_up + sector.n_dn; }
  double sz() const { return 0.5 * (sector.n_up - sector.n_dn); }
};

class EigensolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxSectorDimension = 20000;

/// Dense block of the Hubbard Hamiltonian in the given sector. Diagonal:
/// U times the number of doubly occupied sites. Each directed bond
/// contributes -t c_i^dag c_j plus its Hermitian conjugate per species.
Eigen::MatrixXd build_sector_hamiltonian(const ClusterGeometry& geom, const HubbardParams& params,
                                         const SectorBasis& basis);

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

/// Full symmetric eigendecomposition: Householder reduction to tridiagonal
/// form followed by implicit-shift QR. Eigenvalues ascend; degenerate
/// eigenvectors come in no particular order. Throws
/// std::invalid_argument for non-symmetric input and EigensolverError when
/// the tridiagonal stage fails to converge.
EigenDecomposition diagonalize(const Eigen::MatrixXd& h);

/// Diagonal observables sum_k |psi_n(k)|^2 O(k) for every eigenstate.
Spectrum spectrum_from_eigensystem(const SectorBasis& basis, const EigenDecomposition& eig);

Spectrum solve_sector(const ClusterGeometry& geom, const HubbardParams& params, SectorKey sector);

/// Spectrum of (n_dn, n_up) obtained from (n_up, n_dn) by exchanging species.
Spectrum spin_flipped(const Spectrum& s);

/// Solves the requested sectors, reusing spin-flip partners, optionally in
/// parallel. Output order follows `sectors`.
std::vector<Spectrum> solve_sectors(const ClusterGeometry& geom, const HubbardParams& params,
                                    const std::vector<SectorKey>& sectors, int threads = 1);

// Spectrum cache. Binary, little-endian, versioned; keyed by geometry,
// couplings and sector list. Doubles are stored bitwise so reads are exact.

inline constexpr std::uint32_t kSpectrumCacheVersion = 1;

std::string spectrum_cache_key(const ClusterGeometry& geom, const HubbardParams& params);

void write_spectrum_cache(const std::filesystem::path& path, const std::string& key,
                          const std::vector<Spectrum>& spectra);

/// Returns the stored spectra. Throws std::runtime_error on a version or
/// key mismatch or a truncated file.
std::vector<Spectrum> read_spectrum_cache(const std::filesystem::path& path,
                                          const std::string& expected_key);

}  // namespace hw
