#include "hubbard_witness/ed_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "hubbard_witness/format.hpp"
#include "hubbard_witness/parallel.hpp"

namespace hw {

void HubbardParams::validate() const {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("hopping t must be > 0");
  if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("interaction U must be >= 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("chemical potential must be finite");
}

namespace {

struct Transition {
  int target;
  double amplitude;
};

// Hopping transitions of one species, both directions of every bond.
std::vector<std::vector<Transition>> hopping_table(const ClusterGeometry& geom, double t,
                                                   const std::vector<Mask>& states) {
  const auto lookup = mask_lookup(geom.n_sites, states);
  std::vector<std::vector<Transition>> table(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    for (const Bond& b : geom.bonds) {
      for (auto [i, j] : {std::pair{b.from, b.to}, std::pair{b.to, b.from}}) {
        if (auto hop = apply_hop(states[k], i, j)) {
          table[k].push_back({lookup[hop->mask], -t * hop->sign});
        }
      }
    }
  }
  return table;
}

}  // namespace

Eigen::MatrixXd build_sector_hamiltonian(const ClusterGeometry& geom, const HubbardParams& params,
                                         const SectorBasis& basis) {
  if (basis.n_sites != geom.n_sites) {
    throw std::invalid_argument("basis and geometry disagree on the number of sites");
  }
  const std::size_t dim = basis.dimension();
  if (dim > kMaxSectorDimension) {
    throw std::invalid_argument("sector dimension " + std::to_string(dim) + " exceeds limit " +
                                std::to_string(kMaxSectorDimension));
  }
  const auto n_up_states = basis.up_states.size();
  const auto n_dn_states = basis.dn_states.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));

  for (std::size_t a = 0; a < n_up_states; ++a) {
    for (std::size_t b = 0; b < n_dn_states; ++b) {
      const auto k = static_cast<Eigen::Index>(basis.index(a, b));
      h(k, k) = params.u * std::popcount(basis.up_states[a] & basis.dn_states[b]);
    }
  }
  const auto up_hops = hopping_table(geom, params.t, basis.up_states);
  const auto dn_hops = hopping_table(geom, params.t, basis.dn_states);
  for (std::size_t a = 0; a < n_up_states; ++a) {
    for (const auto& tr : up_hops[a]) {
      for (std::size_t b = 0; b < n_dn_states; ++b) {
        h(static_cast<Eigen::Index>(basis.index(tr.target, b)),
          static_cast<Eigen::Index>(basis.index(a, b))) += tr.amplitude;
      }
    }
  }
  for (std::size_t b = 0; b < n_dn_states; ++b) {
    for (const auto& tr : dn_hops[b]) {
      for (std::size_t a = 0; a < n_up_states; ++a) {
        h(static_cast<Eigen::Index>(basis.index(a, tr.target)),
          static_cast<Eigen::Index>(basis.index(a, b))) += tr.amplitude;
      }
    }
  }
  return h;
}

EigenDecomposition diagonalize(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize needs a square matrix");
  const Eigen::Index n = h.rows();
  EigenDecomposition out;
  if (n == 0) return out;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "matrix is not symmetric (max |H - H^T| = " << asym << ")";
    throw std::invalid_argument(msg.str());
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge for a " << n << "x" << n
        << " matrix within " << Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations
        << " x n implicit QR iterations";
    throw EigensolverError(msg.str());
  }
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

Spectrum spectrum_from_eigensystem(const SectorBasis& basis, const EigenDecomposition& eig) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  const int n = basis.n_sites;
  Eigen::MatrixXd occ_up(dim, n), occ_dn(dim, n), occ_double(dim, n);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Mask up = basis.up_of(static_cast<std::size_t>(k));
    const Mask dn = basis.dn_of(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
      occ_up(k, i) = occupied(up, i);
      occ_dn(k, i) = occupied(dn, i);
      occ_double(k, i) = occupied(up & dn, i);
    }
  }
  const Eigen::MatrixXd weights = eig.vectors.cwiseAbs2();
  Spectrum s;
  s.n_sites = n;
  s.sector = {basis.n_up, basis.n_dn};
  s.energies = eig.values;
  s.density_up.noalias() = weights.transpose() * occ_up;
  s.density_dn.noalias() = weights.transpose() * occ_dn;
  s.double_occupancy.noalias() = weights.transpose() * occ_double;
  return s;
}

Spectrum solve_sector(const ClusterGeometry& geom, const HubbardParams& params, SectorKey sector) {
  params.validate();
  const auto basis = enumerate_sector(geom.n_sites, sector.n_up, sector.n_dn);
  return spectrum_from_eigensystem(basis, diagonalize(build_sector_hamiltonian(geom, params, basis)));
}

Spectrum spin_flipped(const Spectrum& s) {
  Spectrum out = s;
  out.sector = {s.sector.n_dn, s.sector.n_up};
  std::swap(out.density_up, out.density_dn);
  return out;
}

std::vector<Spectrum> solve_sectors(const ClusterGeometry& geom, const HubbardParams& params,
                                    const std::vector<SectorKey>& sectors, int threads) {
  params.validate();
  // Representative with n_up >= n_dn; the partner follows by spin flip.
  std::map<SectorKey, std::size_t> slot;
  std::vector<SectorKey> work;
  for (const auto& key : sectors) {
    const SectorKey rep{std::max(key.n_up, key.n_dn), std::min(key.n_up, key.n_dn)};
    if (slot.emplace(rep, work.size()).second) work.push_back(rep);
  }
  // Largest blocks first so they do not trail at the end of the pool.
  std::vector<std::size_t> order(work.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto dim = [&](const SectorKey& k) {
    return static_cast<double>(masks_with_popcount(geom.n_sites, k.n_up).size()) *
           static_cast<double>(masks_with_popcount(geom.n_sites, k.n_dn).size());
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dim(work[a]) > dim(work[b]); });

  std::vector<Spectrum> solved(work.size());
  parallel_for(order.size(), threads,
               [&](std::size_t i) { solved[order[i]] = solve_sector(geom, params, work[order[i]]); });

  std::vector<Spectrum> out;
  out.reserve(sectors.size());
  for (const auto& key : sectors) {
    const SectorKey rep{std::max(key.n_up, key.n_dn), std::min(key.n_up, key.n_dn)};
    const Spectrum& s = solved[slot.at(rep)];
    out.push_back(rep == key ? s : spin_flipped(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum cache

namespace {

constexpr char kCacheMagic[8] = {'H', 'W', 'S', 'P', 'E', 'C', '\0', '\0'};

template <class T>
void put(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little);
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw std::runtime_error("spectrum cache is truncated");
  }
  return value;
}

void put_block(std::ostream& os, const double* data, std::size_t count) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void get_block(std::istream& is, double* data, std::size_t count) {
  if (!is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)))) {
    throw std::runtime_error("spectrum cache is truncated");
  }
}

}  // namespace

std::string spectrum_cache_key(const ClusterGeometry& geom, const HubbardParams& params) {
  return geom.label() + ";t=" + format_double(params.t) + ";u=" + format_double(params.u);
}

void write_spectrum_cache(const std::filesystem::path& path, const std::string& key,
                          const std::vector<Spectrum>& spectra) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(kCacheMagic, sizeof(kCacheMagic));
  put<std::uint32_t>(os, kSpectrumCacheVersion);
  put<std::uint64_t>(os, key.size());
  os.write(key.data(), static_cast<std::streamsize>(key.size()));
  put<std::uint64_t>(os, spectra.size());
  for (const auto& s : spectra) {
    put<std::int32_t>(os, s.n_sites);
    put<std::int32_t>(os, s.sector.n_up);
    put<std::int32_t>(os, s.sector.n_dn);
    put<std::uint64_t>(os, s.size());
    const std::size_t cells = s.size() * static_cast<std::size_t>(s.n_sites);
    put_block(os, s.energies.data(), s.size());
    put_block(os, s.density_up.data(), cells);
    put_block(os, s.density_dn.data(), cells);
    put_block(os, s.double_occupancy.data(), cells);
  }
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

std::vector<Spectrum> read_spectrum_cache(const std::filesystem::path& path,
                                          const std::string& expected_key) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[sizeof(kCacheMagic)];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path.string() + " is not a spectrum cache");
  }
  if (const auto version = get<std::uint32_t>(is); version != kSpectrumCacheVersion) {
    throw std::runtime_error("unsupported spectrum cache version " + std::to_string(version));
  }
  std::string key(get<std::uint64_t>(is), '\0');
  if (!is.read(key.data(), static_cast<std::streamsize>(key.size()))) {
    throw std::runtime_error("spectrum cache is truncated");
  }
  if (key != expected_key) {
    throw std::runtime_error("spectrum cache key mismatch: stored '" + key + "', wanted '" +
                             expected_key + "'");
  }
  std::vector<Spectrum> out(get<std::uint64_t>(is));
  for (auto& s : out) {
    s.n_sites = get<std::int32_t>(is);
    s.sector.n_up = get<std::int32_t>(is);
    s.sector.n_dn = get<std::int32_t>(is);
    const auto dim = static_cast<Eigen::Index>(get<std::uint64_t>(is));
    s.energies.resize(dim);
    s.density_up.resize(dim, s.n_sites);
    s.density_dn.resize(dim, s.n_sites);
    s.double_occupancy.resize(dim, s.n_sites);
    const std::size_t cells = static_cast<std::size_t>(dim) * static_cast<std::size_t>(s.n_sites);
    get_block(is, s.energies.data(), static_cast<std::size_t>(dim));
    get_block(is, s.density_up.data(), cells);
    get_block(is, s.density_dn.data(), cells);
    get_block(is, s.double_occupancy.data(), cells);
  }
  return out;
}

}  // namespace hw
