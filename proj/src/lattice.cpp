#include "hubbard_witness/lattice.hpp"

#include <numeric>
#include <stdexcept>

namespace hw {

std::string_view to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::chain: return "chain";
    case LatticeKind::ring: return "ring";
    case LatticeKind::square: return "square";
    case LatticeKind::cubic: return "cubic";
  }
  return "unknown";
}

LatticeKind parse_lattice_kind(std::string_view name) {
  if (name == "chain") return LatticeKind::chain;
  if (name == "ring") return LatticeKind::ring;
  if (name == "square") return LatticeKind::square;
  if (name == "cubic") return LatticeKind::cubic;
  throw std::invalid_argument("unknown lattice kind: " + std::string(name));
}

namespace {

std::size_t expected_rank(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::square: return 2;
    case LatticeKind::cubic: return 3;
    default: return 1;
  }
}

}  // namespace

ClusterGeometry build_lattice(LatticeKind kind, const std::vector<int>& dims) {
  if (dims.size() != expected_rank(kind)) {
    throw std::invalid_argument(std::string(to_string(kind)) + " lattice needs " +
                                std::to_string(expected_rank(kind)) + " dimension(s)");
  }
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("lattice dimensions must be positive");
  }
  if (kind == LatticeKind::ring && dims[0] < 2) {
    throw std::invalid_argument("ring needs at least 2 sites");
  }
  if ((kind == LatticeKind::square || kind == LatticeKind::cubic)) {
    for (int d : dims) {
      if (d < 2) throw std::invalid_argument("periodic lattice dimensions must be >= 2");
    }
  }

  ClusterGeometry g;
  g.kind = kind;
  g.dims = dims;
  g.n_sites = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());

  if (kind == LatticeKind::chain || kind == LatticeKind::ring) {
    const int n = dims[0];
    for (int i = 0; i + 1 < n; ++i) g.bonds.push_back({i, i + 1});
    // The two-site ring is the dimer: its wraparound bond is the same pair.
    if (kind == LatticeKind::ring && n >= 3) g.bonds.push_back({n - 1, 0});
    return g;
  }

  // Site index: x + Lx*(y + Ly*z).
  const int lx = dims[0];
  const int ly = dims[1];
  const int lz = kind == LatticeKind::cubic ? dims[2] : 1;
  auto index = [&](int x, int y, int z) { return x + lx * (y + ly * z); };
  for (int s = 0; s < g.n_sites; ++s) {
    const int x = s % lx;
    const int y = (s / lx) % ly;
    const int z = s / (lx * ly);
    g.bonds.push_back({s, index((x + 1) % lx, y, z)});
    g.bonds.push_back({s, index(x, (y + 1) % ly, z)});
    if (kind == LatticeKind::cubic) g.bonds.push_back({s, index(x, y, (z + 1) % lz)});
  }
  return g;
}

bool ClusterGeometry::bipartite() const {
  std::vector<int> color(static_cast<std::size_t>(n_sites), -1);
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_sites));
  for (const auto& b : bonds) {
    adj[b.from].push_back(b.to);
    adj[b.to].push_back(b.from);
  }
  for (int start = 0; start < n_sites; ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (int nb : adj[s]) {
        if (color[nb] < 0) {
          color[nb] = 1 - color[s];
          stack.push_back(nb);
        } else if (color[nb] == color[s]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::string ClusterGeometry::label() const {
  std::string out(to_string(kind));
  out += '-';
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(dims[i]);
  }
  return out;
}

}  // namespace hw
