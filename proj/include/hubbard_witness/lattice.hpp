#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hw {

enum class LatticeKind { chain, ring, square, cubic };

std::string_view to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(std::string_view name);

/// Directed nearest-neighbour bond. Hermitian partners are never stored.
struct Bond {
  int from = 0;
  int to = 0;
  friend bool operator==(const Bond&, const Bond&) = default;
};

struct ClusterGeometry {
  LatticeKind kind = LatticeKind::chain;
  std::vector<int> dims;
  int n_sites = 0;
  std::vector<Bond> bonds;

  /// Two-coloring check; chains always, rings/tori only with even lengths.
  bool bipartite() const;
  /// Short stable label such as "ring-8" or "square-4x4".
  std::string label() const;
};

/// Builds one directed bond per (site, positive direction). Periodic
/// wraparound in a dimension of length 2 duplicates the bond, giving
/// amplitude-2t hopping, except for the two-site ring which collapses to
/// the dimer.
ClusterGeometry build_lattice(LatticeKind kind, const std::vector<int>& dims);

}  // namespace hw
