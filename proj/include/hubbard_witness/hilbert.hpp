#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace hw {

using Mask = std::uint32_t;

inline constexpr int kMaxEdSites = 16;

/// Occupation basis of one (n_up, n_dn) sector. Spin-up and spin-down
/// strings are ordered independently; up and down operators commute.
/// Full index k = up_index * dn_states.size() + dn_index.
struct SectorBasis {
  int n_sites = 0;
  int n_up = 0;
  int n_dn = 0;
  std::vector<Mask> up_states;
  std::vector<Mask> dn_states;

  std::size_t dimension() const { return up_states.size() * dn_states.size(); }
  std::size_t index(std::size_t up_index, std::size_t dn_index) const {
    return up_index * dn_states.size() + dn_index;
  }
  Mask up_of(std::size_t k) const { return up_states[k / dn_states.size()]; }
  Mask dn_of(std::size_t k) const { return dn_states[k % dn_states.size()]; }
};

/// All n_sites-bit masks with the given popcount in increasing order.
std::vector<Mask> masks_with_popcount(int n_sites, int count);

SectorBasis enumerate_sector(int n_sites, int n_up, int n_dn);

/// Position of each mask inside an increasing mask list; -1 where absent.
std::vector<int> mask_lookup(int n_sites, const std::vector<Mask>& states);

struct HopResult {
  Mask mask = 0;
  int sign = 1;
};

/// c_i^dagger c_j acting on a single-species occupation string.
/// Empty when j is empty or i is already filled.
std::optional<HopResult> apply_hop(Mask mask, int i, int j);

inline bool occupied(Mask mask, int site) { return (mask >> site) & 1U; }

}  // namespace hw
