#include "hubbard_witness/hilbert.hpp"

#include <stdexcept>
#include <string>

namespace hw {

std::vector<Mask> masks_with_popcount(int n_sites, int count) {
  std::vector<Mask> out;
  if (count == 0) {
    out.push_back(0);
    return out;
  }
  const Mask limit = Mask{1} << n_sites;
  // Gosper's hack: next larger integer with the same popcount.
  Mask m = (Mask{1} << count) - 1;
  while (m < limit) {
    out.push_back(m);
    const Mask c = m & (~m + 1);
    const Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

SectorBasis enumerate_sector(int n_sites, int n_up, int n_dn) {
  if (n_sites < 1 || n_sites > kMaxEdSites) {
    throw std::invalid_argument("sector enumeration supports 1.." + std::to_string(kMaxEdSites) +
                                " sites, got " + std::to_string(n_sites));
  }
  if (n_up < 0 || n_up > n_sites || n_dn < 0 || n_dn > n_sites) {
    throw std::invalid_argument("occupation (" + std::to_string(n_up) + ", " +
                                std::to_string(n_dn) + ") out of range for " +
                                std::to_string(n_sites) + " sites");
  }
  SectorBasis b;
  b.n_sites = n_sites;
  b.n_up = n_up;
  b.n_dn = n_dn;
  b.up_states = masks_with_popcount(n_sites, n_up);
  b.dn_states = n_up == n_dn ? b.up_states : masks_with_popcount(n_sites, n_dn);
  return b;
}

std::vector<int> mask_lookup(int n_sites, const std::vector<Mask>& states) {
  std::vector<int> table(std::size_t{1} << n_sites, -1);
  for (std::size_t k = 0; k < states.size(); ++k) table[states[k]] = static_cast<int>(k);
  return table;
}

std::optional<HopResult> apply_hop(Mask mask, int i, int j) {
  if (i == j) throw std::invalid_argument("apply_hop needs distinct sites");
  if (!occupied(mask, j) || occupied(mask, i)) return std::nullopt;
  const int lo = i < j ? i : j;
  const int hi = i < j ? j : i;
  // Occupied sites strictly between lo and hi.
  const Mask between = ((Mask{1} << hi) - 1) & ~((Mask{2} << lo) - 1);
  const int crossings = std::popcount(mask & between);
  return HopResult{(mask & ~(Mask{1} << j)) | (Mask{1} << i), crossings % 2 ? -1 : 1};
}

}  // namespace hw
