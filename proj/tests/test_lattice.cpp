#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "hubbard_witness/lattice.hpp"

using namespace hw;

namespace {

std::vector<std::pair<int, int>> pairs(const ClusterGeometry& g) {
  std::vector<std::pair<int, int>> out;
  for (const auto& b : g.bonds) out.emplace_back(b.from, b.to);
  return out;
}

}  // namespace

TEST_CASE("chain and ring bond lists") {
  const auto chain = build_lattice(LatticeKind::chain, {4});
  CHECK(chain.n_sites == 4);
  CHECK(pairs(chain) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});

  const auto ring = build_lattice(LatticeKind::ring, {4});
  CHECK(pairs(ring) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}});

  // two-site ring is the dimer
  const auto dimer = build_lattice(LatticeKind::ring, {2});
  CHECK(pairs(dimer) == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(dimer.label() == "ring-2");
}

TEST_CASE("2x2 square keeps wraparound duplicates") {
  const auto sq = build_lattice(LatticeKind::square, {2, 2});
  CHECK(sq.n_sites == 4);
  REQUIRE(sq.bonds.size() == 8);
  std::multiset<std::pair<int, int>> got;
  for (auto p : pairs(sq)) got.insert(p);
  const std::multiset<std::pair<int, int>> want{{0, 1}, {1, 0}, {2, 3}, {3, 2}, {0, 2}, {2, 0}, {1, 3}, {3, 1}};
  CHECK(got == want);
  CHECK(sq.label() == "square-2x2");
}

TEST_CASE("bond-count formulas for dims 2..8") {
  for (int a = 2; a <= 8; ++a) {
    CHECK(build_lattice(LatticeKind::chain, {a}).bonds.size() == std::size_t(a - 1));
    CHECK(build_lattice(LatticeKind::ring, {a}).bonds.size() == std::size_t(a == 2 ? 1 : a));
    for (int b = 2; b <= 8; ++b) {
      const auto sq = build_lattice(LatticeKind::square, {a, b});
      CHECK(sq.bonds.size() == std::size_t(2 * a * b));
      for (int c = 2; c <= 4; ++c) {
        CHECK(build_lattice(LatticeKind::cubic, {a, b, c}).bonds.size() == std::size_t(3 * a * b * c));
      }
    }
  }
}

TEST_CASE("bond endpoints are distinct sites in range") {
  for (const auto& g : {build_lattice(LatticeKind::chain, {7}), build_lattice(LatticeKind::ring, {5}),
                        build_lattice(LatticeKind::square, {3, 4}),
                        build_lattice(LatticeKind::cubic, {2, 3, 2})}) {
    for (const auto& b : g.bonds) {
      CHECK(b.from != b.to);
      CHECK(b.from >= 0);
      CHECK(b.to < g.n_sites);
    }
  }
}

TEST_CASE("ring sites have coordination two") {
  for (int n = 3; n <= 8; ++n) {
    const auto ring = build_lattice(LatticeKind::ring, {n});
    std::vector<int> degree(n, 0);
    for (const auto& b : ring.bonds) {
      ++degree[b.from];
      ++degree[b.to];
    }
    CHECK(std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; }));
  }
}

TEST_CASE("square site indexing is x-fastest") {
  const auto sq = build_lattice(LatticeKind::square, {3, 3});
  // site 4 = (1,1): neighbours +x -> 5, +y -> 7
  std::set<std::pair<int, int>> got;
  for (auto p : pairs(sq)) got.insert(p);
  CHECK(got.count({4, 5}) == 1);
  CHECK(got.count({4, 7}) == 1);
  CHECK(got.count({2, 0}) == 1);  // x wrap
  CHECK(got.count({6, 0}) == 1);  // y wrap
}

TEST_CASE("invalid geometries are rejected") {
  CHECK_THROWS_AS(build_lattice(LatticeKind::chain, {0}), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(LatticeKind::ring, {1}), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(LatticeKind::square, {4}), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(LatticeKind::square, {1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(LatticeKind::cubic, {2, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(parse_lattice_kind("hexagonal"), std::invalid_argument);
}

TEST_CASE("bipartiteness") {
  CHECK(build_lattice(LatticeKind::chain, {5}).bipartite());
  CHECK(build_lattice(LatticeKind::ring, {6}).bipartite());
  CHECK_FALSE(build_lattice(LatticeKind::ring, {5}).bipartite());
  CHECK(build_lattice(LatticeKind::square, {4, 4}).bipartite());
}
