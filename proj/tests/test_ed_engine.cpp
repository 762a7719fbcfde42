#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "hubbard_witness/ed_engine.hpp"

using namespace hw;

namespace {

std::vector<double> sorted(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < tol);
}

}  // namespace

TEST_CASE("dimer (1,1) spectrum") {
  const auto dimer = build_lattice(LatticeKind::chain, {2});
  for (double u : {0.0, 4.0, 8.0}) {
    const auto h = build_sector_hamiltonian(dimer, {1.0, u, 0.0}, enumerate_sector(2, 1, 1));
    const double r = std::sqrt(u * u + 16.0);
    std::vector<double> want{0.0, u, 0.5 * (u - r), 0.5 * (u + r)};
    std::sort(want.begin(), want.end());
    check_close(sorted(diagonalize(h).values), want, 1e-10);
  }
}

TEST_CASE("hamiltonian structure") {
  const auto chain = build_lattice(LatticeKind::chain, {4});
  const auto basis = enumerate_sector(4, 2, 2);
  const auto h0 = build_sector_hamiltonian(chain, {1.0, 0.0, 0.0}, basis);
  CHECK(h0.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((h0 - h0.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const auto h = build_sector_hamiltonian(chain, {1.0, 3.0, 0.0}, basis);
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const int doubles = std::popcount(basis.up_of(k) & basis.dn_of(k));
    CHECK(h(k, k) == doctest::Approx(3.0 * doubles));
  }
  // off-diagonal magnitudes are t
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (i != j && h(i, j) != 0.0) CHECK(std::abs(h(i, j)) == doctest::Approx(1.0));
}

TEST_CASE("single particle on a 4-site chain") {
  const auto chain = build_lattice(LatticeKind::chain, {4});
  const auto h = build_sector_hamiltonian(chain, {1.0, 5.0, 0.0}, enumerate_sector(4, 1, 0));
  std::vector<double> want;
  for (int k = 1; k <= 4; ++k) want.push_back(-2.0 * std::cos(k * std::numbers::pi / 5.0));
  std::sort(want.begin(), want.end());
  check_close(sorted(diagonalize(h).values), want, 1e-12);
}

TEST_CASE("diagonalize: identity, dimer at U=0, reconstruction") {
  const auto id = diagonalize(Eigen::MatrixXd::Identity(5, 5));
  for (int i = 0; i < 5; ++i) CHECK(id.values(i) == doctest::Approx(1.0));

  const auto dimer = build_lattice(LatticeKind::chain, {2});
  const auto e = diagonalize(build_sector_hamiltonian(dimer, {1.0, 0.0, 0.0}, enumerate_sector(2, 1, 1)));
  check_close(sorted(e.values), {-2.0, 0.0, 0.0, 2.0}, 1e-12);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) a(i, j) = g(rng);
  const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
  const auto d = diagonalize(h);
  const double scale = d.values.cwiseAbs().maxCoeff();
  const Eigen::MatrixXd back = d.vectors * d.values.asDiagonal() * d.vectors.transpose();
  CHECK((back - h).cwiseAbs().maxCoeff() < 1e-9 * scale);
  CHECK(std::is_sorted(d.values.data(), d.values.data() + d.values.size()));
  for (int k = 0; k < 50; ++k) CHECK(std::abs(d.vectors.col(k).norm() - 1.0) < 1e-10);
  CHECK(((d.vectors.transpose() * d.vectors) - Eigen::MatrixXd::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("diagonalize rejects bad input") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3);
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonalize(h), std::invalid_argument);
  CHECK_THROWS_AS(diagonalize(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("sector dimension guard") {
  const auto ring = build_lattice(LatticeKind::ring, {16});
  CHECK_THROWS_AS(build_sector_hamiltonian(ring, {1.0, 4.0, 0.0}, enumerate_sector(16, 8, 8)),
                  std::invalid_argument);
}

TEST_CASE("particle-hole symmetry on bipartite clusters") {
  const double u = 3.0;
  for (const auto& g : {build_lattice(LatticeKind::chain, {3}), build_lattice(LatticeKind::chain, {4}),
                        build_lattice(LatticeKind::ring, {4}), build_lattice(LatticeKind::square, {2, 2})}) {
    const int n = g.n_sites;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        const auto s = solve_sector(g, {1.0, u, 0.0}, {a, b});
        const auto p = solve_sector(g, {1.0, u, 0.0}, {n - a, n - b});
        auto shifted = sorted(s.energies);
        for (auto& e : shifted) e += u * (n - a - b);
        check_close(shifted, sorted(p.energies), 1e-8);
      }
  }
}

TEST_CASE("spin-flip symmetry and spectrum observables") {
  const auto g = build_lattice(LatticeKind::ring, {5});
  const HubbardParams p{1.0, 4.0, 0.0};
  const auto s = solve_sector(g, p, {3, 1});
  const auto f = solve_sector(g, p, {1, 3});
  check_close(sorted(s.energies), sorted(f.energies), 1e-10);

  const auto flipped = spin_flipped(s);
  CHECK(flipped.sector == SectorKey{1, 3});
  check_close(sorted(flipped.energies), sorted(f.energies), 1e-10);

  for (std::size_t n = 0; n < s.size(); ++n) {
    CHECK(s.density_up.row(n).sum() == doctest::Approx(3.0));
    CHECK(s.density_dn.row(n).sum() == doctest::Approx(1.0));
    for (int i = 0; i < 5; ++i) {
      CHECK(s.double_occupancy(n, i) <= std::min(s.density_up(n, i), s.density_dn(n, i)) + 1e-12);
      CHECK(s.double_occupancy(n, i) >= -1e-14);
    }
  }
}

TEST_CASE("solve_sectors matches direct solves in any order") {
  const auto g = build_lattice(LatticeKind::chain, {4});
  const HubbardParams p{1.0, 2.0, 0.0};
  const std::vector<SectorKey> keys{{1, 3}, {2, 2}, {3, 1}, {0, 0}, {4, 2}};
  const auto all = solve_sectors(g, p, keys, 2);
  REQUIRE(all.size() == keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    CHECK(all[i].sector == keys[i]);
    const auto direct = solve_sector(g, p, keys[i]);
    check_close(sorted(all[i].energies), sorted(direct.energies), 1e-10);
    CHECK(all[i].density_up.colwise().sum().sum() == doctest::Approx(direct.density_up.colwise().sum().sum()));
  }
}

TEST_CASE("spectrum cache round trip") {
  const auto g = build_lattice(LatticeKind::ring, {4});
  const HubbardParams p{1.0, 4.0, 0.0};
  const auto spectra = solve_sectors(g, p, {{2, 2}, {1, 2}});
  const auto path = std::filesystem::temp_directory_path() / "hw_test_spectrum.bin";
  const auto key = spectrum_cache_key(g, p);
  write_spectrum_cache(path, key, spectra);
  const auto back = read_spectrum_cache(path, key);
  REQUIRE(back.size() == spectra.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].sector == spectra[i].sector);
    CHECK(back[i].energies == spectra[i].energies);
    CHECK(back[i].density_up == spectra[i].density_up);
    CHECK(back[i].density_dn == spectra[i].density_dn);
    CHECK(back[i].double_occupancy == spectra[i].double_occupancy);
  }
  CHECK_THROWS(read_spectrum_cache(path, spectrum_cache_key(g, {1.0, 5.0, 0.0})));
  std::filesystem::resize_file(path, 40);
  CHECK_THROWS(read_spectrum_cache(path, key));
  std::filesystem::remove(path);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(HubbardParams{0.0, 1.0, 0.0}.validate());
  CHECK_THROWS(HubbardParams{1.0, -1.0, 0.0}.validate());
  CHECK_NOTHROW(HubbardParams{1.0, 0.0, 0.0}.validate());
}
