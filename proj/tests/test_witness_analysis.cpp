#include "doctest.h"

#include <cmath>

#include "hubbard_witness/witness_analysis.hpp"
#include "oracles.hpp"

using namespace hw;

namespace {

// plain bisection on the closed-form dimer, independent of find_tc
double dimer_root(double u) {
  double lo = 0.01, hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    (oracle::dimer_canonical(1.0, u, mid).witness < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("find_tc on synthetic witnesses") {
  auto p = find_tc([](double t) { return t - 0.3; }, 0.01, 50.0);
  REQUIRE(p.status == TcStatus::ok);
  CHECK(std::abs(*p.tc - 0.3) < 1e-6);

  p = find_tc([](double t) { return t; }, 0.01, 50.0);
  CHECK(p.status == TcStatus::none);
  CHECK_FALSE(p.tc);

  p = find_tc([](double t) { return t - 100.0; }, 0.01, 50.0);
  CHECK(p.status == TcStatus::unbracketed);
  CHECK_FALSE(p.tc);

  // three crossings: the topmost negative-to-positive one wins
  p = find_tc([](double t) { return (t - 0.1) * (t - 0.5) * (t - 2.0); }, 0.01, 50.0);
  REQUIRE(p.status == TcStatus::ok);
  CHECK(std::abs(*p.tc - 2.0) < 1e-6);

  CHECK_THROWS(find_tc([](double t) { return t; }, 0.0, 1.0));
  CHECK_THROWS(find_tc([](double t) { return t; }, 2.0, 1.0));
}

TEST_CASE("find_tc residual on a real cluster") {
  const auto g = build_lattice(LatticeKind::chain, {4});
  const HubbardParams params{1.0, 4.0, 0.0};
  const auto p = find_tc(g, params, Ensemble::grand_canonical(), 0.01, 50.0);
  REQUIRE(p.status == TcStatus::ok);
  const EdModel m(g, params, Ensemble::grand_canonical());
  CHECK(std::abs(m.witness(*p.tc)) < 1e-8);
  CHECK(m.witness(0.9 * *p.tc) < 0.0);
  CHECK(m.witness(1.1 * *p.tc) > 0.0);
  CHECK(p.t_low <= *p.tc);
  CHECK(*p.tc <= p.t_high);
}

TEST_CASE("dimer canonical tc agrees with the closed-form oracle") {
  const auto g = build_lattice(LatticeKind::chain, {2});
  for (double u : {0.0, 1.0, 4.0, 10.0}) {
    const auto p = find_tc(g, {1.0, u, 0.0}, Ensemble::canonical(), 0.01, 50.0);
    REQUIRE(p.status == TcStatus::ok);
    CHECK(std::abs(*p.tc - dimer_root(u)) < 1e-6);
  }
  // oracle sanity at one temperature
  const EdModel m(g, {1.0, 4.0, 0.0}, Ensemble::canonical());
  const auto o = m.observables(0.8);
  const auto r = oracle::dimer_canonical(1.0, 4.0, 0.8);
  CHECK(std::abs(o.chi_z - r.chi_z) < 1e-12);
  CHECK(std::abs(o.l0_z - r.l0_z) < 1e-12);
}

TEST_CASE("single-point U grid reduces to find_tc") {
  const auto g = build_lattice(LatticeKind::ring, {4});
  const auto curve = tc_vs_u_sweep(g, Ensemble::grand_canonical(), {4.0}, {0.01, 50.0});
  REQUIRE(curve.points.size() == 1);
  const auto p = find_tc(g, {1.0, 4.0, 0.0}, Ensemble::grand_canonical(), 0.01, 50.0);
  REQUIRE(curve.points[0].tc);
  CHECK(*curve.points[0].tc == *p.tc);
  CHECK(curve.geometry == "ring-4");
}

TEST_CASE("sweep results do not depend on thread count") {
  const auto g = build_lattice(LatticeKind::chain, {4});
  const std::vector<double> us{1.0, 2.0, 3.0, 5.0, 8.0};
  const auto a = tc_vs_u_sweep(g, Ensemble::grand_canonical(), us, {0.01, 50.0}, 1.0, 1);
  const auto b = tc_vs_u_sweep(g, Ensemble::grand_canonical(), us, {0.01, 50.0}, 1.0, 3);
  for (std::size_t i = 0; i < us.size(); ++i) {
    CHECK(a.points[i].u == us[i]);
    CHECK(a.points[i].tc == b.points[i].tc);
  }
  CHECK(a.u_max == b.u_max);
  REQUIRE(a.u_max);
  CHECK(*a.u_max > 2.0);
  CHECK(*a.u_max < 5.0);
}

TEST_CASE("canonical and grand-canonical tc agree at large U") {
  const auto g = build_lattice(LatticeKind::chain, {4});
  for (double u : {16.0, 32.0}) {
    const auto can = find_tc(g, {1.0, u, 0.0}, Ensemble::canonical(), 0.01, 50.0);
    const auto gc = find_tc(g, {1.0, u, 0.0}, Ensemble::grand_canonical(), 0.01, 50.0);
    REQUIRE(can.tc);
    REQUIRE(gc.tc);
    CHECK(std::abs(*can.tc / *gc.tc - 1.0) < 0.02);
  }
}

TEST_CASE("thermodynamic extrapolation") {
  CHECK(extrapolate_thermodynamic({{2, 0.5}, {4, 0.5}, {6, 0.5}}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(extrapolate_thermodynamic({{2, 1.5}, {4, 1.25}, {6, 1.0 + 1.0 / 6.0}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  auto quad = [](int n) { return 0.7 - 0.3 / n + 0.2 / (double(n) * n); };
  CHECK(extrapolate_thermodynamic({{2, quad(2)}, {4, quad(4)}, {6, quad(6)}, {8, quad(8)}}) ==
        doctest::Approx(0.7).epsilon(1e-12));
  // linear fit by least squares
  CHECK(extrapolate_thermodynamic({{2, 1.5}, {4, 1.25}, {8, 1.125}}, 1) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS(extrapolate_thermodynamic({{2, 0.5}, {4, 0.5}}));
  CHECK_THROWS(extrapolate_thermodynamic({{2, 0.5}, {2, 0.6}, {4, 0.5}}));
  CHECK_THROWS(extrapolate_thermodynamic({{0, 0.5}, {2, 0.6}, {4, 0.5}}));
  CHECK_THROWS(extrapolate_thermodynamic({{2, 0.5}, {4, 0.6}, {6, 0.5}}, 3));
}

TEST_CASE("eta") {
  CHECK(eta(10.0, 0.4) == doctest::Approx(1.0));
  CHECK(eta(64.0, 0.1) == doctest::Approx(1.6));
  CHECK(eta(10.0, 0.4, 2.0) == doctest::Approx(0.25));
  CHECK_THROWS(eta(0.0, 0.4));
}

TEST_CASE("optimisers and fits") {
  const auto [x, y] = golden_section_max([](double v) { return 3.0 - (v - 2.0) * (v - 2.0); }, 0.0, 5.0);
  CHECK(std::abs(x - 2.0) < 1e-2);
  CHECK(y == doctest::Approx(3.0).epsilon(1e-4));

  const auto [a, b] = linear_fit({1.0, 2.0, 3.0}, {3.0, 5.0, 7.0});
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(2.0));

  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0};
  auto f = [](double v) -> std::optional<double> { return -(v - 2.6) * (v - 2.6); };
  std::vector<std::optional<double>> ys;
  for (double v : xs) ys.push_back(f(v));
  const auto m = refine_grid_maximum(f, xs, ys);
  REQUIRE(m);
  CHECK(std::abs(m->first - 2.6) < 1e-2);
}
