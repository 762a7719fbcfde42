#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "hubbard_witness/dqmc.hpp"
#include "hubbard_witness/ed_engine.hpp"
#include "hubbard_witness/hilbert.hpp"
#include "hubbard_witness/lattice.hpp"
#include "hubbard_witness/thermo.hpp"
#include "hubbard_witness/witness_analysis.hpp"

namespace py = pybind11;
using namespace hw;

namespace {

ClusterGeometry lattice(const std::string& kind, const std::vector<int>& dims) {
  return build_lattice(parse_lattice_kind(kind), dims);
}

Ensemble ensemble(const std::string& kind, std::optional<double> mu) {
  return Ensemble{parse_ensemble_kind(kind), mu};
}

py::dict observables_dict(const ThermalObservables& o) {
  py::dict d;
  d["T"] = o.temperature;
  d["chi_z"] = o.chi_z;
  d["l0_z"] = o.l0_z;
  d["witness_e"] = o.witness_e;
  d["mean_filling"] = o.mean_filling;
  d["mean_energy"] = o.mean_energy;
  return d;
}

py::dict estimate_dict(const QmcEstimate& e) {
  py::dict d;
  auto pair = [](const Estimate& x) { return py::make_tuple(x.mean, x.error); };
  d["T"] = e.temperature;
  d["beta"] = e.beta;
  d["chi_z"] = pair(e.chi_z);
  d["l0_z"] = pair(e.l0_z);
  d["witness_e"] = pair(e.witness_e);
  d["filling"] = pair(e.filling);
  d["energy"] = pair(e.energy);
  d["bins"] = e.bins;
  d["acceptance"] = e.acceptance;
  d["negative_weight_count"] = e.negative_weight_count;
  d["stability_warnings"] = e.stability_warnings;
  d["max_stability_deviation"] = e.max_stability_deviation;
  d["warnings"] = e.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hubbard-model thermal entanglement witness: ED, DQMC and T_c analysis";

  py::class_<ClusterGeometry>(m, "ClusterGeometry")
      .def_property_readonly("kind", [](const ClusterGeometry& g) { return std::string(to_string(g.kind)); })
      .def_readonly("dims", &ClusterGeometry::dims)
      .def_readonly("n_sites", &ClusterGeometry::n_sites)
      .def_property_readonly("bonds",
                             [](const ClusterGeometry& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& b : g.bonds) out.emplace_back(b.from, b.to);
                               return out;
                             })
      .def("label", &ClusterGeometry::label)
      .def("__repr__", [](const ClusterGeometry& g) { return "<ClusterGeometry " + g.label() + ">"; });

  m.def("build_lattice", &lattice, py::arg("kind"), py::arg("dims"));

  m.def(
      "enumerate_sector",
      [](int n_sites, int n_up, int n_dn) {
        const auto b = enumerate_sector(n_sites, n_up, n_dn);
        return py::make_tuple(b.up_states, b.dn_states, b.dimension());
      },
      py::arg("n_sites"), py::arg("n_up"), py::arg("n_dn"),
      "Returns (up_states, dn_states, dimension) of one particle-number sector.");

  m.def(
      "apply_hop",
      [](Mask mask, int i, int j) -> std::optional<std::pair<Mask, int>> {
        if (auto r = apply_hop(mask, i, j)) return std::pair{r->mask, r->sign};
        return std::nullopt;
      },
      py::arg("mask"), py::arg("i"), py::arg("j"));

  m.def(
      "sector_hamiltonian",
      [](const ClusterGeometry& g, double t, double u, int n_up, int n_dn) {
        return build_sector_hamiltonian(g, HubbardParams{t, u, 0.0}, enumerate_sector(g.n_sites, n_up, n_dn));
      },
      py::arg("geometry"), py::arg("t"), py::arg("u"), py::arg("n_up"), py::arg("n_dn"));

  m.def(
      "eigenvalues",
      [](const Eigen::MatrixXd& h) { return diagonalize(h).values; }, py::arg("matrix"));

  m.def(
      "thermal_observables",
      [](const ClusterGeometry& g, double t, double u, const std::string& ens, std::optional<double> mu,
         const std::vector<double>& temps) {
        const EdModel model(g, HubbardParams{t, u, 0.0}, ensemble(ens, mu));
        py::list out;
        for (double temp : temps) out.append(observables_dict(model.observables(temp)));
        return out;
      },
      py::arg("geometry"), py::arg("t") = 1.0, py::arg("u") = 0.0, py::arg("ensemble") = "grand_canonical",
      py::arg("mu") = py::none(), py::arg("temperatures") = std::vector<double>{1.0});

  m.def(
      "free_fermion_reference",
      [](const ClusterGeometry& g, double temp, double mu, double t) {
        return observables_dict(free_fermion_reference(g, temp, mu, t));
      },
      py::arg("geometry"), py::arg("T"), py::arg("mu") = 0.0, py::arg("t") = 1.0);

  m.def(
      "find_tc",
      [](const ClusterGeometry& g, double t, double u, const std::string& ens, double t_min, double t_max) {
        const auto p = find_tc(g, HubbardParams{t, u, 0.0}, ensemble(ens, std::nullopt), t_min, t_max);
        return py::make_tuple(p.tc, std::string(to_string(p.status)));
      },
      py::arg("geometry"), py::arg("t") = 1.0, py::arg("u") = 0.0, py::arg("ensemble") = "grand_canonical",
      py::arg("t_min") = 0.01, py::arg("t_max") = 50.0, "Returns (tc or None, status).");

  m.def(
      "tc_vs_u",
      [](const ClusterGeometry& g, const std::string& ens, const std::vector<double>& u_grid, double t_min,
         double t_max, int threads) {
        const auto c = tc_vs_u_sweep(g, ensemble(ens, std::nullopt), u_grid, {t_min, t_max}, 1.0, threads);
        std::vector<std::optional<double>> tcs;
        for (const auto& p : c.points) tcs.push_back(p.tc);
        return py::make_tuple(tcs, c.u_max, c.tc_max);
      },
      py::arg("geometry"), py::arg("ensemble"), py::arg("u_grid"), py::arg("t_min") = 0.01,
      py::arg("t_max") = 50.0, py::arg("threads") = 1, "Returns (tc list, u_max, tc_max).");

  m.def("extrapolate_thermodynamic", &extrapolate_thermodynamic, py::arg("points"), py::arg("order") = 2);
  m.def("eta", &eta, py::arg("u"), py::arg("tc"), py::arg("t") = 1.0);
  m.def("hs_coupling", &hs_coupling, py::arg("u"), py::arg("delta_tau"));

  m.def(
      "run_qmc",
      [](const ClusterGeometry& g, double u, double beta, double delta_tau, int warmup, int sweeps,
         int bin_size, int stabilization, std::uint64_t seed, double t) {
        QmcConfig c;
        c.geometry = g;
        c.t = t;
        c.u = u;
        c.beta = beta;
        c.delta_tau = delta_tau;
        c.warmup_sweeps = warmup;
        c.measure_sweeps = sweeps;
        c.bin_size = bin_size;
        c.stabilization_interval = stabilization;
        c.seed = seed;
        py::gil_scoped_release release;
        const auto e = run_qmc(c);
        py::gil_scoped_acquire acquire;
        return estimate_dict(e);
      },
      py::arg("geometry"), py::arg("u"), py::arg("beta"), py::arg("delta_tau") = 0.125,
      py::arg("warmup") = 500, py::arg("sweeps") = 2000, py::arg("bin_size") = 50,
      py::arg("stabilization") = 8, py::arg("seed") = 1, py::arg("t") = 1.0);
}
