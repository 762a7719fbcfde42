#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "hubbard_witness/cli/commands.hpp"
#include "hubbard_witness/cli/config.hpp"
#include "hubbard_witness/cli/csv.hpp"
#include "hubbard_witness/cli/plot.hpp"
#include "hubbard_witness/format.hpp"
#include "hubbard_witness/thermo.hpp"

using namespace hw;
using namespace hw::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hw_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run(RunConfig cfg, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int rc = run_command(cfg, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::string meta(const CsvTable& t, const std::string& key) {
  for (const auto& [k, v] : t.metadata)
    if (k == key) return v;
  return {};
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0.5,1,2") == std::vector<double>{0.5, 1.0, 2.0});
  const auto lin = parse_grid("0:8:2");
  CHECK(lin == std::vector<double>{0, 2, 4, 6, 8});
  const auto lg = parse_grid("log:0.1:10:3");
  REQUIRE(lg.size() == 3);
  CHECK(lg[1] == doctest::Approx(1.0));
  CHECK(lg[2] == 10.0);
  CHECK(parse_grid("").empty());
  CHECK_THROWS(parse_grid("1,abc"));
  CHECK(parse_int_list("2,4,6") == std::vector<int>{2, 4, 6});
  CHECK(parse_dims("4x4") == std::vector<int>{4, 4});
  CHECK(parse_dims("8") == std::vector<int>{8});
}

TEST_CASE("format round trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 5000; ++i) {
    const double x = std::ldexp(mant(rng), expo(rng));
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_double(" 2.5 ") == 2.5);
  CHECK_THROWS(parse_double("2.5x"));
}

TEST_CASE("CSV round trip") {
  CsvTable t;
  t.metadata = {{"lattice", "ring"}, {"note", "a = b"}};
  t.columns = {"T", "value", "status"};
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int i = 0; i < 200; ++i) t.rows.push_back({g(rng), g(rng) * 1e-290, std::string(i % 2 ? "ok" : "none")});
  t.rows.push_back({std::numeric_limits<double>::quiet_NaN(), 0.0, std::string("none")});

  std::stringstream ss;
  write_csv(ss, t);
  const auto back = read_csv(ss);
  CHECK(back.metadata == t.metadata);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t r = 0; r + 1 < t.rows.size(); ++r) {
    CHECK(std::get<double>(back.rows[r][0]) == std::get<double>(t.rows[r][0]));
    CHECK(std::get<double>(back.rows[r][1]) == std::get<double>(t.rows[r][1]));
    CHECK(std::get<std::string>(back.rows[r][2]) == std::get<std::string>(t.rows[r][2]));
  }
  CHECK(std::isnan(back.number(t.rows.size() - 1, "T")));
  CHECK_THROWS(back.column("missing"));
}

TEST_CASE("validation lists every problem at once") {
  RunConfig c;
  c.command = "witness-scan";
  c.lattice = "hexagonal";
  c.temps = "";
  c.t = -1.0;
  c.threads = 0;
  ResolvedConfig r;
  const auto errors = validate(c, r);
  CHECK(errors.size() >= 5);  // lattice, temps, t, threads, output
  std::string all;
  for (const auto& e : errors) all += e + "\n";
  CHECK(all.find("lattice") != std::string::npos);
  CHECK(all.find("temps") != std::string::npos);
  CHECK(all.find("t:") != std::string::npos);
  CHECK(all.find("threads") != std::string::npos);
  CHECK(all.find("output") != std::string::npos);

  std::string err;
  CHECK(run(c, nullptr, &err) != 0);
  CHECK(err.find("problems") != std::string::npos);
}

TEST_CASE("empty temperature grid fails") {
  RunConfig c;
  c.command = "witness-scan";
  c.temps = "";
  c.output = scratch("empty.csv").string();
  CHECK(run(c) != 0);
}

TEST_CASE("ED witness scan writes one CSV per U with metadata") {
  RunConfig c;
  c.command = "witness-scan";
  c.lattice = "chain";
  c.dims = "4";
  c.u = "0,4,8";
  c.temps = "log:0.05:10:16";
  c.output = scratch("scan.csv").string();
  REQUIRE(run(c) == 0);
  for (double u : {0.0, 4.0, 8.0}) {
    const auto t = read_csv(fs::path(per_u_path(c.output, u, true)));
    CHECK(t.columns == std::vector<std::string>{"T", "chi_z", "l0_z", "witness_e", "chi_total"});
    CHECK(t.rows.size() == 16);
    CHECK(meta(t, "U") == format_double(u));
    CHECK(meta(t, "seed") == "1");
    CHECK(meta(t, "version") == HW_VERSION);
    CHECK(meta(t, "method") == "ed");
    const EdModel m(build_lattice(LatticeKind::chain, {4}), {1.0, u, 0.0}, Ensemble::grand_canonical());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      CHECK(t.number(r, "witness_e") == m.witness(t.number(r, "T")));
      CHECK(t.number(r, "chi_total") == doctest::Approx(3.0 * t.number(r, "chi_z")));
    }
  }
}

TEST_CASE("QMC witness scan adds error columns and is byte-identical on rerun") {
  RunConfig c;
  c.command = "witness-scan";
  c.method = "qmc";
  c.lattice = "ring";
  c.dims = "4";
  c.u = "0";
  c.temps = "0.5,1";
  c.warmup = 10;
  c.sweeps = 40;
  c.bin_size = 10;
  c.output = scratch("qmc_scan.csv").string();
  REQUIRE(run(c) == 0);
  const std::string first = slurp(c.output);
  const auto t = read_csv(fs::path(c.output));
  for (const char* col : {"err_chi_z", "err_l0_z", "err_witness_e"}) CHECK_NOTHROW(t.column(col));
  CHECK(t.columns[0] == "T");
  CHECK(t.columns[4] == "err_chi_z");
  // U = 0 matches the free-fermion oracle column by column
  const auto g = build_lattice(LatticeKind::ring, {4});
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto ff = free_fermion_reference(g, t.number(r, "T"), 0.0);
    CHECK(std::abs(t.number(r, "chi_z") - ff.chi_z) <= 3.0 * t.number(r, "err_chi_z") + 1e-9);
    CHECK(std::abs(t.number(r, "l0_z") - ff.l0_z) <= 3.0 * t.number(r, "err_l0_z") + 1e-9);
    CHECK(std::abs(t.number(r, "witness_e") - ff.witness_e) <= 3.0 * t.number(r, "err_witness_e") + 1e-9);
  }
  REQUIRE(run(c) == 0);
  CHECK(slurp(c.output) == first);
}

TEST_CASE("qmc-run writes estimates, bracket metadata and a log") {
  RunConfig c;
  c.command = "qmc-run";
  c.lattice = "ring";
  c.dims = "4";
  c.u = "4";
  c.temps = "0.25,0.4,1,2";
  c.warmup = 20;
  c.sweeps = 200;
  c.bin_size = 20;
  c.output = scratch("qmc_run.csv").string();
  c.log = scratch("qmc_run.log").string();
  fs::remove(c.log);
  std::string out;
  REQUIRE(run(c, &out) == 0);
  const auto t = read_csv(fs::path(c.output));
  CHECK(t.rows.size() == 4);
  CHECK_FALSE(meta(t, "tc_bracket").empty());
  CHECK(t.number(0, "negative_weights") == 0.0);
  const std::string log = slurp(c.log);
  CHECK(log.find("\nT,bin,mz,mz2,l0,filling,energy\n") != std::string::npos);
}

TEST_CASE("tc-vs-u: odd cluster, single point, threads") {
  RunConfig c;
  c.command = "tc-vs-u";
  c.lattice = "chain";
  c.dims = "3";
  c.u = "0";
  c.output = scratch("tc3.csv").string();
  REQUIRE(run(c) == 0);
  auto t = read_csv(fs::path(c.output));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.columns == std::vector<std::string>{"U", "Tc", "status"});
  CHECK(std::get<std::string>(t.rows[0][2]) == "none");

  c.dims = "4";
  c.u = "1,2,4,8";
  c.threads = 1;
  REQUIRE(run(c) == 0);
  const std::string serial = slurp(c.output);
  c.threads = 3;
  REQUIRE(run(c) == 0);
  CHECK(slurp(c.output) == serial);
  t = read_csv(fs::path(c.output));
  for (std::size_t r = 0; r < t.rows.size(); ++r) CHECK(std::get<std::string>(t.rows[r][2]) == "ok");
}

TEST_CASE("extrapolate: validation and constant table") {
  RunConfig c;
  c.command = "extrapolate";
  c.sizes = "2,4";
  c.output = scratch("ex.csv").string();
  CHECK(run(c) == 2);

  const auto table = scratch("const_table.csv");
  {
    std::ofstream os(table);
    os << "N,U,Tc\n";
    for (int n : {2, 4, 6})
      for (double u : {1.0, 2.0, 4.0, 16.0, 32.0, 64.0}) os << n << ',' << u << ",0.25\n";
  }
  c.sizes = "2,4,6";
  c.tc_table = table.string();
  std::string out;
  REQUIRE(run(c, &out) == 0);
  const auto t = read_csv(fs::path(c.output));
  for (std::size_t r = 0; r < t.rows.size(); ++r) CHECK(t.number(r, "Tc_extrapolated") == doctest::Approx(0.25));
  CHECK(out.find("order 2 (selected)") != std::string::npos);
  CHECK(out.find("sensitivity") != std::string::npos);
  CHECK(fs::exists(fs::path(c.output).replace_extension(".report.txt")));
}

TEST_CASE("plot scripts for each figure") {
  for (const char* fig : {"witness", "tc-vs-u", "qmc"}) {
    const auto s = plot_script(fig, {"a.csv", "b.csv"});
    CHECK(s.find("matplotlib") != std::string::npos);
    CHECK(s.find("a.csv") != std::string::npos);
  }
  RunConfig c;
  c.command = "plot";
  c.figure = "witness";
  c.inputs = {"a.csv"};
  c.output = scratch("plot.py").string();
  CHECK(run(c) == 0);
  CHECK(fs::exists(c.output));
  c.figure = "bogus";
  CHECK(run(c) == 2);
}

TEST_CASE("executable accepts a config file with flag overrides") {
  const auto cfg = scratch("run.ini");
  const auto out = scratch("from_ini.csv");
  {
    std::ofstream os(cfg);
    os << "lattice = ring\ndims = 4\nu = 4\ntemps = 0.5,1\n";
  }
  const std::string cmd = std::string(HW_CLI_PATH) + " witness-scan --config " + cfg.string() + " --u 8 -o " +
                          out.string() + " > /dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto t = read_csv(out);
  CHECK(meta(t, "lattice") == "ring");
  CHECK(meta(t, "U") == "8");
  CHECK(t.rows.size() == 2);
}
