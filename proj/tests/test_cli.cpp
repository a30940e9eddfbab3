// End-to-end tests of the barrier-inverse executable.  The binary path comes
// from BARRIER_INVERSE_BIN (set by the CTest environment).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "barrierinv/csv.hpp"
#include "barrierinv/tabulated.hpp"

using namespace barrierinv;
namespace fs = std::filesystem;

namespace {

struct run_result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "barrierinv_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string binary_path() {
  const char* env = std::getenv("BARRIER_INVERSE_BIN");
  REQUIRE_MESSAGE(env != nullptr, "BARRIER_INVERSE_BIN must point at the built executable");
  return env;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

run_result run(const std::string& args) {
  const fs::path out_file = work_dir() / "stdout.txt";
  const fs::path err_file = work_dir() / "stderr.txt";
  const std::string cmd = binary_path() + " " + args + " >" + out_file.string() + " 2>" +
                          err_file.string();
  const int raw = std::system(cmd.c_str());
  run_result r;
  r.exit_code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

fs::path write_text(const std::string& name, const std::string& body) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

const char* cold_json = R"({"kind":"cold_emission","params":{"u0":1.0,"field":1.0},"shape":"barrier"})";

}  // namespace

TEST_CASE("forward: cold-emission transmission matches the closed form") {
  write_text("cold.json", cold_json);
  const auto out = (work_dir() / "fn.csv").string();
  const auto r = run("forward --potential " + (work_dir() / "cold.json").string() +
                     " --kind transmission --grid 0.05:0.95:100 --out " + out);
  CHECK(r.exit_code == 0);
  const auto curve = read_curve_csv(out);
  REQUIRE(curve.data.size() == 100);
  const double a = 4.0 * std::sqrt(2.0) / 3.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.data.size(); ++i) {
    const double e = curve.data.abscissa[i];
    worst = std::max(worst,
                     std::abs(curve.data.values[i] - std::exp(-a * std::pow(1.0 - e, 1.5))));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("forward: byte-identical output on repeated runs") {
  write_text("cold.json", cold_json);
  const auto out1 = (work_dir() / "det1.csv").string();
  const auto out2 = (work_dir() / "det2.csv").string();
  const std::string base = "forward --potential " + (work_dir() / "cold.json").string() +
                           " --kind transmission --grid 0.1:0.9:25 --out ";
  CHECK(run(base + out1).exit_code == 0);
  CHECK(run(base + out2).exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("forward: harmonic period is a constant column") {
  write_text("well.json", R"({"kind":"harmonic_well","params":{"omega":1.0},"shape":"well"})");
  const auto out = (work_dir() / "period.csv").string();
  const auto r = run("forward --potential " + (work_dir() / "well.json").string() +
                     " --kind period --grid 0.2:2.0:20 --out " + out);
  CHECK(r.exit_code == 0);
  const auto curve = read_curve_csv(out);
  for (const double v : curve.data.values)
    CHECK(std::abs(v - 2.0 * 3.14159265358979323846) <= 1e-9);
}

TEST_CASE("forward: degenerate grid exits 2 with the config message") {
  write_text("cold.json", cold_json);
  const auto r = run("forward --potential " + (work_dir() / "cold.json").string() +
                     " --kind transmission --grid 0.05:0.95:1 --out " +
                     (work_dir() / "x.csv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("grid.count must be ≥ 2") != std::string::npos);
  CHECK(r.err.rfind("ERROR 2:", 0) == 0);
}

TEST_CASE("forward: missing potential file exits 2") {
  const auto r = run("forward --potential " + (work_dir() / "nope.json").string() +
                     " --kind transmission --grid 0.1:0.9:10 --out " +
                     (work_dir() / "x.csv").string());
  CHECK(r.exit_code == 2);
}

TEST_CASE("invert: Fowler-Nordheim data give width 1 - U") {
  write_text("cold.json", cold_json);
  const auto fwd = (work_dir() / "fn_inv.csv").string();
  REQUIRE(run("forward --potential " + (work_dir() / "cold.json").string() +
              " --kind transmission --grid 0.05:0.95:100 --out " + fwd)
              .exit_code == 0);
  const auto out = (work_dir() / "width.csv").string();
  const auto r = run("invert --in " + fwd + " --out " + out);
  CHECK(r.exit_code == 0);
  const auto wfile = read_width_csv(out);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < wfile.wf.u_grid.size(); ++i) {
    const double exact = 1.0 - wfile.wf.u_grid[i];
    worst = std::max(worst, std::abs(wfile.wf.width[i] - exact) / exact);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("invert: flat transmission gives an all-zero width column") {
  std::string csv = "# {\"type\":\"scattering_curve\",\"kind\":\"transmission\","
                    "\"hbar\":1.0,\"mass\":1.0,\"u0\":1.2}\nE,value\n";
  for (const double e : linspace(0.1, 0.9, 20)) csv += format_double(e) + ",1\n";
  const auto in = write_text("flat.csv", csv).string();
  const auto out = (work_dir() / "flat_width.csv").string();
  const auto r = run("invert --in " + in + " --out " + out);
  CHECK(r.exit_code == 0);
  const auto wfile = read_width_csv(out);
  for (const double w : wfile.wf.width) CHECK(std::abs(w) <= 1e-12);
}

TEST_CASE("invert: non-monotone transmission exits 3 with a diagnostic") {
  std::string csv = "# {\"type\":\"scattering_curve\",\"kind\":\"transmission\","
                    "\"hbar\":1.0,\"mass\":1.0,\"u0\":1.0}\nE,value\n"
                    "0.1,0.2\n0.3,0.5\n0.5,0.3\n0.7,0.8\n";
  const auto in = write_text("corrupt.csv", csv).string();
  const auto r = run("invert --in " + in + " --out " + (work_dir() / "x.csv").string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.rfind("ERROR 3:", 0) == 0);
  CHECK(r.err.find("non_monotone") != std::string::npos);
}

TEST_CASE("invert: traversal curves are rejected as config errors") {
  std::string csv = "# {\"type\":\"scattering_curve\",\"kind\":\"traversal\","
                    "\"hbar\":1.0,\"mass\":1.0,\"u0\":1.0}\nE,value\n1.5,1.0\n2.0,0.8\n";
  const auto in = write_text("trav.csv", csv).string();
  const auto r = run("invert --in " + in + " --out " + (work_dir() / "x.csv").string());
  CHECK(r.exit_code == 2);
}

TEST_CASE("roundtrip: cold emission and parabolic barrier pass at 1e-6") {
  write_text("cold.json", cold_json);
  write_text("parab.json",
             R"({"kind":"parabolic_barrier","params":{"u0":1.0,"omega":1.0},"shape":"barrier"})");
  const auto r1 = run("roundtrip --potential " + (work_dir() / "cold.json").string());
  CHECK(r1.exit_code == 0);
  CHECK(r1.out.find("PASS") != std::string::npos);
  const auto r2 = run("roundtrip --potential " + (work_dir() / "parab.json").string());
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("PASS") != std::string::npos);
}

TEST_CASE("family: zero and centered splits agree on T and write all files") {
  write_text("cold.json", cold_json);
  const auto fwd = (work_dir() / "fam_T.csv").string();
  REQUIRE(run("forward --potential " + (work_dir() / "cold.json").string() +
              " --kind transmission --grid 0.02:0.98:200 --out " + fwd)
              .exit_code == 0);
  const auto width = (work_dir() / "fam_width.csv").string();
  REQUIRE(run("invert --in " + fwd + " --out " + width).exit_code == 0);

  const auto out = (work_dir() / "members.csv").string();
  const auto r = run("family --in " + width + " --split centered --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(work_dir() / "members_zero.csv"));
  CHECK(fs::exists(work_dir() / "members_centered.csv"));
  CHECK(fs::exists(work_dir() / "members_zero_T.csv"));
  CHECK(fs::exists(work_dir() / "members_centered_T.csv"));

  const auto pos = r.out.find("discrepancy = ");
  REQUIRE(pos != std::string::npos);
  const double gap = std::stod(r.out.substr(pos + 14));
  CHECK(gap <= 1e-8);

  // the wall member reproduces the triangular cold-emission profile
  const auto wall = read_xu_csv(work_dir() / "members_zero.csv");
  CHECK(wall.x_min() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(wall.values.front() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("family: custom split file shares the transmission with the baseline") {
  write_text("cold.json", cold_json);
  const auto fwd = (work_dir() / "fs_T.csv").string();
  REQUIRE(run("forward --potential " + (work_dir() / "cold.json").string() +
              " --kind transmission --grid 0.02:0.98:160 --out " + fwd)
              .exit_code == 0);
  const auto width = (work_dir() / "fs_width.csv").string();
  REQUIRE(run("invert --in " + fwd + " --out " + width).exit_code == 0);

  // skewed left branch x1(U) = -0.3 * width(U) on the same levels
  const auto wfile = read_width_csv(width);
  std::string split_csv = "# {\"type\":\"split\"}\nU,x1\n";
  for (std::size_t i = 0; i < wfile.wf.u_grid.size(); ++i)
    split_csv += format_double(wfile.wf.u_grid[i]) + "," +
                 format_double(-0.3 * wfile.wf.width[i]) + "\n";
  const auto split_path = write_text("skew.csv", split_csv).string();

  const auto out = (work_dir() / "skewed.csv").string();
  const auto r = run("family --in " + width + " --split file:" + split_path + " --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(work_dir() / "skewed_file:skew.csv") == false);  // names are sanitised
  const auto pos = r.out.find("discrepancy = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 14)) <= 1e-8);
}

TEST_CASE("family: degenerate width exits 3") {
  std::string csv = "# {\"type\":\"width_function\",\"u0\":1.0,\"hbar\":1.0,\"mass\":1.0}\n"
                    "U,width\n0.1,0\n0.5,0\n0.9,0\n";
  const auto in = write_text("zero_width.csv", csv).string();
  const auto r = run("family --in " + in + " --out " + (work_dir() / "zw.csv").string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("branch_overlap") != std::string::npos);
}

TEST_CASE("marchenko: one-soliton spectrum reconstructs -2 sech^2") {
  write_text("spec.json", R"({"levels":[{"kappa":1.0,"c":1.4142135623730951}]})");
  const auto out = (work_dir() / "soliton.csv").string();
  const auto r = run("marchenko --potential " + (work_dir() / "spec.json").string() +
                     " --grid -8:8:401 --out " + out);
  CHECK(r.exit_code == 0);
  const auto table = read_xu_csv(out);
  REQUIRE(table.size() == 401);
  double worst = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double sech = 1.0 / std::cosh(table.abscissa[i]);
    worst = std::max(worst, std::abs(table.values[i] + 2.0 * sech * sech));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("marchenko: empty spectrum writes a zero column") {
  write_text("empty.json", R"({"levels":[]})");
  const auto out = (work_dir() / "zero.csv").string();
  const auto r = run("marchenko --potential " + (work_dir() / "empty.json").string() +
                     " --grid -2:2:21 --out " + out);
  CHECK(r.exit_code == 0);
  const auto table = read_xu_csv(out);
  for (const double u : table.values) CHECK(u == 0.0);
}

TEST_CASE("verify: all criteria pass") {
  const auto r = run("verify");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  int pass_lines = 0;
  for (std::size_t pos = 0; (pos = r.out.find("[PASS]", pos)) != std::string::npos; ++pos)
    ++pass_lines;
  CHECK(pass_lines == 10);
}

TEST_CASE("unknown flags and missing subcommand exit 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("forward --bogus 1").exit_code == 2);
}
