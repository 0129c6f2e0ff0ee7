#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "pqlap/io.hpp"
#include "pqlap/reference.hpp"

namespace fs = std::filesystem;
using namespace pqlap;

namespace {

std::string cli_path() {
  const char* p = std::getenv("PQLAP_CLI");
  REQUIRE_MESSAGE(p != nullptr, "PQLAP_CLI must point at the built binary");
  return p;
}

std::string source_dir() {
  const char* p = std::getenv("PQLAP_SOURCE_DIR");
  REQUIRE_MESSAGE(p != nullptr, "PQLAP_SOURCE_DIR must point at the repo root");
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& workdir) {
  const std::string out_file = workdir + "/cmd_output.txt";
  const std::string cmd = "cd '" + workdir + "' && '" + cli_path() + "' " + args +
                          " > '" + out_file + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("pqlap_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("spectrum-ref prints the q = 2 spectrum") {
  const std::string dir = temp_dir("spectrum");
  const RunResult r = run("spectrum-ref --q 2 --k-max 3", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("schema_version,qlap_spectrum_v1") != std::string::npos);
  for (int k = 1; k <= 3; ++k) {
    const double lambda = k * k * std::numbers::pi * std::numbers::pi;
    CHECK(r.out.find("2," + std::to_string(k) + "," + format_num(lambda)) !=
          std::string::npos);
  }
}

TEST_CASE("spectrum-ref matches the golden reference file") {
  const std::string dir = temp_dir("golden");
  const RunResult r = run("spectrum-ref --q 3 --k-max 2", dir);
  REQUIRE(r.exit_code == 0);
  const std::string golden =
      read_text(source_dir() + "/data/reference/qlap_spectrum_v1.csv");
  // Every data row emitted for q = 3 must appear verbatim in the golden file.
  std::stringstream ss(r.out);
  std::string line;
  int data_rows = 0;
  while (std::getline(ss, line)) {
    if (line.empty() || line.rfind("schema_version", 0) == 0 || line.rfind("q,", 0) == 0)
      continue;
    ++data_rows;
    CHECK_MESSAGE(golden.find("\n" + line + "\n") != std::string::npos,
                  "row not in golden file: " << line);
  }
  CHECK(data_rows == 2);
}

TEST_CASE("spectrum-ref rejects invalid exponents with exit 2") {
  const std::string dir = temp_dir("badq");
  const RunResult r = run("spectrum-ref --q 0.9 --k-max 2", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("0.9") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  const std::string dir = temp_dir("usage");
  CHECK(run("no-such-command", dir).exit_code == 2);
  CHECK(run("solve", dir).exit_code == 2);  // neither --lambda nor --rho
}

TEST_CASE("malformed and unknown-key configs exit 2") {
  const std::string dir = temp_dir("badcfg");
  write_file(dir + "/bad.cfg", "p = not_a_number\n");
  CHECK(run("solve --config bad.cfg --lambda 20", dir).exit_code == 2);
  write_file(dir + "/unknown.cfg", "p = 3\nmystery_knob = 7\n");
  CHECK(run("solve --config unknown.cfg --lambda 20", dir).exit_code == 2);
}

TEST_CASE("solve reports ConvergedToZero below the spectrum with exit 0") {
  const std::string dir = temp_dir("zero");
  write_file(dir + "/run.cfg", "p = 3\nq = 2\nn_elements = 64\n");
  const RunResult r = run("solve --config run.cfg --lambda 4.9", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("outcome=ConvergedToZero") != std::string::npos);
}

TEST_CASE("solve emits deterministic eigenpair CSVs") {
  const std::string dir = temp_dir("solve");
  write_file(dir + "/run.cfg", "p = 3\nq = 2\nn_elements = 64\nseed = 42\n");
  const RunResult r1 = run("solve --config run.cfg --lambda 20", dir);
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out.find("outcome=Converged") != std::string::npos);
  CHECK(r1.out.find("sign_changes=0") != std::string::npos);
  const std::string summary1 = read_text(dir + "/solve_summary.csv");
  const std::string fn1 = read_text(dir + "/solve_eigenfunction.csv");
  CHECK(summary1.rfind("schema_version,eigenpair_v1", 0) == 0);

  const RunResult r2 = run("solve --config run.cfg --lambda 20", dir);
  REQUIRE(r2.exit_code == 0);
  CHECK(read_text(dir + "/solve_summary.csv") == summary1);
  CHECK(read_text(dir + "/solve_eigenfunction.csv") == fn1);
}

TEST_CASE("fixed-mass solve via --rho") {
  const std::string dir = temp_dir("rho");
  write_file(dir + "/run.cfg", "p = 3\nq = 2\nn_elements = 64\n");
  const RunResult r = run("solve --config run.cfg --rho 1e-3 --mode 2", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("sign_changes=1") != std::string::npos);
}

TEST_CASE("diagram writes branch CSVs and an SVG") {
  const std::string dir = temp_dir("diagram");
  write_file(dir + "/run.cfg",
             "p = 3\nq = 2\nn_elements = 64\nrho_max = 1e-2\nrho_min = 1e-4\n"
             "rho_points = 4\nmodes = 1,2\n");
  const RunResult r = run("diagram --config run.cfg", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir + "/branch_k1.csv"));
  CHECK(fs::exists(dir + "/branch_k2.csv"));
  const std::string svg = read_text(dir + "/diagram.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  const std::string b1 = read_text(dir + "/branch_k1.csv");
  CHECK(b1.rfind("schema_version,branch_v1", 0) == 0);
  CHECK(b1.find("rho,lambda,level,norm1p,norm1q,sign_changes") != std::string::npos);

  write_file(dir + "/empty.cfg", "modes =\n");
  CHECK(run("diagram --config empty.cfg", dir).exit_code == 2);
}

TEST_CASE("multiplicity command finds both modes at lambda = 45") {
  const std::string dir = temp_dir("mult");
  write_file(dir + "/run.cfg", "p = 3\nq = 2\nn_elements = 64\n");
  const RunResult r = run("multiplicity --config run.cfg --lambda 45", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("solutions=2") != std::string::npos);
  const std::string csv = read_text(dir + "/multiplicity.csv");
  CHECK(csv.rfind("schema_version,multiplicity_v1", 0) == 0);
}

TEST_CASE("verify --only filters criteria") {
  const std::string dir = temp_dir("verify");
  const RunResult r = run("verify --only gradients", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("criterion-8 gradients") != std::string::npos);
  CHECK(r.out.find("criterion-1 ") == std::string::npos);

  const RunResult none = run("verify --only no-such-criterion", dir);
  CHECK(none.exit_code == 2);
}
