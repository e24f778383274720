#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

const std::filesystem::path scratch = std::filesystem::temp_directory_path() / "lgmm_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(LGMM_CLI_PATH) + " " + args + " > " + (scratch / "stdout.txt").string() +
                          " 2> " + (scratch / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Scratch {
  Scratch() {
    std::filesystem::remove_all(scratch);
    std::filesystem::create_directories(scratch);
  }
  ~Scratch() { std::filesystem::remove_all(scratch); }
};

}  // namespace

TEST_CASE("print-config dumps a config that parses back") {
  Scratch s;
  REQUIRE(run("print-config --set preset=example2") == 0);
  const std::string dump = slurp(scratch / "stdout.txt");
  CHECK(dump.find("preset = example2") != std::string::npos);
  CHECK(dump.find("dt = 1e-04") != std::string::npos);
  std::filesystem::copy_file(scratch / "stdout.txt", scratch / "dump.cfg");
  REQUIRE(run("print-config -c " + (scratch / "dump.cfg").string()) == 0);
  CHECK(slurp(scratch / "stdout.txt") == dump);
}

TEST_CASE("config errors exit with 2 and name the line") {
  Scratch s;
  {
    std::ofstream cfg(scratch / "bad.cfg");
    cfg << "# comment\nnu = 0.1\nnu = fast\n";
  }
  CHECK(run("run -c " + (scratch / "bad.cfg").string()) == 2);
  CHECK(slurp(scratch / "stderr.txt").find("bad.cfg:3") != std::string::npos);
  CHECK(run("run --set nosuchkey=1") == 2);
  CHECK(run("run -c " + (scratch / "missing.cfg").string()) == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("numerical failures exit with 3") {
  Scratch s;
  const std::string out = "output_dir=" + (scratch / "out").string();
  CHECK(run("run --set preset=custom --set velocity_amplitude=50 --set velocity_constant=0 --set dt=0.1 --set " + out) ==
        3);
  CHECK(slurp(scratch / "stderr.txt").find("overlap") != std::string::npos);
}

TEST_CASE("run writes all artifacts") {
  Scratch s;
  const auto out = scratch / "out";
  REQUIRE(run("run --set N=32 --set output_dir=" + out.string()) == 0);
  for (const char* f : {"snapshots.csv", "mesh_trajectory.csv", "mass_ledger.csv", "mesh_stats.csv", "solution_final.csv"})
    CHECK(std::filesystem::exists(out / f));
  CHECK(slurp(scratch / "stdout.txt").find("E_linf_L2") != std::string::npos);
}

TEST_CASE("convergence writes the table") {
  Scratch s;
  const auto out = scratch / "out";
  REQUIRE(run("convergence --set levels=32,64 --set output_dir=" + out.string()) == 0);
  const std::string table = slurp(out / "convergence.csv");
  CHECK(table.rfind("N,dt,E_linf_L2,EOC_linf_L2,E_l2_H1,EOC_l2_H1,E_mass\n32,", 0) == 0);
}

TEST_CASE("compare writes both variants") {
  Scratch s;
  const auto out = scratch / "out";
  REQUIRE(run("compare --set N=32 --set output_dir=" + out.string()) == 0);
  CHECK(std::filesystem::exists(out / "compare.csv"));
  CHECK(std::filesystem::exists(out / "compare_summary.csv"));
  CHECK(std::filesystem::exists(out / "solution_final_lg.csv"));
  CHECK(std::filesystem::exists(out / "solution_final_lgmm.csv"));
}
