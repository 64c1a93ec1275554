#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {
int run(const std::string& args) {
  const std::string cmd = std::string(SFQFI_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_path(const std::string& name) {
  return "/tmp/sfqfi_test_" + std::to_string(::getpid()) + "_" + name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string p = temp_path(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall =
    "channels.n_channels = 1\n"
    "grid.panel = 0.1\n"
    "grid.per_panel = 4\n"
    "povm.spectral = false\n";
}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);
  CHECK(run("point") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run("point -c /nonexistent.cfg") == 2);
  const std::string bad = write_file("bad.cfg", "grid.per_panel = 1\n");
  CHECK(run("point -c " + bad) == 2);
  const std::string unknown = write_file("unknown.cfg", "grid.nodes = 10\n");
  CHECK(run("point -c " + unknown) == 2);
  const std::string nosweep = write_file("nosweep.cfg", kSmall);
  CHECK(run("sweep -c " + nosweep) == 2);
  std::remove(bad.c_str());
  std::remove(unknown.c_str());
  std::remove(nosweep.c_str());
}

TEST_CASE("point run writes CSV, identical across runs") {
  const std::string out1 = temp_path("a.csv"), out2 = temp_path("b.csv");
  const std::string cfg = write_file("ok.cfg", std::string(kSmall) + "output.path = " + out1 + "\n");
  CHECK(run("point -c " + cfg) == 0);
  const std::string a = slurp(out1);
  CHECK(a.rfind("sweep_var,qf,alpha,", 0) == 0);
  const std::string cmd = "SFQFI_OUTPUT=" + out2 + " " + SFQFI_CLI_PATH + " point -c " + cfg + " >/dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(out2) == a);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove(cfg.c_str());
}

TEST_CASE("verify and map") {
  const std::string cfg = write_file("v.cfg", std::string(kSmall) + "output.path = /dev/null\n");
  CHECK(run("verify -c " + cfg) == 0);
  CHECK(run("--verify point -c " + cfg) == 0);
  const std::string diag = temp_path("diag.json");
  CHECK(run("map -c " + cfg + " --diagnostics " + diag) == 0);
  CHECK(slurp(diag).find("max_residual") != std::string::npos);
  std::remove(diag.c_str());
  std::remove(cfg.c_str());
}

TEST_CASE("tables option validation") {
  CHECK(run("tables --table 7") == 2);
  CHECK(run("tables --per-panel 1") == 2);
}
