#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "soam/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "soam_cli_test";
  fs::create_directories(d);
  return d;
}

int soam_cli(const std::string& args) {
  const std::string cmd = std::string(SOAM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  const fs::path d = scratch_dir();
  CHECK(soam_cli("reconstruct --shape circle --dim 1 --seed 7 --out " + (d / "circle").string()) == 0);
  CHECK(fs::exists(d / "circle.off"));
  CHECK(fs::exists(d / "circle.telemetry.csv"));
  CHECK(fs::exists(d / "circle.report.txt"));

  CHECK(soam_cli("reconstruct --shape circle --dim 1 --max-signals 500 --out " + (d / "short").string()) == 2);
  CHECK(soam_cli("reconstruct --out " + (d / "none").string()) == 1);
  CHECK(soam_cli("reconstruct --shape no-such-shape --out " + (d / "x").string()) == 1);
  CHECK(soam_cli("reconstruct --input " + (d / "missing.off").string()) == 1);
  CHECK(soam_cli("reconstruct --shape circle --set bogus=1") == 1);
  CHECK(soam_cli("frobnicate") == 1);

  soam::write_file((d / "fin.off").string(),
                   "OFF\n5 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 1 1\n3 0 1 2\n3 0 1 3\n3 0 1 4\n");
  CHECK(soam_cli("verify --input " + (d / "fin.off").string()) == 3);

  soam::write_file((d / "tet.off").string(),
                   "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n");
  CHECK(soam_cli("verify --input " + (d / "tet.off").string()) == 0);
}

TEST_CASE("cli output is deterministic") {
  const fs::path d = scratch_dir();
  const std::string base = "reconstruct --shape circle --dim 1 --seed 3 --max-signals 30000 --out ";
  // The report echoes --out, so both runs use the same relative prefix.
  for (const char* sub : {"a", "b"}) {
    fs::create_directories(d / sub);
    const std::string cmd = "cd " + (d / sub).string() + " && " + SOAM_CLI + " " + base + "out >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
  }
  for (const char* ext : {".off", ".telemetry.csv", ".report.txt"})
    CHECK(soam::read_file((d / "a" / ("out" + std::string(ext))).string()) ==
          soam::read_file((d / "b" / ("out" + std::string(ext))).string()));
}
