#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the CLI binary; skipped when DRSM_CLI is not set
// (ctest exports it).

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("DRSM_CLI"); }

int run(const std::string& args) {
  std::string cmd = std::string("\"") + cli_path() + "\" " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli exit codes and byte-identical reruns") {
  if (!cli_path()) {
    MESSAGE("DRSM_CLI not set; skipping CLI tests");
    return;
  }
  fs::path dir = fs::path("cli_test_out");
  fs::remove_all(dir);
  fs::create_directories(dir);

  // validation errors exit 1
  CHECK(run("run -c " + (dir / "missing.json").string()) == 1);
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"instance\": {\"generate\": {\"family\": \"softmax\", \"n\": 4}}, "
           "\"solver\": \"warp_drive\"}";
  }
  CHECK(run("run -c " + (dir / "bad.json").string()) == 1);

  // gen + verify: a DR instance passes (exit 0)
  std::string inst = (dir / "quad.json").string();
  CHECK(run("gen --family quadratic -n 3 --seed 4 --monotone -o " + inst) == 0);
  CHECK(run("verify -i " + inst + " --checks dr,weak_dr,antitone --samples 300 -o " +
            (dir / "reports").string()) == 0);
  CHECK(fs::exists(dir / "reports" / "check_dr.json"));
  CHECK(run("verify -i " + inst + " --checks no_such_check -o " +
            (dir / "reports").string()) == 1);

  // a planted non-submodular instance fails verification (exit 3)
  {
    std::ofstream planted(dir / "planted.json");
    planted << R"({"name":"planted","seed":1,
      "objective":{"family":"quadratic",
        "H":{"rows":2,"cols":2,"data":[0.0,1.0,1.0,0.0]},
        "h":[0.0,0.0],"c":0.0,"u":[1.0,1.0]},
      "constraint":{"type":"box","u":[1.0,1.0]}})";
  }
  CHECK(run("verify -i " + (dir / "planted.json").string() +
            " --checks weak_dr --samples 400 -o " + (dir / "reports").string()) == 3);

  // identical config + seed => byte-identical trajectory CSVs
  {
    std::ofstream cfg(dir / "run.json");
    cfg << "{\"instance\": {\"generate\": {\"family\": \"softmax\", \"n\": 6}}, "
           "\"solvers\": [\"shrunken_fw\", \"two_phase\"], "
           "\"solver_config\": {\"iterations\": 12, \"seed\": 9}, \"repeat\": 2}";
  }
  CHECK(run("run -c " + (dir / "run.json").string() + " -o " + (dir / "a").string()) == 0);
  CHECK(run("run -c " + (dir / "run.json").string() + " -o " + (dir / "b").string()) == 0);
  for (const char* name : {"trajectory_shrunken_fw_0.csv", "trajectory_shrunken_fw_1.csv",
                           "trajectory_two_phase_0.csv", "trajectory_two_phase_1.csv"}) {
    CAPTURE(name);
    std::string a = slurp(dir / "a" / name);
    std::string b = slurp(dir / "b" / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }

  // plot from produced CSVs
  CHECK(run("plot " + (dir / "a" / "trajectory_shrunken_fw_0.csv").string() + " " +
            (dir / "a" / "trajectory_two_phase_0.csv").string() + " -o " +
            (dir / "fig.svg").string()) == 0);
  CHECK(fs::exists(dir / "fig.svg"));

  // plotting an empty CSV fails and writes nothing
  {
    std::ofstream empty(dir / "empty.csv");
    empty << "iter,t_cum,f,gap,step,elapsed_ms\n";
  }
  CHECK(run("plot " + (dir / "empty.csv").string() + " -o " +
            (dir / "nope.svg").string()) == 2);
  CHECK(!fs::exists(dir / "nope.svg"));

  fs::remove_all(dir);
}

TEST_CASE("cli seed override via DRSUBMAX_SEED") {
  if (!cli_path()) return;
  fs::path dir = fs::path("cli_seed_out");
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string inst_a = (dir / "a.json").string();
  std::string inst_b = (dir / "b.json").string();
  std::string inst_c = (dir / "c.json").string();
  CHECK(run("gen --family quadratic -n 3 --seed 4 -o " + inst_a) == 0);
  {
    std::string cmd = std::string("DRSUBMAX_SEED=99 \"") + cli_path() +
                      "\" gen --family quadratic -n 3 --seed 4 -o " + inst_b +
                      " > /dev/null";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  }
  CHECK(run("gen --family quadratic -n 3 --seed 99 -o " + inst_c) == 0);
  CHECK(slurp(inst_a) != slurp(inst_b));  // env var took precedence
  CHECK(slurp(inst_b) == slurp(inst_c));  // and equals the explicit seed
  fs::remove_all(dir);
}

TEST_CASE("cli reports solver errors with exit 2") {
  if (!cli_path()) return;
  fs::path dir = fs::path("cli_err_out");
  fs::remove_all(dir);
  fs::create_directories(dir);
  // a non-monotone instance refuses to run under submodular_fw
  std::string inst = (dir / "nm.json").string();
  CHECK(run("gen --family quadratic -n 3 --seed 4 -o " + inst) == 0);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << "{\"instance\": \"nm.json\", \"solver\": \"submodular_fw\", "
           "\"solver_config\": {\"iterations\": 5}}";
  }
  CHECK(run("run -c " + (dir / "cfg.json").string() + " -o " + dir.string()) == 2);
  // forcing it runs anyway
  {
    std::ofstream cfg(dir / "cfg2.json");
    cfg << "{\"instance\": \"nm.json\", \"solver\": \"submodular_fw\", "
           "\"solver_config\": {\"iterations\": 5, \"force\": true}}";
  }
  CHECK(run("run -c " + (dir / "cfg2.json").string() + " -o " + dir.string()) == 0);
  fs::remove_all(dir);
}
