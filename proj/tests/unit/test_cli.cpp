#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mkinv/run.hpp"

namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mkinv_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(MKINV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("decompose writes eigenvalues") {
    const fs::path out = fresh_dir("decompose");
    CHECK(cli("decompose --model chain2 --out " + out.string()) == 0);
    const std::string csv = slurp(out / "eigenvalues.csv");
    CHECK(csv.rfind("index,lambda\n", 0) == 0);
    CHECK(fs::exists(out / "modes.csv"));
  }

  TEST_CASE("invert reports conditioning") {
    const fs::path out = fresh_dir("invert");
    CHECK(cli("invert --model chain2 --T 1 --g \"x\" --out " + out.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(out / "report.json"));
    for (const char* key : {"lambdaMax", "amplificationLog10", "membershipSpectralLog10", "membershipQuadrature", "flag"})
      CHECK(report.contains(key));
    CHECK(report.size() == 5);
    CHECK(slurp(out / "summary.json").find("amplificationLog10") != std::string::npos);
  }

  TEST_CASE("exit codes") {
    const fs::path out = fresh_dir("codes");
    CHECK(cli("regularise --model chain2 --T 1 --gamma 2 --g x --out " + out.string()) == 2);
    const auto err = nlohmann::json::parse(slurp(out / "error.json"));
    CHECK(err["exitCode"] == 2);
    CHECK(cli("invert --model laplace400 --T 1 --g \"random(3)\" --out " + out.string()) == 3);
    CHECK(nlohmann::json::parse(slurp(out / "error.json"))["code"] == "OverflowRisk");
    CHECK(cli("frobnicate --model chain2") == 2);
    CHECK(cli("invert --model no_such_model --g x --out " + out.string()) == 2);
  }

  TEST_CASE("sweep output is reproducible") {
    const fs::path a = fresh_dir("sweep_a"), b = fresh_dir("sweep_b");
    const std::string args = "sweep --model chain3 --T 1 --g \"random(4)\" --out ";
    CHECK(cli(args + a.string()) == 0);
    CHECK(cli(args + b.string()) == 0);
    const std::string csv = slurp(a / "sweep.csv");
    CHECK(csv.rfind("gamma,error,residual\n", 0) == 0);
    CHECK(csv == slurp(b / "sweep.csv"));
  }

  TEST_CASE("run() in process") {
    mkinv::RunConfig config;
    config.command = "check";
    config.model = "chain2";
    config.out = fresh_dir("check").string();
    std::ostringstream log;
    CHECK(mkinv::run(config, log) == mkinv::kExitOk);
    CHECK(fs::exists(fs::path(config.out) / "check.json"));
  }
}
