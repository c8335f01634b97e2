// End-to-end runs of the spikebasin binary against a temp directory.
#include "spikebasin/json_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

namespace fs = std::filesystem;
using namespace spikebasin;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spikebasin_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd =
      std::string(SPIKEBASIN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_config(const fs::path& p, double noise = 0.0) {
  json cfg = {
      {"model", {{"k", 2}, {"d", 1}, {"epsilon", 1.0}, {"R", 2.0}}},
      {"kernel", {{"type", "gaussian_auto_k"}}},
      {"operator", {{"type", "random"}, {"m", 256}, {"seed", 5}}},
      {"ground_truth",
       {{"amplitudes", {1.0, 1.3}}, {"positions", {{-0.6}, {0.6}}}}}};
  if (noise > 0.0) cfg["noise"] = {{"norm", noise}, {"seed", 9}};
  write_json_file(cfg, p);
}

}  // namespace

TEST_CASE("generate / certify / descend / probe round") {
  TempDir tmp;
  write_config(tmp.path / "config.json");

  CHECK(run("generate --config " + (tmp.path / "config.json").string() +
            " --out " + (tmp.path / "gen").string()) == 0);
  const fs::path scenario = tmp.path / "gen" / "scenario.json";
  REQUIRE(fs::exists(scenario));
  CHECK(fs::exists(tmp.path / "gen" / "measurements.csv"));

  // Determinism: regenerating produces byte-identical scenario files.
  CHECK(run("generate --config " + (tmp.path / "config.json").string() +
            " --out " + (tmp.path / "gen2").string()) == 0);
  std::ifstream f1(scenario), f2(tmp.path / "gen2" / "scenario.json");
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);

  // Certify with user overrides: the certificate reproduces the closed-form
  // radius from its own reported constants.
  CHECK(run("certify --config " + scenario.string() + " --gamma 0 --mu 0 " +
            "--out " + (tmp.path / "cert").string()) == 0);
  const json cert_report =
      read_json_file(tmp.path / "cert" / "certificate.json");
  const json cert = cert_report.at("certificate");
  CHECK(cert.at("beta_max").get<double>() ==
        doctest::Approx(std::min({cert.at("c_h_used").get<double>(), 0.5,
                                  cert.at("C1").get<double>() *
                                      cert.at("C2_or_C3").get<double>()})));
  CHECK(fs::exists(tmp.path / "cert" / "certificate_summary.txt"));

  // Descent from the truth terminates immediately at the global minimum.
  CHECK(run("descend --config " + scenario.string() + " --from truth " +
            "--tau 0.005 --out " + (tmp.path / "desc").string()) == 0);
  const json summary =
      read_json_file(tmp.path / "desc" / "descent_summary.json");
  CHECK(summary.at("termination").get<std::string>() == "grad_tol");
  CHECK(summary.at("iterations").get<int>() == 0);
  CHECK(fs::exists(tmp.path / "desc" / "trace.csv"));

  // Probe at beta = 0: every trial converges trivially.
  CHECK(run("probe --config " + scenario.string() +
            " --beta-grid 0 --trials 5 --tau 0.005 --out " +
            (tmp.path / "probe").string()) == 0);
  const json probe =
      read_json_file(tmp.path / "probe" / "probe_summary.json");
  CHECK(probe.at("results").at(0).at("successes").get<int>() == 5);
  CHECK(fs::exists(tmp.path / "probe" / "probe.csv"));
}

TEST_CASE("validate suite runs clean") {
  TempDir tmp;
  CHECK(run("validate --suite kernel --out " + (tmp.path / "val").string() +
            " --seed 3") == 0);
  CHECK(fs::exists(tmp.path / "val" / "validation.csv"));
}

TEST_CASE("config errors exit with code 4") {
  TempDir tmp;
  std::ofstream bad(tmp.path / "bad.json");
  bad << "{\"model\": {\"k\": 0}}";
  bad.close();
  CHECK(run("generate --config " + (tmp.path / "bad.json").string() +
            " --out " + (tmp.path / "out").string()) == 4);
  CHECK(run("generate --config " + (tmp.path / "missing.json").string() +
            " --out " + (tmp.path / "out").string()) == 4);
}
