// integration tests that shell out to the focklab binary (FOCKLAB_BIN)

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "focklab/config.hpp"
#include "focklab/serialize.hpp"

using namespace focklab;

namespace {

std::string binary() {
  const char* p = std::getenv("FOCKLAB_BIN");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string tmp_path(const std::string& name) {
  return "/tmp/focklab_cli_" + name;
}

void write(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("no-such-subcommand").exit_code == 2);
  CHECK(run("compare --config /nonexistent.toml").exit_code != 0);
}

TEST_CASE("verify-algebra passes with zero symbolic residuals") {
  RunResult r = run("verify-algebra --modes 2 --max-degree 4 --trials 100 "
                    "--seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"pass\":true") != std::string::npos);
  CHECK(r.output.find("\"value\":0,") != std::string::npos);
}

TEST_CASE("compare on a harmonic TOML config") {
  std::string cfg = tmp_path("harmonic.toml");
  write(cfg,
        "# harmonic oscillator comparison\n"
        "hamiltonian = \"0.5*pi1^2 + 0.5*phi1^2\"\n"
        "tolerance = 1e-5\n"
        "seed = 3\n"
        "[system]\n"
        "modes = 1\n"
        "cutoff = 30\n"
        "[ensemble]\n"
        "phi = [[0.3]]\n"
        "pi = [[0.1]]\n"
        "weights = [1.0]\n"
        "[evolve]\n"
        "t_max = 2.0\n"
        "dt = 0.001\n"
        "sample_stride = 200\n");
  std::string out = tmp_path("harmonic.json");
  RunResult r = run("compare --config " + cfg + " --out " + out);
  CHECK(r.exit_code == 0);
  std::string report = read_file(out);
  CHECK(report.find("\"truncated_early\":false") != std::string::npos);
  CHECK(report.find("\"times\":[0,") != std::string::npos);

  // byte-identical reports for identical (config, seed, version)
  std::string out2 = tmp_path("harmonic2.json");
  RunResult r2 = run("compare --config " + cfg + " --out " + out2);
  CHECK(r2.exit_code == 0);
  CHECK(read_file(out) == read_file(out2));

  // CSV mirror has one row per time sample
  std::string csv = tmp_path("harmonic.csv");
  CHECK(run("compare --config " + cfg + " --out " + csv + " --format csv")
            .exit_code == 0);
  std::string body = read_file(csv);
  CHECK(body.rfind("t,mode,classical_phi", 0) == 0);
}

TEST_CASE("encode reports trace identities from a JSON config") {
  std::string cfg = tmp_path("encode.json");
  write(cfg, R"({
    "system": {"modes": 1, "cutoff": 30},
    "hamiltonian": "0.5*pi1^2 + 0.25*phi1^4",
    "ensemble": {"phi": [[0.4], [-0.2]], "pi": [[0.1], [0.3]],
                 "weights": [0.5, 0.5]},
    "tolerance": 1e-7
  })");
  RunResult r = run("encode --config " + cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"name\":\"first_moment_traces\"") != std::string::npos);
  CHECK(r.output.find("\"pass\":true") != std::string::npos);
}

TEST_CASE("malformed config exits 2 with a pointer path") {
  std::string cfg = tmp_path("bad.json");
  write(cfg, R"({
    "system": {"modes": 1, "cutoff": 20},
    "hamiltonian": "0.5*pi1^2",
    "ensemble": {"phi": [[0.1]], "pi": [[0.0]], "weights": [0.7]}
  })");
  RunResult r = run("encode --config " + cfg);
  CHECK(r.exit_code == 2);
  try {
    load_config(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.pointer == "/ensemble/weights");
  }
}

TEST_CASE("seeded sampler is reproducible and seed changes the report") {
  std::string cfg = tmp_path("sampled.json");
  write(cfg, R"({
    "system": {"modes": 1, "cutoff": 30},
    "ensemble_comment": "sampler draws the points",
    "sampler": {"points": 3, "amplitude": 0.4},
    "tolerance": 1e-6,
    "seed": 11
  })");
  RunResult a = run("encode --config " + cfg);
  RunResult b = run("encode --config " + cfg);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  RunResult c = run("encode --config " + cfg + " --seed 12");
  CHECK(c.exit_code == 0);
  CHECK(c.output != a.output);
}

TEST_CASE("expanded and lattice suites pass") {
  RunResult e = run("expanded");
  CHECK(e.exit_code == 0);
  CHECK(e.output.find("\"pass\":true") != std::string::npos);

  RunResult l = run("lattice --seed 5");
  CHECK(l.exit_code == 0);
  CHECK(l.output.find("\"name\":\"calibration_residual\"") !=
        std::string::npos);
  CHECK(l.output.find("\"pass\":true") != std::string::npos);
}

TEST_CASE("config loader round trips TOML and JSON to the same config") {
  std::string toml = tmp_path("pair.toml");
  write(toml,
        "hamiltonian = \"0.5*pi1^2\"\n"
        "seed = 9\n"
        "[system]\n"
        "modes = 1\n"
        "cutoff = 25\n"
        "[sampler]\n"
        "points = 2\n"
        "amplitude = 0.3\n");
  std::string json = tmp_path("pair.json");
  write(json, R"({"hamiltonian": "0.5*pi1^2", "seed": 9,
                  "system": {"modes": 1, "cutoff": 25},
                  "sampler": {"points": 2, "amplitude": 0.3}})");
  ExperimentConfig a = load_config(toml);
  ExperimentConfig b = load_config(json);
  CHECK(a.modes == b.modes);
  CHECK(a.cutoff == b.cutoff);
  CHECK(a.hamiltonian == b.hamiltonian);
  CHECK(a.seed == b.seed);
  Ensemble ea = realize_ensemble(a), eb = realize_ensemble(b);
  REQUIRE(ea.points.size() == eb.points.size());
  for (size_t k = 0; k < ea.points.size(); ++k)
    CHECK((ea.points[k].phi - eb.points[k].phi).norm() == 0.0);
}
