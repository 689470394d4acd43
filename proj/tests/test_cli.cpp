#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Cmd {
  int exit_code;
  std::string output;
};

Cmd run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log =
      fs::temp_directory_path() / ("kinel_cli_log_" + std::to_string(counter++));
  const std::string cmd =
      std::string(KINEL_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(log);
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("kinel_test_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("materials commands") {
  const auto list = run_cli("materials list");
  CHECK(list.exit_code == 0);
  CHECK(list.output.find("nickel") != std::string::npos);
  CHECK(list.output.find("zinc") != std::string::npos);
  CHECK(list.output.find("celestite") != std::string::npos);
  CHECK(list.output.find("isoref") != std::string::npos);

  const auto show = run_cli("materials show nickel --json");
  CHECK(show.exit_code == 0);
  CHECK(show.output.find("253") != std::string::npos);
  CHECK(show.output.find("cubic") != std::string::npos);

  const auto zn = run_cli("materials show zinc --json");
  CHECK(zn.output.find("31.1") != std::string::npos);

  const auto bad = run_cli("materials show unobtainium");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("unknown material") != std::string::npos);

  // user material file
  const auto d = fresh_dir("matfile");
  const fs::path mat = d / "mymat.json";
  std::ofstream(mat) << R"({"name":"mymat","class":"cubic",
    "constants_GPa":[200.0,100.0,80.0],"density_kg_m3":5000.0})";
  const auto file = run_cli("materials show " + mat.string());
  CHECK(file.exit_code == 0);
  CHECK(file.output.find("mymat") != std::string::npos);
  CHECK(file.output.find("cubic") != std::string::npos);

  // unstable constants are rejected on load
  const fs::path badmat = d / "bad.json";
  std::ofstream(badmat) << R"({"name":"bad","class":"cubic",
    "constants_GPa":[100.0,200.0,80.0],"density_kg_m3":5000.0})";
  const auto rej = run_cli("materials show " + badmat.string());
  CHECK(rej.exit_code == 2);
  CHECK(rej.output.find("unstable") != std::string::npos);
}

TEST_CASE("axes command reports the published counts") {
  const auto d = fresh_dir("axes");
  const auto res = run_cli("axes --material nickel --out " + d.string());
  CHECK(res.exit_code == 0);
  const std::string j = slurp(d / "axes.json");
  // seven axes -> seven direction entries
  std::size_t count = 0, pos = 0;
  while ((pos = j.find("\"direction\"", pos)) != std::string::npos) {
    ++count;
    pos += 10;
  }
  CHECK(count == 7);
  CHECK(fs::exists(d / "manifest.json"));
}

TEST_CASE("xsection outputs, manifest and replay") {
  const auto d1 = fresh_dir("xsec1");
  const std::string common =
      "xsection --material zinc --ak 1.0 --rule 12,24 --grid 30 --threads 2 ";
  const auto r1 = run_cli(common + "--out " + d1.string());
  CHECK(r1.exit_code == 0);
  CHECK(fs::exists(d1 / "xsection.csv"));
  CHECK(fs::exists(d1 / "xsection.json"));
  CHECK(fs::exists(d1 / "xsection.svg"));
  CHECK(fs::exists(d1 / "manifest.json"));

  // replaying the manifest's command reproduces every byte
  const auto d2 = fresh_dir("xsec2");
  const auto r2 = run_cli(common + "--out " + d2.string());
  CHECK(r2.exit_code == 0);
  CHECK(slurp(d1 / "xsection.csv") == slurp(d2 / "xsection.csv"));
  CHECK(slurp(d1 / "xsection.json") == slurp(d2 / "xsection.json"));
  CHECK(slurp(d1 / "manifest.json") == slurp(d2 / "manifest.json"));

  // thread count must not change the numbers
  const auto d3 = fresh_dir("xsec3");
  const auto r3 = run_cli(
      "xsection --material zinc --ak 1.0 --rule 12,24 --grid 30 --threads 1 "
      "--out " + d3.string());
  CHECK(r3.exit_code == 0);
  CHECK(slurp(d1 / "xsection.csv") == slurp(d3 / "xsection.csv"));
}

TEST_CASE("strict mode escalates an under-resolved quadrature to exit 3") {
  // a cubic material at a coarse rule cannot pass the doubling self-check
  const auto d = fresh_dir("xsec_strict");
  const auto res = run_cli(
      "xsection --material nickel --ak 1.0 --rule 8,16 --grid 45 --strict "
      "--out " + d.string());
  CHECK(res.exit_code == 3);
  CHECK(res.output.find("warning") != std::string::npos);
  // outputs are still written, the exit code is the escalation
  CHECK(fs::exists(d / "xsection.csv"));
}

TEST_CASE("xsection with zero fluctuations fails validation") {
  const auto d = fresh_dir("xsec_zero");
  const fs::path corr = d / "corr.json";
  std::ofstream(corr) << R"({"kind":"markov","a_m":1e-3,"class":"cubic",
    "rho":[[0,0,0],[0,0,0],[0,0,0]]})";
  const auto res = run_cli("xsection --material nickel --corr " +
                           corr.string() + " --out " + d.string());
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("no fluctuations") != std::string::npos);
}

TEST_CASE("transport run and deterministic replay") {
  const auto d = fresh_dir("transport");
  const fs::path cfg = d / "config.json";
  std::ofstream(cfg) << R"({
    "material": "isoref",
    "corr": {"kind": "markov", "a_m": 1e-3, "class": "isotropic"},
    "omega_rad_s": 6.4e6,
    "particles": 2000,
    "end_time_s": 2.0e14,
    "tally_dt_s": 0.5e14,
    "seed": 11,
    "rule": [6, 12],
    "emitter": {"type": "point_isotropic", "mode": 2},
    "spatial_bins": 8,
    "threads": 2
  })";

  const auto d1 = fresh_dir("transport1");
  const auto r1 = run_cli("transport --config " + cfg.string() + " --out " +
                          d1.string());
  INFO(r1.output);
  CHECK(r1.exit_code == 0);
  CHECK(fs::exists(d1 / "frames.jsonl"));
  CHECK(fs::exists(d1 / "summary.csv"));
  CHECK(fs::exists(d1 / "spatial.grid"));
  CHECK(fs::exists(d1 / "spatial_header.json"));
  CHECK(fs::exists(d1 / "manifest.json"));

  // conservation visible in the summary: each row sums to the particle count
  {
    std::ifstream sum(d1 / "summary.csv");
    std::string line;
    std::getline(sum, line);  // header
    int rows = 0;
    while (std::getline(sum, line)) {
      double t, e1, e2, e3;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &e1, &e2, &e3) == 4);
      CHECK(e1 + e2 + e3 == 2000.0);
      ++rows;
    }
    CHECK(rows == 5);
  }

  const auto d2 = fresh_dir("transport2");
  const auto r2 = run_cli("transport --config " + cfg.string() + " --out " +
                          d2.string());
  CHECK(r2.exit_code == 0);
  CHECK(slurp(d1 / "frames.jsonl") == slurp(d2 / "frames.jsonl"));
  CHECK(slurp(d1 / "summary.csv") == slurp(d2 / "summary.csv"));
  CHECK(slurp(d1 / "spatial.grid") == slurp(d2 / "spatial.grid"));
}

TEST_CASE("axes on an isotropic material reports whole-sphere degeneracy") {
  const auto res = run_cli("axes --material isoref --out -");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"degenerate_everywhere\": true") != std::string::npos);
}

TEST_CASE("plane-wave transport config") {
  const auto d = fresh_dir("planewave");
  const fs::path cfg = d / "config.json";
  std::ofstream(cfg) << R"({
    "material": "nickel",
    "corr": {"kind": "markov", "a_m": 1e-3, "class": "cubic"},
    "omega_rad_s": 5.3e6,
    "particles": 500,
    "end_time_s": 1.0e17,
    "tally_dt_s": 0.5e17,
    "seed": 2,
    "rule": [6, 12],
    "emitter": {"type": "plane_wave", "mode": 2, "direction": [1, 1, 0],
                "position": [1.0, 2.0, 3.0]},
    "spatial_bins": 6,
    "threads": 2
  })";
  const auto res = run_cli("transport --config " + cfg.string() + " --out " +
                           d.string());
  INFO(res.output);
  CHECK(res.exit_code == 0);
  // the packet scatters off the initial direction eventually
  CHECK(res.output.find("collisions") != std::string::npos);
  std::ifstream sum(d / "summary.csv");
  std::string line;
  std::getline(sum, line);
  double t, e1, e2, e3;
  std::getline(sum, line);
  REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &e1, &e2, &e3) == 4);
  CHECK(e3 == 500.0);  // all particles start in the configured mode
}

TEST_CASE("surfaces command writes maps") {
  const auto d = fresh_dir("surfaces");
  const auto res = run_cli(
      "surfaces --material celestite --grid 15 --threads 2 --out " + d.string());
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(d / "surfaces.csv"));
  CHECK(fs::exists(d / "surfaces.json"));
  CHECK(fs::exists(d / "surfaces.svg"));
  CHECK(fs::exists(d / "manifest.json"));
  // csv has header + 13*24 rows for a 15 degree grid
  std::ifstream csv(d / "surfaces.csv");
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 13 * 24);
}
