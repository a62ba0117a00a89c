#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <set>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbnet/commands.hpp"
#include "qbnet/io.hpp"

using namespace qbnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qbnet_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_config(const TempDir& dir, const std::string& name, const std::string& body) {
  const std::string path = dir.file(name);
  std::ofstream out(path);
  out << body;
  return path;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

const char* kConfigDir = QBNET_CONFIG_DIR;

}  // namespace

TEST_CASE("bundled example config parses") {
  const ExperimentConfig cfg = parse_config(std::string(kConfigDir) + "/paper_example.cfg");
  CHECK(cfg.n == 3);
  CHECK(cfg.model == ModelKind::kConsensus);
  REQUIRE(cfg.edges.size() == 2);
  CHECK(cfg.edges[0].j == 1);
  CHECK(cfg.edges[0].k == 2);
  CHECK(cfg.edges[1].weight == 1.0);
  CHECK(*cfg.tau == 1.0);
  CHECK(cfg.simulation.steps == 10000);
  CHECK(cfg.simulation.seed == 12345);
  CHECK(cfg.simulation.initial == "001");
}

TEST_CASE("config errors name the offending field and line") {
  TempDir dir;
  const std::string missing_n = write_config(dir, "a.cfg", "model = consensus\n");
  CHECK_THROWS_WITH_AS(parse_config(missing_n), doctest::Contains("\"n\""), ValidationError);

  const std::string bad_key = write_config(dir, "b.cfg", "n = 2\nmodel = consensus\nfoo = 1\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_key), doctest::Contains("foo"), ValidationError);

  const std::string bad_edge =
      write_config(dir, "c.cfg", "n = 2\nmodel = consensus\nedge = nonsense\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_edge), doctest::Contains("edge"), ValidationError);

  const std::string bad_model = write_config(dir, "d.cfg", "n = 2\nmodel = banana\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_model), doctest::Contains("model"), ValidationError);

  const std::string bad_gamma =
      write_config(dir, "e.cfg", "n = 2\nmodel = depolarizing\ngamma = -1\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_gamma), doctest::Contains("gamma"), ValidationError);

  const std::string bad_initial = write_config(
      dir, "f.cfg", "n = 2\nmodel = consensus\n[simulation]\ninitial = 00110\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_initial), doctest::Contains("initial"), ValidationError);
}

TEST_CASE("transition command reproduces the worked example and round-trips") {
  TempDir dir;
  const ExperimentConfig cfg = parse_config(std::string(kConfigDir) + "/paper_example.cfg");
  cmd_transition(cfg, dir.str(), OutputFormat::kCsv);

  const LabeledMatrix read = read_matrix_csv(dir.file("transition.csv"));
  CHECK(read.labels ==
        std::vector<std::string>{"000", "001", "010", "011", "100", "101", "110", "111"});
  const AssembledModel model = assemble_model(cfg);
  const TransitionMatrix p = exact_transition(model, *cfg.tau);
  // Bit-identical CSV round trip.
  CHECK((read.matrix - p.p).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(read.matrix(1, 1) - 0.525) <= 1e-3);

  const auto report = load_json(dir.file("transition.json"));
  CHECK(report["n"] == 3);
  CHECK(report["row_sums"].size() == 8);
  CHECK(report["symmetry_residual"].get<double>() <= 1e-10);
}

TEST_CASE("transition command in JSON mode embeds a round-trippable matrix") {
  TempDir dir;
  const ExperimentConfig cfg = parse_config(std::string(kConfigDir) + "/paper_example.cfg");
  cmd_transition(cfg, dir.str(), OutputFormat::kJson);
  CHECK_FALSE(fs::exists(dir.file("transition.csv")));
  const auto report = load_json(dir.file("transition.json"));
  const AssembledModel model = assemble_model(cfg);
  const TransitionMatrix p = exact_transition(model, *cfg.tau);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(report["matrix"][i][j].get<double>() == p.p(i, j));
    }
  }
}

TEST_CASE("transition command at tau zero emits the identity") {
  TempDir dir;
  const std::string path = write_config(
      dir, "zero.cfg", "n = 2\nmodel = consensus\nedge = 1-2: 1.0\ntau = 0\n");
  cmd_transition(parse_config(path), dir.str(), OutputFormat::kCsv);
  const LabeledMatrix read = read_matrix_csv(dir.file("transition.csv"));
  CHECK((read.matrix - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("damped qubit preset matches the closed-form chain") {
  TempDir dir;
  const std::string path = write_config(dir, "ad.cfg",
                                        "n = 1\nmodel = amplitude_damping\ngamma = 1.0\n"
                                        "tau = 0.69314718055994531\n");
  cmd_transition(parse_config(path), dir.str(), OutputFormat::kCsv);
  const LabeledMatrix read = read_matrix_csv(dir.file("transition.csv"));
  RealMatrix want(2, 2);
  want << 1.0, 0.0, 0.5, 0.5;
  CHECK((read.matrix - want).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("lindblad file models load complex matrices") {
  TempDir dir;
  write_text_file(dir.file("v.txt"), "0 1\n0 0\n");
  write_text_file(dir.file("h.txt"), "0.5 0\n0 -0.5\n");
  const std::string path = write_config(dir, "files.cfg",
                                        "n = 1\nmodel = lindblad\nhamiltonian = h.txt\n"
                                        "dissipator = v.txt\ntau = 0.69314718055994531\n");
  cmd_transition(parse_config(path), dir.str(), OutputFormat::kCsv);
  const LabeledMatrix read = read_matrix_csv(dir.file("transition.csv"));
  // The Hamiltonian only rotates coherences; outcome statistics match the
  // plain damping preset.
  RealMatrix want(2, 2);
  want << 1.0, 0.0, 0.5, 0.5;
  CHECK((read.matrix - want).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("complex literal parsing") {
  CHECK(parse_complex("1.5") == Complex(1.5, 0.0));
  CHECK(parse_complex("2i") == Complex(0.0, 2.0));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("0.5+0.25i") == Complex(0.5, 0.25));
  CHECK(parse_complex("1e-3-2e-4i") == Complex(1e-3, -2e-4));
  CHECK_THROWS_AS(parse_complex("banana"), ValidationError);
}

TEST_CASE("classes command reports the weight partition and agreement") {
  TempDir dir;
  const ExperimentConfig cfg = parse_config(std::string(kConfigDir) + "/paper_example.cfg");
  cmd_classes(cfg, dir.str(), OutputFormat::kCsv);
  const auto report = load_json(dir.file("classes.json"));
  CHECK(report["classes"].size() == 4);
  CHECK(report["classes"][1] == nlohmann::json::parse(R"(["001","010","100"])"));
  CHECK(report["absorbing"] == nlohmann::json::parse(R"(["000","111"])"));
  CHECK(report["irreducible"] == false);
  CHECK(report["hamming_agreement"] == true);
  CHECK(report["hamming_sizes"] == nlohmann::json::parse("[1,3,3,1]"));
}

TEST_CASE("classes command on an empty network lists singletons") {
  TempDir dir;
  const std::string path =
      write_config(dir, "empty.cfg", "n = 2\nmodel = consensus\ntau = 1.0\n");
  cmd_classes(parse_config(path), dir.str(), OutputFormat::kCsv);
  const auto report = load_json(dir.file("classes.json"));
  CHECK(report["classes"].size() == 4);
  CHECK(report["absorbing"].size() == 4);
}

TEST_CASE("stationary command writes the ergodic law or the diagnostic") {
  TempDir dir;
  const std::string ergodic = write_config(
      dir, "dep.cfg", "n = 1\nmodel = depolarizing\ngamma = 1.0\ntau = 1.0\n");
  cmd_stationary(parse_config(ergodic), dir.str(), OutputFormat::kCsv);
  auto report = load_json(dir.file("stationary.json"));
  CHECK(report["pi"]["0"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(report["balance_residual_l1"].get<double>() <= 1e-10);

  const ExperimentConfig blocked = parse_config(std::string(kConfigDir) + "/paper_example.cfg");
  cmd_stationary(blocked, dir.str(), OutputFormat::kCsv);
  report = load_json(dir.file("stationary.json"));
  REQUIRE(report.contains("error"));
  CHECK(report["error"].get<std::string>().find("NotErgodic") == 0);
}

TEST_CASE("simulate command writes trajectories and the deviation report") {
  TempDir dir;
  const std::string path = write_config(dir, "sim.cfg",
                                        "n = 2\nmodel = consensus\nedge = 1-2: 1.0\ntau = 1.0\n"
                                        "[simulation]\nsteps = 400\ntrajectories = 3\n"
                                        "seed = 5\ninitial = 01\n");
  const ExperimentConfig cfg = parse_config(path);
  cmd_simulate(cfg, dir.str(), OutputFormat::kCsv, std::nullopt, 2);

  std::ifstream t0(dir.file("trajectory_000.txt"));
  REQUIRE(t0.good());
  int lines = 0;
  std::string line;
  std::set<std::string> states;
  while (std::getline(t0, line)) {
    ++lines;
    states.insert(line);
  }
  CHECK(lines == 401);
  for (const auto& s : states) CHECK((s == "01" || s == "10"));

  const auto report = load_json(dir.file("simulate.json"));
  CHECK(report["max_deviation_from_exact"].get<double>() < 0.1);
  CHECK(report["undefined_rows"].size() == 2);  // 00 and 11 never visited

  // Deterministic rerun produces byte-identical trajectory files.
  TempDir dir2;
  cmd_simulate(cfg, dir2.str(), OutputFormat::kCsv, std::nullopt, 1);
  std::ifstream a(dir.file("trajectory_002.txt")), b(dir2.file("trajectory_002.txt"));
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());

  // A seed override changes the sampled paths.
  TempDir dir3;
  cmd_simulate(cfg, dir3.str(), OutputFormat::kCsv, 999, 1);
  const auto report3 = load_json(dir3.file("simulate.json"));
  CHECK(report3["seed"] == 999);
}

TEST_CASE("scan command locates the absorbing regime") {
  TempDir dir;
  const std::string path = write_config(dir, "scan.cfg",
                                        "n = 2\nmodel = amplitude_damping\ngamma = 1.0\n"
                                        "tau_grid = 0.5, 1, 2, 4, 8\n");
  cmd_scan_tau(parse_config(path), dir.str(), OutputFormat::kCsv);
  const auto report = load_json(dir.file("scan.json"));
  CHECK(report["first_unique_absorbing_tau"].get<double>() == 0.5);
  CHECK(report["points"].size() == 5);
  CHECK(report["points"][4]["absorbing"] == nlohmann::json::parse(R"(["00"])"));
}

TEST_CASE("verification command passes on the pristine network and flags a perturbed one") {
  std::ostringstream clean;
  CHECK(cmd_verify_paper(clean));
  CHECK(clean.str().find("FAIL") == std::string::npos);

  std::ostringstream perturbed;
  CHECK_FALSE(cmd_verify_paper(perturbed, 2.0));
  std::istringstream lines(perturbed.str());
  std::string line;
  bool matrix_failed = false, classes_ok = false, oracle_ok = false;
  while (std::getline(lines, line)) {
    if (line.find("3-decimal reference") != std::string::npos) {
      matrix_failed = line.find("FAIL") != std::string::npos;
    }
    if (line.find("communication classes") != std::string::npos) {
      classes_ok = line.find("ok") != std::string::npos;
    }
    if (line.find("orbit heat-kernel oracle") != std::string::npos) {
      oracle_ok = line.find("ok") != std::string::npos;
    }
  }
  CHECK(matrix_failed);   // the printed reference assumes unit weights
  CHECK(classes_ok);      // the class structure is weight-independent
  CHECK(oracle_ok);       // the pipelines still agree with each other
}

TEST_CASE("classes command flags ergodicity for a relaxing preset at large tau") {
  TempDir dir;
  const std::string path = write_config(
      dir, "erg.cfg", "n = 2\nmodel = depolarizing\ngamma = 1.0\ntau = 4.0\n");
  cmd_classes(parse_config(path), dir.str(), OutputFormat::kCsv);
  const auto report = load_json(dir.file("classes.json"));
  CHECK(report["irreducible"] == true);
  CHECK(report["aperiodic"] == true);
  CHECK(report["classes"].size() == 1);
}

TEST_CASE("commands leave no partial outputs when validation fails") {
  TempDir dir;
  const std::string path =
      write_config(dir, "no_tau.cfg", "n = 2\nmodel = consensus\nedge = 1-2: 1.0\n");
  const ExperimentConfig cfg = parse_config(path);
  const std::string out = dir.file("results");
  CHECK_THROWS_WITH_AS(cmd_transition(cfg, out, OutputFormat::kCsv),
                       doctest::Contains("tau"), ValidationError);
  CHECK_FALSE(fs::exists(fs::path(out) / "transition.csv"));
  CHECK_FALSE(fs::exists(fs::path(out) / "transition.json"));
}
