// End-to-end checks of the command line tool. The binary path arrives as the
// last command argument (wired up by the build).
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_work;

struct RunResult {
  int code = -1;
  std::string output;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path out_file = g_work / "cli_output.txt";
  const std::string cmd =
      "\"" + g_cli + "\" " + args + " > \"" + out_file.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult result;
  if (WIFEXITED(rc)) result.code = WEXITSTATUS(rc);
  result.output = slurp(out_file);
  return result;
}

fs::path out_dir(const std::string& name) { return g_work / name; }

}  // namespace

TEST_CASE("help and usage") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("model --help").code == 0);
  CHECK(run_cli("no-such-subcommand").code == 1);
  CHECK(run_cli("").code == 1);
}

TEST_CASE("model prints the two level matrices and writes a manifest") {
  const fs::path dir = out_dir("model2");
  const RunResult r = run_cli("model --system molecule:2 --print --out-dir " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(r.output.find("-1i") != std::string::npos);
  CHECK(r.output.find("-4i") != std::string::npos);
  CHECK(r.output.find("-0.5i") != std::string::npos);

  const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("format") == "bilqctrl.manifest.v1");
  CHECK(manifest.at("subcommand") == "model");
  CHECK(manifest.at("tool") == "bilqctrl");
}

TEST_CASE("model round-trips a system through --save") {
  const fs::path dir = out_dir("model_save");
  REQUIRE(run_cli("model --system molecule:3 --save sys.json --out-dir " + dir.string()).code ==
          0);
  REQUIRE(fs::exists(dir / "sys.json"));
  // the saved file feeds back in as a system source
  const RunResult r =
      run_cli("model --system " + (dir / "sys.json").string() + " --print --out-dir " +
              out_dir("model_reload").string());
  CHECK(r.code == 0);
  CHECK(r.output.find("molecule-3") != std::string::npos);
}

TEST_CASE("io failures exit with code 2") {
  CHECK(run_cli("model --system /nonexistent/system.json").code == 2);

  // an out-dir blocked by a plain file cannot be created
  const fs::path blocker = g_work / "blocker";
  std::ofstream(blocker) << "not a directory\n";
  CHECK(run_cli("model --system molecule:2 --out-dir " + (blocker / "sub").string()).code == 2);
}

TEST_CASE("malformed input files exit with code 1 and name the line") {
  const fs::path bad = g_work / "bad_system.json";
  std::ofstream(bad) << "{\n  \"format\": \"bilqctrl.system.v1\",\n  broken\n}\n";
  const RunResult r = run_cli("model --system " + bad.string());
  CHECK(r.code == 1);
  CHECK(r.output.find("line") != std::string::npos);
}

TEST_CASE("propagate integrates a constant drive and writes the trajectory") {
  const fs::path dir = out_dir("prop_const");
  const RunResult r = run_cli(
      "propagate --system molecule:4 --initial 1 --const-u 1.0 --duration 1.0 --samples 11 "
      "--out-dir " +
      dir.string());
  REQUIRE(r.code == 0);
  CHECK(r.output.find("final norm") != std::string::npos);

  const std::string csv = slurp(dir / "trajectory.csv");
  CHECK(csv.rfind("# bilqctrl.trajectory.v1\n", 0) == 0);
  // tag + header + 11 sample rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(csv.find("t,re_1,im_1") != std::string::npos);
  CHECK(csv.find("norm,energy") != std::string::npos);
}

TEST_CASE("propagate accepts a control file and validates its flags") {
  const fs::path control = g_work / "control.json";
  std::ofstream(control) << R"({
    "format": "bilqctrl.control.v1",
    "breakpoints": [0.0, 0.5, 2.0],
    "values": [1.0, -0.25]
  })";
  const fs::path dir = out_dir("prop_file");
  const RunResult r = run_cli("propagate --system molecule:3 --control " + control.string() +
                              " --out-dir " + dir.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "trajectory.csv"));

  // a drive must come from exactly one source
  CHECK(run_cli("propagate --system molecule:3 --out-dir " + out_dir("prop_none").string())
            .code == 1);
  CHECK(run_cli("propagate --system molecule:3 --control " + control.string() +
                " --const-u 1.0 --duration 1.0 --out-dir " + out_dir("prop_both").string())
            .code == 1);
  // constant drives need a positive horizon
  CHECK(run_cli("propagate --system molecule:3 --const-u 1.0 --duration -2.0 --out-dir " +
                out_dir("prop_neg").string())
            .code == 1);
}

TEST_CASE("transitions reports a clean ladder in JSON") {
  const fs::path dir = out_dir("transitions8");
  const RunResult r = run_cli("transitions --system molecule:8 --out-dir " + dir.string());
  REQUIRE(r.code == 0);

  const nlohmann::json doc = nlohmann::json::parse(slurp(dir / "transitions.json"));
  REQUIRE(doc.at("records").size() == 7);
  for (const auto& rec : doc.at("records")) {
    CHECK(rec.at("nondegenerate") == true);
    CHECK(rec.at("degenerate_conflicts").empty());
  }
  CHECK(doc.at("resonance_sets").at(0).at("pairs").empty());
  CHECK(doc.at("chain").at("exists") == true);
}

TEST_CASE("synthesize writes a schedule meeting the fidelity target") {
  const fs::path dir = out_dir("synth");
  const RunResult r = run_cli(
      "synthesize --system molecule:6 --pair 1,2 --shape duty --eta 0.2 --n 8 --scan-csv "
      "scan.csv --out-dir " +
      dir.string());
  REQUIRE(r.code == 0);

  const nlohmann::json sched = nlohmann::json::parse(slurp(dir / "schedule.json"));
  CHECK(sched.at("fidelity").get<double>() >= 0.99);
  const double t_star_n = sched.at("t_star_n").get<double>();
  REQUIRE(sched.at("window").size() == 2);
  CHECK(t_star_n > sched.at("window").at(0).get<double>());
  CHECK(t_star_n < sched.at("window").at(1).get<double>());

  const std::string scan = slurp(dir / "scan.csv");
  CHECK(scan.rfind("# bilqctrl.fidelity_scan.v1\n", 0) == 0);

  // a detuned duty window on a resonant lattice is rejected upstream
  CHECK(run_cli("synthesize --system molecule:6 --pair 1,3 --shape cosine --out-dir " +
                out_dir("synth_bad").string())
            .code == 1);
}

TEST_CASE("cost-sweep outputs are byte-identical across reruns and thread counts") {
  const fs::path dir = out_dir("sweep");
  const std::string args =
      "cost-sweep --system molecule:8 --pair 1,2 --etas 0.4,0.2 --target-fidelity 0.99 "
      "--max-n 32 --r-values 2 --lr-eta 0.1 --lr-n 2,4 --trials 20 --cap-budgets 1.0,2.0 "
      "--seed 42 --out-dir " +
      dir.string();

  REQUIRE(run_cli(args).code == 0);
  const std::vector<std::string> files = {"c1_sweep.csv", "lr_scaling.csv", "cap_trials.csv",
                                          "summary.json", "manifest.json"};
  std::vector<std::string> first;
  for (const std::string& name : files) {
    first.push_back(slurp(dir / name));
    CHECK(!first.back().empty());
  }

  REQUIRE(run_cli(args).code == 0);
  for (std::size_t i = 0; i < files.size(); ++i) {
    CHECK(first[i] == slurp(dir / files[i]));
  }

  // a single worker must produce the same bytes as the default pool
  setenv("BILQCTRL_THREADS", "1", 1);
  REQUIRE(run_cli(args).code == 0);
  unsetenv("BILQCTRL_THREADS");
  for (std::size_t i = 0; i < files.size(); ++i) {
    CHECK(first[i] == slurp(dir / files[i]));
  }

  const nlohmann::json summary = nlohmann::json::parse(first[3]);
  CHECK(summary.at("c1_bracket").at("lower").get<double>() <= 3.1416);
  CHECK(summary.at("c1_bracket").at("upper").get<double>() >= 3.14);
  CHECK(summary.at("cap_reports").size() == 2);

  // budgets at or above pi are rejected
  CHECK(run_cli("cost-sweep --system molecule:8 --pair 1,2 --cap-budgets 3.2 --out-dir " +
                out_dir("sweep_bad").string())
            .code == 1);
}

TEST_CASE("convergence studies produce decreasing errors") {
  const fs::path dir = out_dir("conv");
  const RunResult r = run_cli(
      "convergence --mode both --shape cosine --system molecule:14 --pair 1,2 "
      "--resolutions 16,32,64 --oracle-steps 512 --periods 4 --small 8 --large 14 --n 8 "
      "--out-dir " +
      dir.string());
  REQUIRE(r.code == 0);

  const std::string disc = slurp(dir / "convergence_discretization.csv");
  CHECK(disc.rfind("# bilqctrl.convergence.v1\n", 0) == 0);
  std::istringstream lines(disc);
  std::string line;
  std::getline(lines, line);  // tag
  std::getline(lines, line);  // header
  double prev = 1e300;
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const double err = std::stod(line.substr(comma + 1));
    CHECK(err < prev);
    prev = err;
    ++rows;
  }
  CHECK(rows == 3);

  const std::string galerkin = slurp(dir / "convergence_galerkin.csv");
  CHECK(galerkin.rfind("# bilqctrl.galerkin.v1\n", 0) == 0);
  CHECK(galerkin.find("deviation,deviation_padded") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli-binary> [doctest args]\n", argv[0]);
    return 1;
  }
  g_cli = argv[argc - 1];
  if (!fs::exists(g_cli)) {
    std::fprintf(stderr, "cli binary not found: %s\n", g_cli.c_str());
    return 1;
  }
  g_work = fs::temp_directory_path() /
           ("bilqctrl_cli_test_" + std::to_string(static_cast<long>(getpid())));
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  doctest::Context context;
  context.applyCommandLine(argc - 1, argv);
  const int rc = context.run();
  fs::remove_all(g_work);
  return rc;
}
