#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = NETHJ_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "nethj_cli_out.txt";
  const std::string cmd = kCli + " " + args + " > " + out.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("generate writes one file per level plus manifests") {
  TempDir tmp("nethj_cli_gen");
  const auto seq_dir = tmp.path / "seq";
  const RunResult r =
      run("generate --kind dyadic --depth 3 --out " + seq_dir.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(seq_dir / "level_00.json"));
  CHECK(fs::exists(seq_dir / "level_01.json"));
  CHECK(fs::exists(seq_dir / "level_02.json"));
  CHECK_FALSE(fs::exists(seq_dir / "level_03.json"));
  CHECK(fs::exists(seq_dir / "manifest.json"));
  const std::string manifest = slurp(seq_dir / "run_manifest.json");
  CHECK(manifest.find("\"subcommand\": \"generate\"") != std::string::npos);
  CHECK(manifest.find("\"depth\": 3") != std::string::npos);
}

TEST_CASE("re-running generate is byte-identical") {
  TempDir tmp("nethj_cli_repro");
  const auto d1 = tmp.path / "a";
  const auto d2 = tmp.path / "b";
  REQUIRE(run("generate --kind sierpinski --depth 2 --out " + d1.string())
              .exit_code == 0);
  REQUIRE(run("generate --kind sierpinski --depth 2 --out " + d2.string())
              .exit_code == 0);
  for (const auto& entry : fs::directory_iterator(d1)) {
    const auto name = entry.path().filename();
    if (name == "run_manifest.json") continue;  // echoes the --out path
    CHECK(slurp(entry.path()) == slurp(d2 / name));
  }
}

TEST_CASE("missing required flags yield usage errors with exit 2") {
  const RunResult r = run("solve --T 1.0 --out /tmp/u.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("--network") != std::string::npos);
  CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("module errors surface as json with exit 1") {
  TempDir tmp("nethj_cli_err");
  const auto bad = tmp.path / "bad.json";
  std::ofstream(bad) << "{\"dim\": 1, \"vertices\": [[0],[0],[1]], "
                        "\"edges\": [[0,2],[1,2]]}";
  const RunResult r = run("solve --network " + bad.string() +
                          " --g '{\"kind\":\"coordinate\",\"axis\":0}'"
                          " --T 0.1 --out " +
                          (tmp.path / "u.csv").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("DuplicateVertex") != std::string::npos);
  CHECK(r.output.find("\"error\"") != std::string::npos);
}

TEST_CASE("solve and hausdorff run end to end") {
  TempDir tmp("nethj_cli_solve");
  const auto seq_dir = tmp.path / "seq";
  REQUIRE(run("generate --kind dyadic --depth 4 --out " + seq_dir.string())
              .exit_code == 0);
  const auto csv = tmp.path / "u.csv";
  const RunResult rs =
      run("solve --network " + (seq_dir / "level_03.json").string() +
          " --g '{\"kind\":\"coordinate\",\"axis\":0}' --T 0.2 --out " +
          csv.string());
  CHECK(rs.exit_code == 0);
  const std::string body = slurp(csv);
  CHECK(body.rfind("t,edge,s,x1,u", 0) == 0);
  CHECK(fs::exists(csv.string() + ".manifest.json"));

  const RunResult rh = run("hausdorff " + (seq_dir / "level_00.json").string() +
                           " " + (seq_dir / "level_03.json").string() +
                           " --h 1e-3");
  CHECK(rh.exit_code == 0);
  CHECK(rh.output.find("\"value\"") != std::string::npos);
  CHECK(rh.output.find("0.4375") != std::string::npos);  // 2^-1 - 2^-4
}

TEST_CASE("converge reports CONVERGED on the dyadic sequence") {
  TempDir tmp("nethj_cli_conv");
  const auto seq_dir = tmp.path / "seq";
  REQUIRE(run("generate --kind dyadic --depth 4 --out " + seq_dir.string())
              .exit_code == 0);
  const auto out_dir = tmp.path / "report";
  const RunResult r =
      run("converge --sequence " + (seq_dir / "manifest.json").string() +
          " --g '{\"kind\":\"coordinate\",\"axis\":0}' --T 0.4"
          " --m 1 --n 1..3 --out " +
          out_dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("m=1: CONVERGED") != std::string::npos);
  CHECK(fs::exists(out_dir / "report.json"));
  CHECK(fs::exists(out_dir / "convergence.csv"));
  CHECK(fs::exists(out_dir / "run_manifest.json"));
}

TEST_CASE("verify prints a certification report") {
  TempDir tmp("nethj_cli_verify");
  const auto seq_dir = tmp.path / "seq";
  REQUIRE(run("generate --kind sierpinski --depth 3 --out " + seq_dir.string())
              .exit_code == 0);
  const RunResult r =
      run("verify --sequence " + (seq_dir / "manifest.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"nesting_ok\": true") != std::string::npos);
  CHECK(r.output.find("\"mode\": \"shrinking_r\"") != std::string::npos);
}

TEST_CASE("residual emits per-node rows") {
  TempDir tmp("nethj_cli_resid");
  const auto seq_dir = tmp.path / "seq";
  REQUIRE(run("generate --kind dyadic --depth 4 --out " + seq_dir.string())
              .exit_code == 0);
  const auto csv = tmp.path / "r.csv";
  const RunResult r =
      run("residual --network " + (seq_dir / "level_03.json").string() +
          " --g '{\"kind\":\"coordinate\",\"axis\":0}' --T 0.2 --out " +
          csv.string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(csv).rfind("edge,s,t,residual", 0) == 0);
  CHECK(r.output.find("\"max\"") != std::string::npos);
}

TEST_CASE("--version prints the tool version") {
  const RunResult r = run("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("nethj") != std::string::npos);
}
