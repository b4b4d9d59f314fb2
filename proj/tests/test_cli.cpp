#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bratteli/catalog.hpp"
#include "bratteli/json_io.hpp"
#include "bratteli/link_engine.hpp"
#include "bratteli/realize.hpp"

using namespace bratteli;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int rc = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("bratteli_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  fs::path err = work_dir() / "stderr.txt";
  std::string cmd = std::string(BRATTELI_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string file_arg(const std::string& name) { return (work_dir() / name).string(); }

// Idempotent fixtures: generate the shared inputs through the CLI itself the
// first time a test asks for them.
std::string pascal_flow_file(int depth) {
  std::string path = file_arg("pf" + std::to_string(depth) + ".json");
  if (!fs::exists(path))
    REQUIRE(run_cli("catalog pascal_flow --depth " + std::to_string(depth) +
                    " --beta 0 --mode exact --output " + path)
                .rc == 0);
  return path;
}

std::string bernoulli_file(int depth) {
  std::string path = file_arg("nu" + std::to_string(depth) + ".json");
  if (!fs::exists(path))
    REQUIRE(run_cli("catalog bernoulli --depth " + std::to_string(depth) +
                    " --p 1/2 --mode exact --output " + path)
                .rc == 0);
  return path;
}

}  // namespace

TEST_CASE("cli emits catalog objects that validate cleanly") {
  auto r = run_cli("catalog pascal --depth 3 --output " + file_arg("g.json"));
  REQUIRE(r.rc == 0);
  CHECK(r.out.empty());

  r = run_cli("validate --input " + file_arg("g.json"));
  CHECK(r.rc == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["valid"] == Json(true));
  CHECK(rep["violations"].empty());

  r = run_cli("catalog young --depth 5 --output " + file_arg("y.json"));
  REQUIRE(r.rc == 0);
  CHECK(run_cli("validate --input " + file_arg("y.json")).rc == 0);
}

TEST_CASE("cli validate reports violations with exit code 3") {
  Json j{{"levels", Json::array({Json::array({"1"}), Json::array({"a", "b"})})},
         {"edges", Json::array({Json{{"from", Json::array({0, "1"})},
                                     {"to", Json::array({1, "a"})}}})}};
  write_text_file(file_arg("broken.json"), j.dump());
  auto r = run_cli("validate --input " + file_arg("broken.json"));
  CHECK(r.rc == 3);
  Json rep = Json::parse(r.out);
  CHECK(rep["valid"] == Json(false));
  CHECK(!rep["violations"].empty());
  CHECK(rep["violations"][0].contains("kind"));
}

TEST_CASE("cli link prints the exact csv matrix") {
  std::string pf3 = pascal_flow_file(3);
  auto r = run_cli("link --input " + pf3 + " --upper 3 --lower 2 --mode exact");
  REQUIRE(r.rc == 0);
  CHECK(r.out ==
        "vertex,0,1,2\n"
        "[3,0],1,0,0\n"
        "[3,1],1/3,2/3,0\n"
        "[3,2],0,2/3,1/3\n"
        "[3,3],0,0,1\n");

  // Same matrix as JSON.
  r = run_cli("link --input " + pf3 + " --upper 3 --lower 2 --mode exact --format json");
  REQUIRE(r.rc == 0);
  Json m = Json::parse(r.out);
  CHECK(m["rows"]["[3,1]"] == Json::array({"1/3", "2/3", "0"}));

  // Missing level arguments are a usage failure.
  CHECK(run_cli("link --input " + pf3 + " --upper 3").rc == 3);
}

TEST_CASE("cli harmonic check passes bernoulli and flags tampering") {
  std::string pf4 = pascal_flow_file(4);
  std::string nu4 = bernoulli_file(4);

  auto r = run_cli("harmonic check --input " + pf4 + " --system " + nu4 +
                   " --mode exact --tol 0");
  CHECK(r.rc == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["pass"] == Json(true));
  CHECK(rep["max_residual"] == Json(0.0));

  Json nu = load_json_file(nu4);
  nu["[2,0]"] = "1/3";
  write_text_file(file_arg("nu4_bad.json"), nu.dump());
  r = run_cli("harmonic check --input " + pf4 + " --system " + file_arg("nu4_bad.json") +
              " --mode exact --tol 0");
  CHECK(r.rc == 3);
  CHECK(Json::parse(r.out)["pass"] == Json(false));
}

TEST_CASE("cli harmonic extend pushes a measure down") {
  Json mu{{"level", 2}, {"weights", Json{{"1", 1}}}};
  write_text_file(file_arg("mu.json"), mu.dump());
  auto r = run_cli("harmonic extend --input " + pascal_flow_file(4) + " --measure " +
                   file_arg("mu.json") + " --mode exact");
  REQUIRE(r.rc == 0);
  Json nu = Json::parse(r.out);
  CHECK(nu["[0,1]"] == Json("1"));
  CHECK(nu["[1,0]"] == Json("1/2"));
  CHECK(nu["[1,1]"] == Json("1/2"));
  CHECK(nu["[2,1]"] == Json("1"));
  CHECK(nu["[2,0]"] == Json("0"));
}

TEST_CASE("cli converge reproduces the ergodic table") {
  std::string pf5 = pascal_flow_file(5);
  std::string nu5 = bernoulli_file(5);
  Json path{{"path", Json::array({Json::array({1, "0"}), Json::array({2, "1"}),
                                  Json::array({3, "1"}), Json::array({4, "2"}),
                                  Json::array({5, "2"})})}};
  write_text_file(file_arg("path.json"), path.dump());

  auto r = run_cli("converge --input " + pf5 + " --system " + nu5 + " --target 1,1 --path " +
                   file_arg("path.json") + " --mode exact --deviation");
  REQUIRE(r.rc == 0);
  CHECK(r.out ==
        "m,[1,1],dev [1,1]\n"
        "2,1/2,0\n"
        "3,1/3,1/6\n"
        "4,1/2,0\n"
        "5,2/5,1/10\n");

  // Sampled variant is deterministic under a fixed seed.
  std::string sampled =
      "converge --input " + pf5 + " --system " + nu5 + " --target 1,1 --height 5 --seed 9";
  auto a = run_cli(sampled);
  auto b = run_cli(sampled);
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("m,[1,1]\n", 0) == 0);

  // Needs either a path file or a height.
  CHECK(run_cli("converge --input " + pf5 + " --system " + nu5 + " --target 1,1").rc == 3);
}

TEST_CASE("cli sample emits replayable JSON lines") {
  std::string base = "sample --input " + pascal_flow_file(4) + " --system " +
                     bernoulli_file(4) + " --mode exact --depth 4 --count 3";
  auto a = run_cli(base + " --seed 42");
  auto b = run_cli(base + " --seed 42");
  auto c = run_cli(base + " --seed 43");
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);

  int lines = 0;
  std::istringstream in(a.out);
  for (std::string line; std::getline(in, line); ++lines) {
    Json p = Json::parse(line);
    CHECK(p.contains("seed"));
    CHECK(p["path"].size() == 4);
  }
  CHECK(lines == 3);

  CHECK(run_cli(base + " --direction up --seed 7").rc == 0);
  CHECK(run_cli(base + " --direction sideways").rc == 3);
}

TEST_CASE("cli realize produces a flow with unit partition functions") {
  // Binomial graph at depth 2 with its own canonical link.
  auto f0 = pascal_flow<Rational>(2, 0.0);
  AbstractLink<Rational> k;
  k.graph = f0.graph_ptr();
  k.weights.resize(3);
  const GradedGraph& g = f0.graph();
  for (int n = 1; n <= 2; ++n)
    for (const Edge& e : g.edges_at(n))
      k.weights[n].push_back(link_adjacent(f0, {n, e.target}, {n - 1, e.source}));
  write_text_file(file_arg("link.json"), link_spec_to_json(k).dump());

  auto r = run_cli("realize --input " + file_arg("link.json") +
                   " --beta 1 --mode exact --style geometric:1/2 --output " +
                   file_arg("realized.json"));
  REQUIRE(r.rc == 0);

  r = run_cli("partition --input " + file_arg("realized.json") + " --mode exact");
  REQUIRE(r.rc == 0);
  Json table = Json::parse(r.out);
  for (auto it = table["vertexZ"].begin(); it != table["vertexZ"].end(); ++it)
    CHECK(it.value() == Json("1"));

  // An invalid link is rejected with a structured error.
  Json bad = link_spec_to_json(k);
  bad["edges"][0]["kappa"] = "1/3";
  write_text_file(file_arg("bad_link.json"), bad.dump());
  r = run_cli("realize --input " + file_arg("bad_link.json") + " --beta 1 --mode exact");
  CHECK(r.rc == 3);
  CHECK(Json::parse(r.err)["error"]["code"] == Json("invalid-link"));
}

TEST_CASE("cli maps error classes to exit codes") {
  // Missing file: io error.
  auto r = run_cli("partition --input " + file_arg("nowhere.json"));
  CHECK(r.rc == 5);
  CHECK(Json::parse(r.err)["error"]["code"] == Json("io-error"));

  // Unparseable JSON: parse error.
  write_text_file(file_arg("garbage.json"), "{ nope");
  CHECK(run_cli("partition --input " + file_arg("garbage.json")).rc == 2);

  // Nonzero spectra cannot be re-trusted in exact mode: numeric-mode conflict.
  REQUIRE(run_cli("catalog q_pascal --depth 3 --beta 1 --q 1/2 --output " +
                  file_arg("qfloat.json"))
              .rc == 0);
  r = run_cli("partition --input " + file_arg("qfloat.json") + " --mode exact");
  CHECK(r.rc == 4);
  CHECK(Json::parse(r.err)["error"]["code"] == Json("numeric-mode-conflict"));

  // Usage problems: unknown subcommand / bad mode / unknown catalog name.
  CHECK(run_cli("frobnicate").rc == 2);
  CHECK(run_cli("partition --input " + pascal_flow_file(3) + " --mode ternary").rc == 3);
  CHECK(run_cli("catalog nosuch --depth 3").rc == 3);
}

TEST_CASE("cli respects --output everywhere") {
  auto r = run_cli("catalog plancherel --depth 4 --mode exact --output " +
                   file_arg("pl.json"));
  REQUIRE(r.rc == 0);
  CHECK(r.out.empty());
  Json nu = load_json_file(file_arg("pl.json"));
  CHECK(nu["[3,2+1]"] == Json("2/3"));
}
