#include <doctest.h>

#include <stdexcept>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string log = "cli_output.txt";
  const std::string cmd = std::string(RGGCROSS_BIN) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help lists every flag") {
  const Run top = run("--help");
  CHECK(top.code == 0);
  CHECK(top.output.find("--workers") != std::string::npos);
  const Run c = run("constants --help");
  CHECK(c.code == 0);
  for (const char* flag : {"--d", "--body", "--plane", "--n-samples", "--seed", "--out", "--weight"}) {
    CHECK(c.output.find(flag) != std::string::npos);
  }
  const Run e = run("experiment --help");
  CHECK(e.output.find("--config") != std::string::npos);
  CHECK(e.output.find("--out-dir") != std::string::npos);
  const Run s = run("search --help");
  for (const char* flag : {"--graph", "--K", "--seed", "--out-dir"}) CHECK(s.output.find(flag) != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("constants --d 1").code == 2);
  CHECK(run("constants --n-samples 1.5").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("").code == 2);
  std::ofstream("bad.ini") << "t_grid = 10\nbody = torus\n";
  const Run r = run("experiment --config bad.ini --out-dir cli_bad");
  CHECK(r.code == 2);
  CHECK(r.output.find("body") != std::string::npos);
  std::ofstream("bad_graph.txt") << "3 2 0.5\n0 0 0\n1 1\n";
  const Run g = run("search --graph bad_graph.txt --out-dir cli_bad");
  CHECK(g.code == 2);
  CHECK(g.output.find("line 3") != std::string::npos);
}

TEST_CASE("constants: checks pass and output is reproducible") {
  const Run a = run("constants --d 3 --body ball --n-samples 1e5 --seed 42 --out c_a.json --workers 1");
  const Run b = run("constants --d 3 --body ball --n-samples 1e5 --seed 42 --out c_b.json --workers 3");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(slurp("c_a.json") == slurp("c_b.json"));
  const auto j = nlohmann::json::parse(slurp("c_a.json"));
  CHECK(j["checks"]["c_d_cap"]["pass"].get<bool>());
  CHECK(j["d"] == 3);
  CHECK(j["seed"] == 42);
  CHECK(fs::exists("c_a.json.manifest.json"));

  CHECK(run("constants --d 2 --n-samples 1e4 --out c_2.json").code == 0);
  const auto j2 = nlohmann::json::parse(slurp("c_2.json"));
  CHECK(j2["I2"]["value"].get<double>() == 1.0);
  CHECK(j2["I2"]["std_error"].get<double>() == 0.0);
}

TEST_CASE("predict") {
  const Run r = run("predict --d 3 --t 1000 2000 --n-samples 1e4 --out pred.json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp("pred.json"));
  REQUIRE(j["predictions"].size() == 2);
  CHECK(j["predictions"][0]["var_cr_lb"].get<double>() <= j["predictions"][0]["var_cr_ub"].get<double>());
  const Run flat = run("predict --d 2 --t 500 --delta 0.05 --n-samples 1e4 --out pred2.json");
  CHECK(flat.code == 0);
  CHECK(nlohmann::json::parse(slurp("pred2.json"))["predictions"][0]["var_cr_lb"].is_null());
}

TEST_CASE("smoke experiment") {
  const auto start = std::chrono::steady_clock::now();
  const Run r = run(std::string("experiment --config ") + RGGCROSS_CONFIGS + "/smoke.ini --out-dir cli_smoke");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(r.code == 0);
  CHECK(secs < 10.0);
  const fs::path dir = fs::path("cli_smoke") / "smoke";
  CHECK(fs::exists(dir / "raw.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(slurp(dir / "raw.csv").rfind("t,delta,rep,plane_id,n,m,cr,stress\n", 0) == 0);
  const std::string first = slurp(dir / "raw.csv");
  CHECK(run(std::string("experiment --config ") + RGGCROSS_CONFIGS + "/smoke.ini --out-dir cli_smoke --workers 4").code ==
        0);
  CHECK(slurp(dir / "raw.csv") == first);
}

TEST_CASE("generate and search") {
  CHECK(run("generate --d 3 --t 600 --delta 0.3 --seed 5 --out g3.txt").code == 0);
  const Run r = run("search --graph g3.txt --K 20 --seed 9 --out-dir cli_search");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp("cli_search/search.json"));
  CHECK(j["planes"].size() == 20);
  CHECK(j["min_cr"].get<double>() <= j["median_cr"].get<double>());
  if (j["lemma_applies"].get<bool>()) CHECK(j["ratio_bound"].get<double>() >= 1.0);
  CHECK(fs::exists("cli_search/best_drawing.txt"));
  CHECK(fs::exists("cli_search/planes.csv"));

  CHECK(run("generate --d 2 --t 300 --delta 0.1 --out g2.txt").code == 0);
  CHECK(run("search --graph g2.txt --K 50 --out-dir cli_search2").code == 0);
  CHECK(nlohmann::json::parse(slurp("cli_search2/search.json"))["planes"].size() == 1);
}
