#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

// Runs the CLI with the given arguments, capturing stdout.
RunResult run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd =
      std::string(UENTROPY_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("compute: table rows") {
  const auto r = run("compute --p 0.5,0.5 --u log --q h");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "log"));
  CHECK(contains(r.out, "0.693147"));

  const auto r2 = run("compute --p 0.8,0.2 --u iso:0.5 --q h");
  CHECK(r2.exit_code == 0);
  CHECK(contains(r2.out, "0.385662"));

  const auto r3 = run("compute --p 0.5,0.5 --pq 1,0 --u log --q H");
  CHECK(r3.exit_code == 0);
  CHECK(contains(r3.out, "inf"));

  const auto multi = run("compute --p 0.8,0.2 --u log --u iso:-1 --q h --q n --alloc");
  CHECK(multi.exit_code == 0);
  CHECK(contains(multi.out, "iso:-1"));
}

TEST_CASE("compute: composed utility descriptors") {
  // Affine transforms leave the entropy untouched.
  const auto r = run("compute --p 0.8,0.2 --u affine:2:3:iso:0.5 --q h");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "0.385662"));
  const auto r2 = run("compute --p 0.8,0.2 --u rescale:2:log --q h");
  CHECK(r2.exit_code == 0);
  CHECK(contains(r2.out, "0.500402"));  // Shannon of (0.8,0.2)
}

TEST_CASE("compute: csv and quantities across the board") {
  const auto r = run(
      "compute --p 0.6,0.4 --pq 0.5,0.5 --u iso:0.5 "
      "--q h --q H --q n --q N --q fhs_D --q fhs_H --q arimoto --q frittelli "
      "--q shannon --q renyi --q sharma_mittal --format csv");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "utility,quantity,value,lambda"));
  CHECK(contains(r.out, "fhs_D"));
  CHECK(contains(r.out, "frittelli"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("compute --p 0.5,0.x5 --u log --q h", true).exit_code == 2);
  CHECK(run("compute --p 0.5,0.5 --u iso:2 --q h", true).exit_code == 2);
  CHECK(run("compute --p 0.5,0.5 --u log --q nonsense", true).exit_code == 2);
  CHECK(run("compute --p 0.7,0.7 --u log --q h", true).exit_code == 2);   // off unit mass
  CHECK(run("compute --p 0.5,0.5 --u log --q H", true).exit_code == 2);   // H needs --pq
  CHECK(run("verify --trials 0", true).exit_code == 2);
  CHECK(run("nonsense", true).exit_code == 2);
}

TEST_CASE("domain errors exit 3") {
  // fhs_D undefined when p is not absolutely continuous w.r.t. q.
  const auto r = run("compute --p 0.5,0.5 --pq 1,0 --u log --q fhs_D", true);
  CHECK(r.exit_code == 3);
  CHECK(contains(r.out, "p << q"));
  // Arimoto precondition u(1) = 0.
  CHECK(run("compute --p 0.5,0.5 --u affine:1:5:log --q arimoto", true).exit_code == 3);
  // Oracle size cap.
  CHECK(run("oracle --p 0.2,0.2,0.2,0.2,0.2 --u log", true).exit_code == 3);
}

TEST_CASE("verify: deterministic, exits 0 within tolerance") {
  const auto a = run("verify --seed 42 --trials 40");
  const auto b = run("verify --seed 42 --trials 40");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "all identities within tolerance"));

  // Restricted utility families.
  CHECK(run("verify --seed 7 --trials 10 --u log").exit_code == 0);
  CHECK(run("verify --seed 7 --trials 10 --u iso:-1 --u iso:0.5").exit_code == 0);
  CHECK(run("verify --trials 5 --u affine:2:3:log", true).exit_code == 2);
}

TEST_CASE("verify: zero tolerance failure report") {
  const std::string cmd = "UENTROPY_TOL=0 " + std::string(UENTROPY_CLI_PATH) +
                          " verify --seed 42 --trials 1 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int code = WEXITSTATUS(pclose(pipe));
  CHECK(code == 1);
  CHECK(contains(out, "FAIL"));
  CHECK(contains(out, "p=["));  // counterexample vectors are listed verbatim
}

TEST_CASE("oracle command") {
  const auto r = run("oracle --p 0.5,0.5 --u log --resolution 10000");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "gap"));
  CHECK(contains(r.out, "ok"));

  // Point mass: both routes sit at u(1) = 0.
  const auto pm = run("oracle --p 1,0 --u iso:0.5 --resolution 1000");
  CHECK(pm.exit_code == 0);
}

TEST_CASE("compute output is deterministic") {
  const std::string args = "compute --p 0.37,0.21,0.42 --pq 0.3,0.3,0.4 "
                           "--u iso:-2 --u log --q h --q H --q fhs_D --alloc --format csv";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("json output round-trips bit-for-bit") {
  const std::string tmp = "cli_roundtrip_tmp.json";
  {
    const auto r = run("compute --p 0.61803398874989485,0.38196601125010515 --pq 0.25,0.75 "
                       "--u iso:0.5 --u log --q h --q H --q n --alloc --format json");
    REQUIRE(r.exit_code == 0);
    std::ofstream f(tmp);
    f << r.out;
  }
  const auto direct = run("compute --p 0.61803398874989485,0.38196601125010515 --pq 0.25,0.75 "
                          "--u iso:0.5 --u log --q h --q H --q n --alloc --format json");
  const auto reread = run("compute --p " + tmp +
                          " --u iso:0.5 --u log --q h --q H --q n --alloc --format json");
  REQUIRE(reread.exit_code == 0);

  const auto ja = nlohmann::json::parse(direct.out);
  const auto jb = nlohmann::json::parse(reread.out);
  CHECK(ja["p"] == jb["p"]);
  CHECK(ja["q"] == jb["q"]);
  CHECK(ja["results"] == jb["results"]);
  std::remove(tmp.c_str());
}

TEST_CASE("json file input supplies q; --pq overrides") {
  {
    std::ofstream f("cli_pair_tmp.json");
    f << R"({"p": [0.5, 0.5], "q": [0.25, 0.75]})";
  }
  const auto r = run("compute --p cli_pair_tmp.json --u log --q H");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "0.143841"));

  const auto over = run("compute --p cli_pair_tmp.json --pq 0.5,0.5 --u log --q H");
  CHECK(over.exit_code == 0);
  CHECK(contains(over.out, "0.000000"));

  // A file works for --pq as well (its p vector is taken as q).
  {
    std::ofstream f("cli_q_tmp.csv");
    f << "0.25,0.75\n";
  }
  const auto qf = run("compute --p 0.5,0.5 --pq cli_q_tmp.csv --u log --q H");
  CHECK(qf.exit_code == 0);
  CHECK(contains(qf.out, "0.143841"));
  std::remove("cli_pair_tmp.json");
  std::remove("cli_q_tmp.csv");
}

TEST_CASE("csv file input with line diagnostics") {
  {
    std::ofstream f("cli_vectors_tmp.csv");
    f << "0.5,0.5\n0.25,0.75\n";
  }
  const auto r = run("compute --p cli_vectors_tmp.csv --u log --q H");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "0.143841"));

  {
    std::ofstream f("cli_vectors_tmp.csv");
    f << "0.5,oops\n";
  }
  const auto bad = run("compute --p cli_vectors_tmp.csv --u log --q h", true);
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.out, "line 1"));
  CHECK(contains(bad.out, "column 2"));
  std::remove("cli_vectors_tmp.csv");
}

TEST_CASE("renormalize flag") {
  CHECK(run("compute --p 1,1 --u log --q h", true).exit_code == 2);
  const auto r = run("compute --p 1,1 --u log --q h --renormalize");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "0.693147"));
}
