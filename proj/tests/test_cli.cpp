#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CONEZETA_BIN_PATH
#error "CONEZETA_BIN_PATH must be defined"
#endif
#ifndef CONEZETA_DATA_DIR
#error "CONEZETA_DATA_DIR must be defined"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& tmp_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "conezeta_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI through the shell; `prefix` lets tests set environment
// variables for the child (e.g. "CONEZETA_WORKERS=3 ").
RunResult run(const std::string& args, const std::string& prefix = "") {
  static int seq = 0;
  fs::path outp = tmp_dir() / ("out" + std::to_string(seq) + ".txt");
  fs::path errp = tmp_dir() / ("err" + std::to_string(seq) + ".txt");
  ++seq;
  std::string cmd = prefix + "'" + CONEZETA_BIN_PATH + "' " + args + " > '" +
                    outp.string() + "' 2> '" + errp.string() + "'";
  int status = std::system(cmd.c_str());
  RunResult r;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  r.code = WEXITSTATUS(status);
  r.out = slurp(outp);
  r.err = slurp(errp);
  return r;
}

std::string data_file(const std::string& name) {
  return (fs::path(CONEZETA_DATA_DIR) / name).string();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("catalog lists the built-in groups") {
  RunResult r = run("catalog");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "heisenberg"));
  CHECK(contains(r.out, "dinfty"));
  CHECK(contains(r.out, "abelian:"));
}

TEST_CASE("verify passes on catalog groups") {
  RunResult r = run("verify --group abelian:3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "verify: PASS"));
  RunResult r2 = run("verify --group heisc2");
  CHECK(r2.code == 0);
  CHECK(contains(r2.out, "K enumeration"));
}

TEST_CASE("verify rejects a law-breaking presentation with exit 2") {
  RunResult r = run("verify --group '" + data_file("badpresentation.json") + "'");
  CHECK(r.code == 2);
}

TEST_CASE("verify rejects a broken cocycle with exit 2") {
  RunResult r = run("verify --group '" + data_file("badcocycle.json") + "'");
  CHECK(r.code == 2);
}

TEST_CASE("extension file loads and counts like the catalog dinfty") {
  RunResult r = run("local --group '" + data_file("dinfty.json") +
                    "' --K 1 --prime 2 --kmax 2");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"dinfty-file"));
  CHECK(contains(r.out, "\"2\""));
  CHECK(contains(r.out, "\"4\""));
}

TEST_CASE("local heisenberg normal at p = 3") {
  RunResult r = run("local --group heisenberg --variant normal --prime 3 --kmax 2");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"type\": \"local\""));
  CHECK(contains(r.out, "\"4\""));
  CHECK(contains(r.out, "\"13\""));
}

TEST_CASE("local csv rows") {
  RunResult r = run("local --group abelian:2 --prime 2 --kmax 2 --format csv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "label,p,variant,K,k,count,a_raw"));
  CHECK(contains(r.out, "abelian:2:sub,2,sub,0,1,3,3/16"));
  CHECK(contains(r.out, "abelian:2:sub,2,sub,0,2,7,7/64"));
}

TEST_CASE("oracle-compare agrees on dinfty across all K") {
  RunResult r = run("oracle-compare --group dinfty --K all --prime 2 --kmax 2");
  CHECK(r.code == 0);
  CHECK(contains(r.err, "all counts agree"));
  CHECK(contains(r.out, "\"all_match\": true"));
}

TEST_CASE("oracle budget exhaustion exits 3") {
  RunResult r =
      run("oracle-compare --group heisenberg --prime 2 --kmax 2 --budget 1000");
  CHECK(r.code == 3);
  CHECK(contains(r.err, "budget"));
}

TEST_CASE("too-low oracle precision exits 4") {
  RunResult r =
      run("oracle-compare --group heisenberg --prime 2 --kmax 2 --e 1");
  CHECK(r.code == 4);
}

TEST_CASE("conditions output is byte-stable") {
  fs::path f1 = tmp_dir() / "cond1.json";
  fs::path f2 = tmp_dir() / "cond2.json";
  RunResult r1 = run("conditions --group heisenberg --variant normal --out '" +
                     f1.string() + "'");
  RunResult r2 = run("conditions --group heisenberg --variant normal --out '" +
                     f2.string() + "'");
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  std::string a = slurp(f1), b = slurp(f2);
  CHECK(a == b);
  CHECK(contains(a, "\"type\": \"conditions\""));
}

TEST_CASE("missing required options exit 1") {
  RunResult r = run("local --group heisenberg --kmax 2");
  CHECK(r.code == 1);
  RunResult r2 = run("local --prime 2 --kmax 2");
  CHECK(r2.code == 1);
}

TEST_CASE("unknown group exits 1") {
  RunResult r = run("local --group nosuchgroup --prime 2 --kmax 1");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "catalog"));
}

TEST_CASE("non-prime p exits 1") {
  RunResult r = run("local --group abelian:2 --prime 6 --kmax 1");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "not prime"));
}

TEST_CASE("global dinfty csv") {
  RunResult r = run("global --group dinfty --nmax 10 --format csv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "n,a_n"));
  CHECK(contains(r.out, "2,3"));
  CHECK(contains(r.out, "10,11"));
}

TEST_CASE("worker count does not change output") {
  std::string args =
      "local --group heisenberg --prime 2,3 --kmax 2 --format csv";
  RunResult one = run(args + " --workers 1");
  RunResult env = run(args, "CONEZETA_WORKERS=3 ");
  CHECK(one.code == 0);
  CHECK(env.code == 0);
  CHECK(one.out == env.out);
}
