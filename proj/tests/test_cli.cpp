#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cuspgrowth/cli_commands.hpp"
#include "doctest.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool exists(const std::string& path) { return std::ifstream(path).good(); }

int run(const std::string& args) {
  const std::string cmd = std::string(GROWTHCLI_PATH) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

const std::string kSpecDir = SPEC_DIR;
const std::string kTmp = "/tmp/cuspgrowth_cli_test";

}  // namespace

TEST_CASE("growth --kind orbit on the free group: sphere counts 4*3^(n-1)") {
  REQUIRE(std::system(("mkdir -p " + kTmp).c_str()) == 0);
  const std::string out = kTmp + "/free2_orbit.csv";
  const int rc = run("--spec " + kSpecDir + "/free2.json --command growth --kind orbit" +
                     " --format csv --out " + out + " --window 5:10");
  CHECK(rc == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("kind,n,delta,count,normalized\n", 0) == 0);
  // delta = 1 windows [n-1, n+1) hold spheres n-1 and n: 4*3^(n-2) + 4*3^(n-1)
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  bool checked4 = false;
  while (std::getline(lines, line)) {
    int n = 0;
    long long count = 0;
    char kindbuf[32];
    double delta = 0, norm = 0;
    REQUIRE(std::sscanf(line.c_str(), "%31[^,],%d,%lf,%lld,%lf", kindbuf, &n, &delta, &count,
                        &norm) == 5);
    if (n == 4) {
      CHECK(count == 4 * 9 + 4 * 27);  // spheres 3 and 4
      checked4 = true;
    }
  }
  CHECK(checked4);
}

TEST_CASE("growth --kind orbit with delta 0.5: pure sphere counts") {
  const std::string out = kTmp + "/free2_spheres.csv";
  const int rc = run("--spec " + kSpecDir + "/free2.json --command growth --kind orbit" +
                     " --delta-width 0.5 --format csv --out " + out + " --window 5:10");
  CHECK(rc == 0);
  std::istringstream lines(slurp(out));
  std::string header, line;
  std::getline(lines, header);
  bool checked = false;
  while (std::getline(lines, line)) {
    int n = 0;
    long long count = 0;
    char kindbuf[32];
    double delta = 0, norm = 0;
    REQUIRE(std::sscanf(line.c_str(), "%31[^,],%d,%lf,%lld,%lf", kindbuf, &n, &delta, &count,
                        &norm) == 5);
    if (n >= 1) {
      long long expect = 4;
      for (int k = 1; k < n; ++k) expect *= 3;
      CHECK(count == expect);
      checked = true;
    }
  }
  CHECK(checked);
}

TEST_CASE("growth --kind horoball on a cocompact spec: empty table with warning") {
  const std::string out = kTmp + "/free2_horoball.csv";
  const int rc = run("--spec " + kSpecDir + "/free2.json --command growth --kind horoball" +
                     " --format csv --out " + out);
  CHECK(rc == 0);
  CHECK(slurp(out) == "kind,n,delta,count,normalized\n");
}

TEST_CASE("determinism: identical config and seed give byte-identical files") {
  const std::string out1 = kTmp + "/run1.csv";
  const std::string out2 = kTmp + "/run2.csv";
  const std::string args = "--spec " + kSpecDir + "/free2_cusped.json --command exponent" +
                           " --format csv --seed 42 --window 3:8";
  CHECK(run(args + " --out " + out1) == 0);
  CHECK(run(args + " --out " + out2) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1).find("delta_hat") != std::string::npos);
}

TEST_CASE("malformed spec: exit status 2 and no partial output file") {
  const std::string bad = kTmp + "/bad.json";
  {
    std::ofstream f(bad);
    f << "{\"model\": \"half_plane\", \"unknown_field\": 3}";
  }
  const std::string out = kTmp + "/never_written.csv";
  std::remove(out.c_str());
  const int rc = run("--spec " + bad + " --command growth --format csv --out " + out);
  CHECK(rc == 2);
  CHECK_FALSE(exists(out));

  CHECK(run("--spec " + kSpecDir + "/free2.json --command no-such-command") == 2);
}

TEST_CASE("exponent on the cusped spec: fitted value and parameter echo") {
  const std::string out = kTmp + "/cusped_exp.csv";
  const int rc = run("--spec " + kSpecDir + "/free2_cusped.json --command exponent --format csv" +
                     " --window 3:8 --out " + out);
  CHECK(rc == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("audit,param_json,key,value\n", 0) == 0);
  CHECK(csv.find("delta_hat") != std::string::npos);
  CHECK(csv.find("truncation") != std::string::npos);  // full parameter echo embedded
  CHECK(csv.find("'seed':") != std::string::npos);
}

TEST_CASE("dop on the cusped spec: PGP and stabilization rows") {
  const std::string out = kTmp + "/cusped_dop.txt";
  const int rc = run("--spec " + kSpecDir + "/free2_cusped.json --command dop --window 3:8 --out " +
                     out);
  CHECK(rc == 0);
  const std::string text = slurp(out);
  CHECK(text.find("class0_pgp") != std::string::npos);
  CHECK(text.find("class0_dual_form_ratio") != std::string::npos);
}

TEST_CASE("theorem-audit on the cocompact free group: DOP row vacuous, exit 0") {
  const std::string out = kTmp + "/free2_theorem.txt";
  const int rc = run("--spec " + kSpecDir + "/free2.json --command theorem-audit --window 5:10" +
                     " --ceiling 3 --out " + out);
  CHECK(rc == 0);
  const std::string text = slurp(out);
  CHECK(text.find("(1) DOP condition") != std::string::npos);
  CHECK(text.find("vacuous") != std::string::npos);
  CHECK(text.find("(2) orbit growth") != std::string::npos);
  CHECK(text.find("consistent") != std::string::npos);
  CHECK(text.find("never proofs") != std::string::npos);
}

TEST_CASE("theorem-audit exit 1 when a row is inconsistent with the ceiling") {
  const std::string out = kTmp + "/free2_theorem_tight.txt";
  const int rc = run("--spec " + kSpecDir + "/free2.json --command theorem-audit --window 5:10" +
                     " --ceiling 1.000001 --out " + out);
  CHECK(rc == 1);
  CHECK(slurp(out).find("inconsistent") != std::string::npos);
}

TEST_CASE("theorem-audit on PSL(2,Z): full pipeline, all four rows consistent") {
  const std::string out = kTmp + "/psl_theorem.txt";
  const int rc = run("--spec " + kSpecDir + "/psl2z.json --command theorem-audit --window 6:12" +
                     " --ceiling 3 --out " + out);
  CHECK(rc == 0);
  const std::string text = slurp(out);
  CHECK(text.find("(1) DOP condition       consistent") != std::string::npos);
  CHECK(text.find("(2) orbit growth        consistent") != std::string::npos);
  CHECK(text.find("(3) cone growth         consistent") != std::string::npos);
  CHECK(text.find("(4) horoball growth     consistent") != std::string::npos);
}

TEST_CASE("theorem-audit on the cusped spec: all rows consistent, json-like format") {
  const std::string out = kTmp + "/cusped_theorem.json";
  const int rc = run("--spec " + kSpecDir +
                     "/free2_cusped.json --command theorem-audit --window 3:8 --ceiling 3" +
                     " --format json-like --out " + out);
  CHECK(rc == 0);
  const std::string text = slurp(out);
  CHECK(text.find("cond2_orbit_ratio") != std::string::npos);
  CHECK(text.find("cond4_horoball_ratio") != std::string::npos);
}
