#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(REGCHAIN_CLI) + " " + args + " 2>/dev/null";
  Run r{-1, ""};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& l) {
  std::vector<std::string> v;
  std::stringstream ss(l);
  for (std::string f; std::getline(ss, f, ',');) v.push_back(f);
  return v;
}

const char* kHeader = "alphaR,E,rho,model,strategyR,strategyUR,gR,gUR,tF,ci,trials";

}  // namespace

TEST_CASE("simulate") {
  auto r = cli("simulate --alpha-r 1.0 --trials 20 --epochs 100");
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == kHeader);
  auto f = fields(ls[1]);
  CHECK(std::stod(f[6]) == 1.0);
  CHECK(std::stod(f[8]) == 1.0);

  auto s = cli("simulate --alpha-r 0.6 --model ir --trials 400 --seed 3");
  REQUIRE(s.code == 0);
  CHECK(std::stod(fields(lines(s.out)[1])[6]) == doctest::Approx(0.6).epsilon(0.02));
  CHECK(cli("simulate --alpha-r 0.6 --model ir --trials 400 --seed 3 --serial").out == s.out);
  CHECK(cli("simulate --alpha-r 0.6 --model ir --trials 400 --seed 3").out == s.out);
}

TEST_CASE("simulate usage errors") {
  CHECK(cli("simulate --trials 10").code == 2);
  CHECK(cli("simulate --alpha-r 1.5").code == 2);
  CHECK(cli("simulate --alpha-r 0.5 --model xx").code == 2);
  CHECK(cli("simulate --alpha-r 0.5 --strategy-ur nope").code == 2);
  CHECK(cli("simulate --alpha-r 0.5 --strategy-r withhold:2").code == 2);
  CHECK(cli("simulate --alpha-r 0.5 --rho 1").code == 2);
  CHECK(cli("").code == 2);
}

TEST_CASE("seed fallback and outputs") {
  auto a = cli("simulate --alpha-r 0.5 --trials 50 --epochs 100 --seed 77");
  std::string env = "env REGCHAIN_SEED=77 ";
  std::string cmd = env + REGCHAIN_CLI + " simulate --alpha-r 0.5 --trials 50 --epochs 100";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  pclose(p);
  CHECK(out == a.out);

  std::string csv = "cli_test_out.csv", tr = "cli_test_trace.jsonl";
  auto w = cli("simulate --alpha-r 0.5 --trials 10 --epochs 50 --out " + csv + " --trace " + tr);
  CHECK(w.code == 0);
  std::ifstream m(csv + ".manifest.json");
  CHECK(m.good());
  std::ifstream t(tr);
  std::size_t n = 0;
  for (std::string l; std::getline(t, l);) ++n;
  CHECK(n >= 50);
  std::remove(csv.c_str());
  std::remove((csv + ".manifest.json").c_str());
  std::remove(tr.c_str());
}

TEST_CASE("config file") {
  std::ofstream("cli_test.toml") << "alpha-r = 1.0\ntrials = 5\nepochs = 40\n";
  auto r = cli("simulate --config cli_test.toml");
  REQUIRE(r.code == 0);
  CHECK(std::stod(fields(lines(r.out)[1])[6]) == 1.0);
  std::ofstream("cli_test.json") << R"({"alpha-r": 1.0, "trials": 5, "epochs": 40})";
  auto j = cli("simulate --config cli_test.json");
  REQUIRE(j.code == 0);
  CHECK(fields(lines(j.out)[1])[10] == "5");
  auto o = cli("simulate --config cli_test.json --trials 7");
  CHECK(fields(lines(o.out)[1])[10] == "7");
  std::remove("cli_test.toml");
  std::remove("cli_test.json");
}

TEST_CASE("sweep") {
  auto r = cli("sweep --alpha-grid 0.0:1.0:0.05 --trials 40 --epochs 200");
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 22);
  CHECK(ls[0] == kHeader);
  double prev = -1;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    double g = std::stod(fields(ls[i])[6]);
    CHECK(g >= prev);
    prev = g;
  }
  CHECK(cli("sweep --alpha-grid 0.1:0.5:0").code == 2);
  CHECK(cli("sweep --alpha-grid 0.5:0.1:0.1").code == 2);
  CHECK(cli("sweep --alpha-grid abc").code == 2);
}

TEST_CASE("thresholds") {
  auto r = cli("thresholds --which poly-roots");
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(std::stod(fields(ls[1])[1]) == doctest::Approx(0.361).epsilon(0.003));
  CHECK(std::stod(fields(ls[2])[1]) == doctest::Approx(0.308).epsilon(0.003));

  auto e = cli("thresholds --which e3-check");
  REQUIRE(e.code == 0);
  CHECK(std::stod(fields(lines(e.out)[1])[1]) <= 1e-9);

  auto h = cli("thresholds --which h-ir --depths 3 4");
  REQUIRE(h.code == 0);
  CHECK(lines(h.out).size() == 3);
  CHECK(cli("thresholds --which nope").code == 2);
}

TEST_CASE("license demo") {
  auto r = cli("license-demo --jurisdictions 2 --assets 2 --executors 3");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"allVerified\": true") != std::string::npos);
  std::size_t betas = 0;
  for (std::size_t p = r.out.find("\"beta\""); p != std::string::npos; p = r.out.find("\"beta\"", p + 1)) ++betas;
  CHECK(betas == 3);
  auto w = cli("license-demo --window 1");
  CHECK(w.code == 0);
  CHECK(w.out.find("\"rejected\": true") != std::string::npos);
  CHECK(cli("license-demo --executors 0").code == 2);
}

TEST_CASE("crypto selftest") {
  auto r = cli("selftest crypto --samples 1000 --log2-target 252");
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 3);
}
