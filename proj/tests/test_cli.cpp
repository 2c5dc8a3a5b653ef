#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(LOCKWORK_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string bench(const std::string& name) { return std::string(LOCKWORK_BENCH_DIR) + "/" + name + ".bench"; }

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("lockwork_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("attack xx " + bench("c17")).code == 1);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("input errors exit 2") {
  TempDir d;
  std::ofstream(d / "bad.bench") << "INPUT(a)\nOUTPUT(c)\nc = AND(a, ghost)\n";
  CHECK(cli("classify " + (d / "bad.bench")).code == 2);
  CHECK(cli("classify " + (d / "missing.bench")).code == 2);
}

TEST_CASE("lock, classify, partition, attack and verify") {
  TempDir d;
  auto locked = d / "l.bench", truth = d / "t.json";
  REQUIRE(cli("lock " + bench("c432") + " --technique antisat --keys 8 --compound-rll 8 --seed 2 -o " + locked +
              " --truth " + truth)
              .code == 0);

  auto c = cli("classify " + locked);
  CHECK(c.code == 0);
  auto cj = nlohmann::json::parse(c.out);
  CHECK(cj["scheme"] == "CLL");
  CHECK(cj["labels"].size() == 16);

  auto p = cli("partition " + locked + " --functional " + (d / "f.bench") + " --unit " + (d / "u.bench"));
  CHECK(p.code == 0);
  CHECK(fs::exists(d / "f.bench"));
  CHECK(nlohmann::json::parse(p.out)["unit_keys"] == 8);

  auto og = cli("attack og " + locked + " --oracle " + bench("c432") + " --truth " + truth);
  CHECK(og.code == 0);
  auto oj = nlohmann::json::parse(og.out);
  CHECK(oj["verification"] == "LEC_PASS");
  CHECK(oj["score"]["cdk"] == 16);

  auto ol = cli("attack ol " + locked);
  CHECK(ol.code == 0);
  auto lj = nlohmann::json::parse(ol.out);
  CHECK(lj["flow"] == "OL");
  CHECK(lj["verification"] == "NOT_APPLICABLE");
  CHECK_FALSE(lj.contains("score"));

  // Report written to disk scores the same through `score`.
  std::ofstream(d / "r.json") << og.out;
  auto s = cli("score " + (d / "r.json") + " " + truth);
  CHECK(s.code == 0);
  CHECK(nlohmann::json::parse(s.out)["prv"].get<int>() >= 0);

  std::ifstream tin(truth);
  auto tj = nlohmann::json::parse(tin);
  // Key hex from the sidecar, bit i = keyinput i.
  std::string bits(16, '0');
  for (auto& [k, v] : tj["secret"].items()) bits[std::stoi(k.substr(8))] = v.get<int>() ? '1' : '0';
  std::string hex;
  for (int nib = 3; nib >= 0; --nib) {
    int val = 0;
    for (int b = 3; b >= 0; --b) val = val * 2 + (bits[nib * 4 + b] == '1');
    hex += "0123456789abcdef"[val];
  }
  auto v = cli("verify " + locked + " " + bench("c432") + " --key 0x" + hex);
  CHECK(v.code == 0);
  CHECK(v.out.find("LEC_PASS") != std::string::npos);
  bits[0] = bits[0] == '1' ? '0' : '1';
  hex[3] = "0123456789abcdef"[std::stoi(std::string(1, hex[3]), nullptr, 16) ^ 1];
  CHECK(cli("verify " + locked + " " + bench("c432") + " --key 0x" + hex).code == 3);
}

TEST_CASE("classify on an RLL-only file") {
  TempDir d;
  REQUIRE(cli("lock " + bench("c880") + " --technique rll --keys 16 -o " + (d / "r.bench")).code == 0);
  auto c = cli("classify " + (d / "r.bench"));
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["scheme"] == "RLL_ONLY");
}

TEST_CASE("suite command writes results") {
  TempDir d;
  std::ofstream(d / "empty.json") << R"({"runs": []})";
  CHECK(cli("suite " + (d / "empty.json")).code == 0);
  std::ofstream(d / "s.json") << R"({"workers": 2, "budgets": {"deterministic": true}, "runs": [
    {"name": "a", "circuit": ")" << bench("c432") << R"(", "rll": 8, "technique": "sarlock", "width": 8},
    {"name": "b", "circuit": "nowhere.bench", "rll": 8}]})";
  auto s = cli("suite " + (d / "s.json") + " --out " + (d / "out"));
  CHECK(s.code == 0);
  CHECK(s.out.find("LEC_PASS") != std::string::npos);
  std::ifstream in(d / "out/results.json");
  auto j = nlohmann::json::parse(in);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["report"]["verification"] == "LEC_PASS");
  CHECK(j[1]["failure"].is_string());
}

TEST_CASE("dimacs-solve") {
  TempDir d;
  std::ofstream(d / "sat.cnf") << "p cnf 2 2\n1 2 0\n-1 0\n";
  auto s = cli("dimacs-solve " + (d / "sat.cnf"));
  CHECK(s.code == 0);
  CHECK(s.out.find("s SATISFIABLE") != std::string::npos);
  CHECK(s.out.find("-1 2 0") != std::string::npos);
  std::ofstream(d / "unsat.cnf") << "p cnf 1 2\n1 0\n-1 0\n";
  CHECK(cli("dimacs-solve " + (d / "unsat.cnf")).out.find("s UNSATISFIABLE") != std::string::npos);
}
