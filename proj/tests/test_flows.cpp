#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lockwork/error.hpp"
#include "lockwork/harness.hpp"
#include "lockwork/report.hpp"

using namespace lockwork;

namespace {

Score run_og(const std::string& circuit, std::size_t rll, Technique t, std::size_t width, std::uint64_t seed,
             AttackReport* out = nullptr) {
  auto base = testing::corpus(circuit);
  auto c = lock_compound(base, rll, LockSpec{t, width, seed, {}, 0.25}, seed);
  Oracle oracle(base);
  auto r = run_og_flow(c.locked, oracle);
  if (r.key.total()) r.verification = verify_key(c.locked, r.key, base);
  if (out) *out = r;
  return score_functional(r.key, c.truth, c.locked, base);
}

}  // namespace

TEST_CASE("OG flow recovers RLL + SARLock on c3540") {
  AttackReport r;
  auto s = run_og("c3540", 32, Technique::SarLock, 32, 1, &r);
  CHECK(r.scheme == Scheme::Cll);
  CHECK(r.family == Family::Sflt);
  CHECK(r.verification == Verification::LecPass);
  CHECK(r.oracle_check == true);
  CHECK(s.cdk == 64);
  CHECK_FALSE(s.soundness_violation);
}

TEST_CASE("OG flow on SFLT compounds reaches LEC_PASS") {
  for (Technique t : {Technique::AntiSat, Technique::AntiSatDtl, Technique::CasLock, Technique::SarLock}) {
    CAPTURE(technique_name(t));
    AttackReport r;
    auto s = run_og("c2670", 32, t, 16, 2, &r);
    CHECK(r.family == Family::Sflt);
    CHECK(r.verification == Verification::LecPass);
    CHECK(s.cdk == s.total_keys);
  }
}

TEST_CASE("OG flow on TTLock proves RLL bits only") {
  auto base = testing::corpus("c2670");
  auto c = lock_compound(base, 32, LockSpec{Technique::TtLock, 16, 3, {}, 0.25}, 3);
  Oracle oracle(base);
  auto r = run_og_flow(c.locked, oracle);
  CHECK(r.qbf_status == QbfStatus::NoSolution);
  CHECK(r.family == Family::Dflt);
  auto s = score(r.key, c.truth);
  CHECK(s.prv >= 8);
  CHECK_FALSE(s.soundness_violation);
  for (std::size_t i = 0; i < r.key.names.size(); ++i)
    if (c.truth.labels.at(r.key.names[i]) == KeyLabel::Psll) CHECK_FALSE(r.key.bits[i]);
  CHECK_FALSE(r.key.total());
  CHECK(r.verification == Verification::NotApplicable);
}

TEST_CASE("RLL-only input degenerates to the DIP attack") {
  auto base = testing::corpus("c432");
  auto l = lock_rll(base, 16, 5);
  Oracle oracle(base);
  auto r = run_og_flow(l.locked, oracle);
  CHECK(r.scheme == Scheme::RllOnly);
  CHECK_FALSE(r.qbf_status);
  CHECK(r.dip_count > 0);
  CHECK(r.key.total());
  CHECK(verify_key(l.locked, r.key, base) == Verification::LecPass);
}

TEST_CASE("OL flow takes PSLL bits from 2QBF and scores at least the whole-design SCOPE") {
  auto base = testing::corpus("c2670");
  auto c = lock_compound(base, 32, LockSpec{Technique::AntiSat, 16, 1, {}, 0.25}, 1);
  auto r = run_ol_flow(c.locked);
  CHECK(r.flow == Flow::Ol);
  CHECK(r.verification == Verification::NotApplicable);
  CHECK(r.family == Family::Sflt);
  auto s = score_functional(r.key, c.truth, c.locked, base);
  auto whole = score(scope_attack(c.locked), c.truth);
  CHECK(s.dk >= 16);
  CHECK(s.cdk >= whole.cdk);
  CHECK(s.dk >= whole.dk);
  CHECK(whole.dk == 0);
}

TEST_CASE("flows report UNCLASSIFIED instead of throwing") {
  auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(keyinput0)\nINPUT(keyinput1)\nINPUT(keyinput2)\n"
      "INPUT(keyinput3)\nINPUT(keyinput4)\nOUTPUT(y)\n"
      "f = AND(a, b)\nf2 = OR(f, c)\n"
      "p = XOR(a, keyinput0)\nq = XOR(b, keyinput1)\ng = AND(p, q)\n"
      "r = XOR(a, keyinput2)\ns = XOR(b, keyinput3)\nh = NAND(r, s)\n"
      "crit = AND(g, h)\nbad = XOR(crit, keyinput4)\ny = XOR(f2, bad)\n",
      "tainted");
  auto r = run_ol_flow(n);
  REQUIRE(r.error);
  CHECK(*r.error == "UNCLASSIFIED");
  auto j = report_json(r);
  CHECK(j["error"] == "UNCLASSIFIED");
  CHECK(j["bits"].size() == 5);
  CHECK(j["verification"] == "NOT_APPLICABLE");

  auto nokey = testing::corpus("c17");
  auto r2 = run_ol_flow(nokey);
  CHECK(r2.error);
  CHECK(report_json(r2)["bits"].empty());
}

TEST_CASE("report JSON carries the stable fields") {
  auto base = testing::corpus("c432");
  auto c = lock_compound(base, 8, LockSpec{Technique::SarLock, 8, 1, {}, 0.25}, 1);
  Oracle oracle(base);
  auto j = report_json(run_og_flow(c.locked, oracle));
  for (const char* f : {"flow", "scheme", "pslt_family", "bits", "provenance", "dip_count", "query_count",
                        "cegar_iterations", "stage_times_ms", "verification"})
    CHECK(j.contains(f));
  CHECK(j["flow"] == "OG");
  CHECK(j["bits"].size() == 16);
  CHECK(j["stage_times_ms"].contains("classification"));
  auto round = nlohmann::json::parse(j.dump());
  CHECK(round == j);
}

TEST_CASE("score definitions") {
  GroundTruth t;
  PartialKey k;
  for (int i = 0; i < 4; ++i) {
    std::string n = "keyinput" + std::to_string(i);
    t.secret[n] = i % 2;
    t.labels[n] = KeyLabel::Rll;
    k.names.push_back(n);
    k.bits.push_back(std::nullopt);
    k.provenance.push_back(Provenance::Unknown);
  }
  auto s = score(k, t);
  CHECK(s.dk == 0);
  CHECK_FALSE(s.accuracy());
  CHECK(format_accuracy(s) == "-");
  for (int i = 0; i < 4; ++i) {
    k.bits[i] = i % 2;
    k.provenance[i] = Provenance::Proven;
  }
  s = score(k, t);
  CHECK(s.cdk == 4);
  CHECK(s.dk == 4);
  CHECK(s.prv == 4);
  k.bits[0] = true;
  s = score(k, t);
  CHECK(s.soundness_violation);
  k.provenance[0] = Provenance::Guessed;
  s = score(k, t);
  CHECK_FALSE(s.soundness_violation);
  CHECK(s.cdk == 3);

  Score large;
  large.cdk = 190;
  large.dk = 205;
  CHECK(format_accuracy(large) == "92.6%");
  CHECK(*large.accuracy() == doctest::Approx(0.9268).epsilon(0.001));

  PartialKey other = k;
  other.names.pop_back();
  other.bits.pop_back();
  other.provenance.pop_back();
  CHECK_THROWS_AS(score(other, t), PreconditionError);
}

TEST_CASE("ground truth and key hex round trip") {
  auto base = testing::corpus("c432");
  auto c = lock_compound(base, 8, LockSpec{Technique::TtLock, 8, 4, {}, 0.25}, 4);
  auto back = truth_from_json(truth_json(c.truth));
  CHECK(back.secret == c.truth.secret);
  CHECK(back.labels == c.truth.labels);
  CHECK(back.psll == c.truth.psll);
  CHECK(back.cg_hint == c.truth.cg_hint);
  auto v = secret_vector(c.locked, c.truth);
  CHECK(parse_key_hex(key_hex(v), v.size()) == v);
  CHECK(key_hex({true, false, false, false, true}) == "0x11");
  CHECK_THROWS_AS(parse_key_hex("0x1ff", 4), PreconditionError);
  CHECK_THROWS_AS(parse_key_hex("0xzz", 8), PreconditionError);
}

TEST_CASE("suite isolates failures and keeps order") {
  auto dir = std::filesystem::temp_directory_path() / "lockwork_suite_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "bad.bench") << "INPUT(a)\nOUTPUT(y)\ny = AND(a, ghost)\n";
  }
  nlohmann::json j = {
      {"workers", 2},
      {"budgets", {{"deterministic", true}}},
      {"runs",
       {{{"name", "good"}, {"circuit", std::string(LOCKWORK_BENCH_DIR) + "/c432.bench"}, {"rll", 8},
         {"technique", "sarlock"}, {"width", 8}, {"seed", 1}, {"flow", "og"}},
        {{"name", "broken"}, {"circuit", "bad.bench"}, {"rll", 4}},
        {{"name", "ol"}, {"circuit", std::string(LOCKWORK_BENCH_DIR) + "/c432.bench"}, {"rll", 8},
         {"technique", "antisat"}, {"width", 8}, {"flow", "ol"}}}}};
  std::size_t workers = 0;
  auto configs = parse_suite(j, dir.string(), &workers);
  CHECK(workers == 2);
  REQUIRE(configs.size() == 3);
  CHECK(configs[0].budgets.deterministic);
  auto results = run_suite(configs, workers);
  REQUIRE(results.size() == 3);
  CHECK(results[0].name == "good");
  CHECK(results[0].report);
  CHECK(results[0].report->verification == Verification::LecPass);
  CHECK(results[1].failure);
  CHECK_FALSE(results[1].report);
  CHECK(results[2].baseline);
  auto table = result_table(results);
  CHECK(table.find("broken") != std::string::npos);
  CHECK(result_json(results[1])["failure"].is_string());
  CHECK(run_suite({}, 4).empty());
  std::filesystem::remove_all(dir);
}
