#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lockwork/analysis.hpp"
#include "lockwork/error.hpp"
#include "lockwork/qbf.hpp"

using namespace lockwork;

namespace {

struct Brute {
  QbfStatus status;
  std::optional<bool> constant;
};

Brute brute_force(const Netlist& unit) {
  std::size_t ni = unit.inputs().size(), nk = unit.keys().size();
  for (bool c : {false, true}) {
    for (std::uint64_t k = 0; k < (1ull << nk); ++k) {
      auto key = testing::bits_of(k, nk);
      bool constant = true;
      for (std::uint64_t x = 0; x < (1ull << ni) && constant; ++x)
        constant = evaluate(unit, testing::bits_of(x, ni), key)[0] == c;
      if (constant) return {QbfStatus::Solved, c};
    }
  }
  return {QbfStatus::NoSolution, std::nullopt};
}

bool key_holds(const Netlist& unit, const QbfOutcome& q) {
  std::vector<bool> key;
  for (NetId k : unit.keys()) key.push_back(q.key->at(unit.net(k).name));
  std::size_t ni = unit.inputs().size();
  for (std::uint64_t x = 0; x < (1ull << ni); ++x)
    if (evaluate(unit, testing::bits_of(x, ni), key)[0] != *q.constant) return false;
  return true;
}

Netlist unit_of(Technique t, std::size_t width, std::uint64_t seed) {
  auto base = testing::corpus("c432");
  auto r = lock(base, LockSpec{t, width, seed, {}, 0.25});
  auto a = analyze(r.locked);
  REQUIRE(a.parts);
  return a.parts->unit_part;
}

// Random single-output netlist with the given numbers of inputs and keys.
Netlist random_unit(std::mt19937_64& rng, std::size_t ni, std::size_t nk, std::size_t gates) {
  NetlistBuilder b("rand");
  std::vector<NetId> pool;
  for (std::size_t i = 0; i < ni; ++i) pool.push_back(b.add_input("x" + std::to_string(i)));
  for (std::size_t i = 0; i < nk; ++i) pool.push_back(b.add_key("keyinput" + std::to_string(i)));
  const GateType types[] = {GateType::And, GateType::Or,  GateType::Nand, GateType::Nor,
                            GateType::Xor, GateType::Xnor, GateType::Not};
  NetId last = pool.back();
  for (std::size_t g = 0; g < gates; ++g) {
    GateType t = types[rng() % 7];
    std::vector<NetId> f{pool[rng() % pool.size()]};
    if (t != GateType::Not) f.push_back(pool[rng() % pool.size()]);
    last = b.add_gate("g" + std::to_string(g), t, f);
    pool.push_back(last);
  }
  b.add_output(last);
  return std::move(b).build();
}

}  // namespace

TEST_CASE("Anti-SAT unit of width 4 is constant 0 under some K1 = K2") {
  auto unit = unit_of(Technique::AntiSat, 8, 1);
  REQUIRE(unit.inputs().size() == 4);
  REQUIRE(unit.keys().size() == 8);
  auto q = solve_constant_output_2qbf(unit);
  REQUIRE(q.status == QbfStatus::Solved);
  CHECK(*q.constant == false);
  CHECK(key_holds(unit, q));
  auto b = brute_force(unit);
  CHECK(b.status == QbfStatus::Solved);
  CHECK(b.constant == q.constant);
  // K1 = K2 by position: the first half compares the same taps as the second.
  std::vector<bool> key;
  for (NetId k : keys_by_index(unit)) key.push_back(q.key->at(unit.net(k).name));
  CHECK(std::vector<bool>(key.begin(), key.begin() + 4) == std::vector<bool>(key.begin() + 4, key.end()));
}

TEST_CASE("point-function units agree with brute force") {
  for (Technique t : {Technique::AntiSat, Technique::AntiSatDtl, Technique::CasLock}) {
    for (std::size_t w : {2, 4, 6, 8}) {
      for (std::uint64_t seed : {1, 2, 3}) {
        CAPTURE(technique_name(t));
        CAPTURE(w);
        auto unit = unit_of(t, w, seed);
        REQUIRE(unit.inputs().size() + unit.keys().size() <= 14);
        auto b = brute_force(unit);
        for (bool symbolic : {true, false}) {
          QbfOptions opt;
          opt.symbolic_samples = symbolic;
          auto q = solve_constant_output_2qbf(unit, opt);
          CHECK(q.status == b.status);
          CHECK(q.constant == b.constant);
          if (q.status == QbfStatus::Solved) CHECK(key_holds(unit, q));
        }
      }
    }
  }
}

TEST_CASE("TTLock restore unit has no constant key") {
  for (std::size_t w : {4, 8, 16}) {
    auto unit = unit_of(Technique::TtLock, w, 5);
    auto q = solve_constant_output_2qbf(unit);
    CHECK(q.status == QbfStatus::NoSolution);
    CHECK_FALSE(q.key);
    if (w <= 4) CHECK(brute_force(unit).status == QbfStatus::NoSolution);
  }
}

TEST_CASE("SARLock unit is solved at the secret") {
  auto base = testing::corpus("c432");
  auto r = lock(base, LockSpec{Technique::SarLock, 16, 3, {}, 0.25});
  auto a = analyze(r.locked);
  auto q = solve_constant_output_2qbf(a.parts->unit_part);
  REQUIRE(q.status == QbfStatus::Solved);
  CHECK(*q.constant == false);
  CHECK(*q.key == r.truth.secret);
  CHECK(q.cegar_iterations < 10);
}

TEST_CASE("wide Anti-SAT unit needs few iterations") {
  auto base = testing::corpus("c2670");
  auto r = lock(base, LockSpec{Technique::AntiSat, 64, 3, {}, 0.25});
  auto a = analyze(r.locked);
  auto q = solve_constant_output_2qbf(a.parts->unit_part);
  REQUIRE(q.status == QbfStatus::Solved);
  CHECK(q.cegar_iterations < 20);
}

TEST_CASE("random units agree with brute force") {
  std::mt19937_64 rng(17);
  int solved = 0, refuted = 0;
  for (int t = 0; t < 400; ++t) {
    std::size_t ni = 1 + rng() % 6, nk = 1 + rng() % 6;
    auto unit = random_unit(rng, ni, nk, 3 + rng() % 12);
    auto b = brute_force(unit);
    QbfOptions opt;
    opt.symbolic_samples = t % 2 == 0;
    auto q = solve_constant_output_2qbf(unit, opt);
    CHECK(q.status == b.status);
    CHECK(q.constant == b.constant);
    if (q.status == QbfStatus::Solved) {
      CHECK(key_holds(unit, q));
      ++solved;
    } else {
      ++refuted;
    }
  }
  CHECK(solved > 0);
  CHECK(refuted > 0);
}

TEST_CASE("2QBF preconditions") {
  auto two = parse_bench("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\nOUTPUT(z)\ny = XOR(a, keyinput0)\nz = NOT(a)\n", "t");
  CHECK_THROWS_AS(solve_constant_output_2qbf(two), PreconditionError);
  auto nokey = parse_bench("INPUT(a)\nOUTPUT(y)\ny = XNOR(a, a)\n", "t");
  CHECK_THROWS_AS(solve_constant_output_2qbf(nokey), PreconditionError);
}

TEST_CASE("iteration cap reports TIMEOUT") {
  auto unit = unit_of(Technique::AntiSat, 8, 1);
  QbfOptions opt;
  opt.symbolic_samples = false;
  opt.max_iterations = 1;
  CHECK(solve_constant_output_2qbf(unit, opt).status == QbfStatus::Timeout);
}
