#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lockwork/error.hpp"
#include "lockwork/sat/backend.hpp"
#include "lockwork/sat/cnf.hpp"
#include "lockwork/sat/solver.hpp"

using namespace lockwork;
using namespace lockwork::sat;

namespace {

CnfFormula pigeonhole(int pigeons, int holes) {
  CnfFormula f;
  auto var = [&](int p, int h) { return Lit::make(p * holes + h); };
  f.variable_count = pigeons * holes;
  for (int p = 0; p < pigeons; ++p) {
    std::vector<Lit> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    f.add_clause(std::span<const Lit>(c));
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) f.add_clause({~var(p, h), ~var(q, h)});
  return f;
}

bool satisfies(const CnfFormula& f, const std::vector<bool>& v) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int l : c) sat |= v[std::abs(l) - 1] == (l > 0);
    if (!sat) return false;
  }
  return true;
}

CnfFormula random_3sat(std::mt19937_64& rng, int vars, int clauses) {
  CnfFormula f;
  f.variable_count = vars;
  for (int i = 0; i < clauses; ++i) {
    std::vector<Lit> c;
    for (int k = 0; k < 3; ++k) c.push_back(Lit::make(static_cast<int>(rng() % vars), rng() & 1));
    f.add_clause(std::span<const Lit>(c));
  }
  return f;
}

bool brute_force(const CnfFormula& f) {
  for (std::uint64_t m = 0; m < (1ull << f.variable_count); ++m)
    if (satisfies(f, testing::bits_of(m, f.variable_count))) return true;
  return false;
}

}  // namespace

TEST_CASE("trivial formulas") {
  Solver s;
  Var x = s.new_var();
  s.add_clause({Lit::make(x)});
  s.add_clause({Lit::make(x, true)});
  CHECK(s.solve() == Status::Unsat);

  Solver t;
  Var a = t.new_var(), b = t.new_var();
  t.add_clause({Lit::make(a), Lit::make(b)});
  std::vector<Lit> as{Lit::make(a, true)};
  REQUIRE(t.solve(as, {}) == Status::Sat);
  CHECK(t.value(b));
  CHECK_FALSE(t.value(a));
  // Assumption conflict does not poison the solver.
  std::vector<Lit> both{Lit::make(a, true), Lit::make(b, true)};
  CHECK(t.solve(both, {}) == Status::Unsat);
  CHECK(t.solve() == Status::Sat);
}

TEST_CASE("pigeonhole 5 into 4 is UNSAT") {
  auto f = pigeonhole(5, 4);
  CHECK(solve(f, {}, {}).status == Status::Unsat);
  CHECK(solve(pigeonhole(4, 4), {}, {}).status == Status::Sat);
}

TEST_CASE("pigeonhole 9 into 8 respects a conflict budget") {
  auto f = pigeonhole(9, 8);
  Solver s;
  load(f, s);
  Budget b;
  b.conflicts = 100;
  CHECK(s.solve(b) == Status::Timeout);
}

TEST_CASE("random 3-SAT agrees with brute force and models satisfy clauses") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    int vars = 4 + static_cast<int>(rng() % 9);
    int clauses = static_cast<int>(vars * (3.0 + (rng() % 30) / 10.0));
    auto f = random_3sat(rng, vars, clauses);
    auto r = solve(f, {}, {});
    REQUIRE(r.status != Status::Timeout);
    CHECK((r.status == Status::Sat) == brute_force(f));
    if (r.status == Status::Sat) CHECK(satisfies(f, r.values));
  }
}

TEST_CASE("larger random instances with incremental assumptions") {
  std::mt19937_64 rng(11);
  auto f = random_3sat(rng, 200, 820);
  Solver s;
  load(f, s);
  for (int t = 0; t < 20; ++t) {
    std::vector<Lit> as;
    for (int k = 0; k < 5; ++k) as.push_back(Lit::make(static_cast<int>(rng() % 200), rng() & 1));
    auto st = s.solve(as, {});
    REQUIRE(st != Status::Timeout);
    if (st == Status::Sat) {
      std::vector<bool> v(200);
      for (int i = 0; i < 200; ++i) v[i] = s.value(i);
      CHECK(satisfies(f, v));
      for (Lit a : as) CHECK(s.value(a));
    }
  }
}

TEST_CASE("solve is deterministic") {
  std::mt19937_64 rng(5);
  auto f = random_3sat(rng, 150, 600);
  auto a = solve(f, {}, {});
  auto b = solve(f, {}, {});
  CHECK(a.status == b.status);
  CHECK(a.values == b.values);
}

TEST_CASE("Tseitin clauses force each gate output") {
  const GateType types[] = {GateType::And, GateType::Or,  GateType::Nand, GateType::Nor,
                            GateType::Xor, GateType::Xnor, GateType::Not, GateType::Buf};
  for (GateType t : types) {
    std::size_t arity = (t == GateType::Not || t == GateType::Buf) ? 1 : 3;
    for (std::size_t ar = arity; ar <= (arity == 1 ? 1u : 3u); ++ar) {
      for (std::size_t use = (arity == 1 ? 1 : 2); use <= ar; ++use) {
        CnfFormula f;
        std::vector<Lit> ins;
        for (std::size_t i = 0; i < use; ++i) ins.push_back(Lit::make(f.new_var()));
        Lit out = Lit::make(f.new_var());
        encode_gate_clauses(f, t, out, ins);
        for (std::uint64_t m = 0; m < (1ull << use); ++m) {
          auto bits = testing::bits_of(m, use);
          bool arr[8];
          for (std::size_t i = 0; i < use; ++i) arr[i] = bits[i];
          bool want = eval_gate(t, std::span<const bool>(arr, use));
          for (bool forced : {false, true}) {
            std::vector<int> as;
            for (std::size_t i = 0; i < use; ++i) as.push_back(bits[i] ? ins[i].to_dimacs() : -ins[i].to_dimacs());
            as.push_back(forced ? out.to_dimacs() : -out.to_dimacs());
            auto r = solve(f, as, {});
            CHECK((r.status == Status::Sat) == (forced == want));
          }
        }
      }
    }
  }
}

TEST_CASE("textbook AND and XOR encodings") {
  CnfFormula f;
  Lit a = Lit::make(f.new_var()), b = Lit::make(f.new_var()), c = Lit::make(f.new_var());
  std::vector<Lit> ab{a, b};
  encode_gate_clauses(f, GateType::And, c, ab);
  CHECK(f.clauses.size() == 3);
  CnfFormula g;
  Lit x = Lit::make(g.new_var()), y = Lit::make(g.new_var()), z = Lit::make(g.new_var());
  std::vector<Lit> xy{x, y};
  encode_gate_clauses(g, GateType::Xor, z, xy);
  CHECK(g.clauses.size() == 4);
  CHECK(g.variable_count == 3);
}

TEST_CASE("DIMACS round trip") {
  auto f = pigeonhole(3, 2);
  auto g = parse_dimacs(to_dimacs(f));
  CHECK(g.variable_count == f.variable_count);
  CHECK(g.clauses == f.clauses);
  CHECK_THROWS(parse_dimacs("1 2 0\n"));
}

TEST_CASE("assumptions must reference declared variables") {
  auto f = pigeonhole(3, 2);
  std::vector<int> bad{99};
  CHECK_THROWS_AS(solve(f, bad, {}), PreconditionError);
}

TEST_CASE("external DIMACS back end") {
  // The CLI's dimacs-solve command speaks the competition output format.
  ExternalSolver ext(std::string(LOCKWORK_CLI) + " dimacs-solve");
  auto f = pigeonhole(4, 3);
  CHECK(solve(f, {}, {}, &ext).status == Status::Unsat);
  ExternalSolver ext2(std::string(LOCKWORK_CLI) + " dimacs-solve");
  auto g = pigeonhole(3, 3);
  auto r = solve(g, {}, {}, &ext2);
  REQUIRE(r.status == Status::Sat);
  CHECK(satisfies(g, r.values));
}
