#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lockwork/bench.hpp"
#include "lockwork/equivalence.hpp"
#include "lockwork/error.hpp"
#include "lockwork/sat/cnf.hpp"
#include "lockwork/simulate.hpp"
#include "lockwork/transform.hpp"

using namespace lockwork;

TEST_CASE("parse minimal file") {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = AND(a, b)\n");
  CHECK(n.inputs().size() == 2);
  CHECK(n.keys().empty());
  CHECK(n.outputs().size() == 1);
  CHECK(n.gate_count() == 1);
}

TEST_CASE("key inputs are recognized by name") {
  auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(c)\nt = AND(a, b)\nc = XOR(t, keyinput0)\n");
  REQUIRE(n.keys().size() == 1);
  CHECK(n.net(n.keys()[0]).name == "keyinput0");
  CHECK(n.inputs().size() == 2);
  CHECK(is_key_name("keyinput17"));
  CHECK_FALSE(is_key_name("keyinput"));
  CHECK_FALSE(is_key_name("keyinputx"));
  CHECK_FALSE(is_key_name("key_input0"));
}

TEST_CASE("parse errors") {
  SUBCASE("undeclared fanin is named") {
    try {
      parse_bench("INPUT(a)\nOUTPUT(c)\nc = AND(a, ghost)\n");
      FAIL("expected error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("ghost") != std::string::npos);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate definition") {
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(c)\nc = NOT(a)\nc = BUF(a)\n"), ParseError);
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nINPUT(a)\nOUTPUT(a)\n"), ParseError);
  }
  SUBCASE("cycle") {
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(c)\nc = AND(a, d)\nd = AND(a, c)\n"), ParseError);
  }
  SUBCASE("syntax, with line number") {
    try {
      parse_bench("INPUT(a)\n\nc = AND(a b\n");
      FAIL("expected error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("output without net") {
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(z)\n"), ParseError);
  }
  SUBCASE("bad arity") {
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = NOT(a, b)\n"), ParseError);
    CHECK_THROWS_AS(parse_bench("INPUT(a)\nOUTPUT(c)\nc = AND(a)\n"), ParseError);
  }
}

TEST_CASE("out-of-order gates are sorted") {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = OR(t, b)\nt = NOT(a)\n");
  CHECK(n.id("t") < n.id("c"));
  CHECK(simulate(n, {{"a", true}, {"b", false}}, {}).at("c") == false);
}

TEST_CASE("BUFF alias and constants") {
  auto n = parse_bench(
      "INPUT(a)\nOUTPUT(c)\nOUTPUT(d)\none = XNOR(a, a)\nzero = XOR(a, a)\nc = BUFF(one)\n"
      "d = AND(a, zero)\n");
  CHECK(n.net(n.id("one")).kind == NetKind::Const1);
  CHECK(n.net(n.id("zero")).kind == NetKind::Const0);
  auto r = simulate(n, {{"a", true}}, {});
  CHECK(r.at("c") == true);
  CHECK(r.at("d") == false);
  auto text = write_bench(n);
  CHECK(text.find("one = XNOR(a, a)") != std::string::npos);
  CHECK(structurally_equal(parse_bench(text), n));
}

TEST_CASE("simulate truth tables") {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = AND(a, b)\n");
  CHECK(simulate(n, {{"a", true}, {"b", true}}, {}).at("c"));
  CHECK_FALSE(simulate(n, {{"a", true}, {"b", false}}, {}).at("c"));
  CHECK_THROWS_AS(simulate(n, {{"a", true}}, {}), PreconditionError);

  const char* types[] = {"AND", "OR", "NAND", "NOR", "XOR", "XNOR"};
  for (const char* t : types) {
    auto g = parse_bench(std::string("INPUT(a)\nINPUT(b)\nINPUT(d)\nOUTPUT(c)\nc = ") + t +
                         "(a, b, d)\n");
    for (int v = 0; v < 8; ++v) {
      bool a = v & 1, b = v & 2, d = v & 4;
      bool exp = false;
      std::string s = t;
      if (s == "AND") exp = a && b && d;
      if (s == "OR") exp = a || b || d;
      if (s == "NAND") exp = !(a && b && d);
      if (s == "NOR") exp = !(a || b || d);
      if (s == "XOR") exp = a ^ b ^ d;
      if (s == "XNOR") exp = !(a ^ b ^ d);
      CHECK(simulate(g, {{"a", a}, {"b", b}, {"d", d}}, {}).at("c") == exp);
    }
  }
}

TEST_CASE("RLL example with secret 10 matches the unlocked circuit") {
  // Two key gates: XNOR under key bit 1, XOR under key bit 0.
  auto orig = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(d)\nOUTPUT(y)\nt = AND(a, b)\ny = OR(t, d)\n");
  auto locked = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(d)\nINPUT(keyinput0)\nINPUT(keyinput1)\nOUTPUT(y)\n"
      "t = AND(a, b)\nt2 = XNOR(t, keyinput0)\nu = OR(t2, d)\ny = XOR(u, keyinput1)\n");
  for (int v = 0; v < 8; ++v) {
    Assignment in{{"a", bool(v & 1)}, {"b", bool(v & 2)}, {"d", bool(v & 4)}};
    CHECK(simulate(locked, in, {{"keyinput0", true}, {"keyinput1", false}}) == simulate(orig, in, {}));
  }
}

TEST_CASE("ternary simulation") {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nOUTPUT(d)\nc = AND(a, b)\nd = XOR(a, b)\n");
  std::vector<Tri> in{Tri::Zero, Tri::X};
  auto v = simulate_ternary(n, in, {});
  CHECK(v[n.id("c")] == Tri::Zero);
  CHECK(v[n.id("d")] == Tri::X);
}

TEST_CASE("structural stats") {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = AND(a, b)\n");
  auto s = structural_stats(n);
  CHECK(s.gate_count == 1);
  CHECK(s.literal_count == 2);
  CHECK(s.depth == 1);
  auto chain = parse_bench("INPUT(a)\nOUTPUT(z)\nx = NOT(a)\ny = NOT(x)\nz = NOT(y)\n");
  CHECK(structural_stats(chain).depth == 3);
  CHECK(structural_stats(chain).depth <= structural_stats(chain).gate_count);
}

TEST_CASE("decompose_to_2input") {
  auto n = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(d)\nOUTPUT(c)\nc = AND(a, b, d)\n");
  auto d = decompose_to_2input(n);
  CHECK(d.gate_count() == 2);
  CHECK(is_2input(d));
  CHECK(d.net(d.id("c")).type == GateType::And);
  CHECK(check_equivalence(n, d).verdict == Verdict::Equivalent);

  auto x = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(d)\nINPUT(e)\nOUTPUT(c)\nc = XNOR(a, b, d, e)\n");
  auto dx = decompose_to_2input(x);
  CHECK(dx.gate_count() == 3);
  CHECK(dx.net(dx.id("c")).type == GateType::Xnor);
  CHECK(check_equivalence(x, dx).verdict == Verdict::Equivalent);

  auto two = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = NAND(a, b)\n");
  CHECK(structurally_equal(decompose_to_2input(two), two));
}

TEST_CASE("apply_key") {
  auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(c)\nt = AND(a, b)\nc = XOR(t, keyinput0)\n");
  auto k0 = apply_key(n, {{"keyinput0", false}});
  CHECK(k0.keys().empty());
  CHECK(k0.net(k0.id("c")).type == GateType::Buf);
  CHECK(k0.net(k0.id("c")).fanins[0] == k0.id("t"));
  auto k1 = apply_key(n, {{"keyinput0", true}});
  CHECK(k1.net(k1.id("c")).type == GateType::Not);
  CHECK_THROWS_AS(apply_key(n, {}), PreconditionError);

  auto plain = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = AND(a, b)\n");
  CHECK(structurally_equal(apply_key(plain, {}), plain));
}

TEST_CASE("constant propagation rewrites") {
  auto n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nINPUT(keyinput1)\nOUTPUT(y)\nOUTPUT(z)\n"
      "t = NOT(a)\nu = XNOR(t, keyinput0)\ny = AND(u, b)\n"
      "v = OR(a, keyinput1)\nz = AND(v, b)\n");
  // keyinput1 = 1 makes z = b; u = XNOR(NOT a, 0) = a.
  auto r = apply_key(n, {{"keyinput0", false}, {"keyinput1", true}});
  CHECK(r.net(r.id("y")).type == GateType::And);
  CHECK(r.net(r.id("z")).type == GateType::Buf);
  CHECK(r.gate_count() == 2);
  for (int v = 0; v < 4; ++v) {
    Assignment in{{"a", bool(v & 1)}, {"b", bool(v & 2)}};
    CHECK(simulate(r, in, {}) ==
          simulate(n, in, {{"keyinput0", false}, {"keyinput1", true}}));
  }
}

TEST_CASE("corpus: round trip, decomposition, Tseitin agreement") {
  std::mt19937_64 rng(7);
  for (const auto& name : testing::corpus_names()) {
    CAPTURE(name);
    auto n = testing::corpus(name);
    CHECK(structurally_equal(parse_bench(write_bench(n)), n));
    auto d = decompose_to_2input(n);
    CHECK(is_2input(d));
    CHECK(check_equivalence(n, d).verdict == Verdict::Equivalent);

    auto f = sat::to_cnf(n);
    for (int t = 0; t < 5; ++t) {
      auto x = testing::random_bits(rng, n.inputs().size());
      auto out = evaluate(n, x, {});
      std::vector<int> assume;
      for (std::size_t i = 0; i < x.size(); ++i) {
        int v = f.net_map.at(n.net(n.inputs()[i]).name);
        assume.push_back(x[i] ? v : -v);
      }
      auto r = sat::solve(f, assume, {});
      REQUIRE(r.status == sat::Status::Sat);
      for (std::size_t o = 0; o < out.size(); ++o)
        CHECK(r.model->at(n.net(n.outputs()[o]).name) == out[o]);
    }
  }
}

TEST_CASE("equivalence finds inverted output") {
  auto n = testing::corpus("c432");
  auto text = write_bench(n);
  auto po = n.net(n.outputs()[0]).name;
  // Rename the driver and add an inverter with the output name.
  std::string bad;
  for (std::size_t pos = 0;;) {
    auto eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol - pos);
    if (line.rfind(po + " = ", 0) == 0) {
      bad += "_inv" + line.substr(po.size()) + "\n" + po + " = NOT(_inv)\n";
    } else {
      bad += line + "\n";
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  auto m = parse_bench(bad);
  auto r = check_equivalence(n, m);
  REQUIRE(r.verdict == Verdict::Different);
  Assignment in;
  for (auto& [k, v] : *r.counterexample) in[k] = v;
  CHECK(simulate(n, in, {}).at(r.differing_output) != simulate(m, in, {}).at(r.differing_output));
  CHECK(check_equivalence(n, n).verdict == Verdict::Equivalent);
}
