#include "lockwork/sat/cnf.hpp"

#include <cstdlib>
#include <sstream>

#include "lockwork/error.hpp"

namespace lockwork::sat {

bool CnfFormula::add_clause(std::span<const Lit> c) {
  std::vector<int> d;
  d.reserve(c.size());
  for (Lit l : c) {
    if (l.var() >= variable_count) variable_count = l.var() + 1;
    d.push_back(l.to_dimacs());
  }
  clauses.push_back(std::move(d));
  return true;
}

CnfFormula to_cnf(const Netlist& n) {
  CnfFormula f;
  f.variable_count = static_cast<int>(n.size());
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    f.net_map[net.name] = static_cast<int>(i) + 1;
    Lit o = Lit::make(static_cast<Var>(i));
    if (net.kind == NetKind::Const0) f.add_clause({~o});
    if (net.kind == NetKind::Const1) f.add_clause({o});
    if (!net.is_gate()) continue;
    std::vector<Lit> ins;
    for (NetId x : net.fanins) ins.push_back(Lit::make(static_cast<Var>(x)));
    encode_gate_clauses(f, net.type, o, ins);
  }
  return f;
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.variable_count << " " << f.clauses.size() << "\n";
  for (const auto& c : f.clauses) {
    for (int l : c) os << l << " ";
    os << "0\n";
  }
  return os.str();
}

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<int> cur;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      std::size_t nc = 0;
      ls >> p >> cnf >> f.variable_count >> nc;
      if (cnf != "cnf") throw ParseError(0, "DIMACS: expected 'p cnf'");
      header = true;
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        f.clauses.push_back(cur);
        cur.clear();
      } else {
        if (std::abs(lit) > f.variable_count) f.variable_count = std::abs(lit);
        cur.push_back(lit);
      }
    }
  }
  if (!header) throw ParseError(0, "DIMACS: missing header");
  if (!cur.empty()) f.clauses.push_back(cur);
  return f;
}

void load(const CnfFormula& f, DecisionProcedure& dp) {
  while (dp.num_vars() < f.variable_count) dp.new_var();
  std::vector<Lit> c;
  for (const auto& cl : f.clauses) {
    c.clear();
    for (int d : cl) c.push_back(Lit::from_dimacs(d));
    dp.add_clause(std::span<const Lit>(c));
  }
}

SatResult solve(const CnfFormula& f, std::span<const int> assumptions, const Budget& budget,
                DecisionProcedure* backend) {
  Solver local;
  DecisionProcedure& dp = backend ? *backend : local;
  for (int a : assumptions)
    if (a == 0 || std::abs(a) > f.variable_count)
      throw PreconditionError("assumption references an undeclared variable");
  load(f, dp);
  std::vector<Lit> as;
  for (int a : assumptions) as.push_back(Lit::from_dimacs(a));
  SatResult r;
  r.status = dp.solve(as, budget);
  if (r.status == Status::Sat) {
    r.values.resize(f.variable_count);
    for (int v = 0; v < f.variable_count; ++v) r.values[v] = dp.value(static_cast<Var>(v));
    Assignment m;
    for (auto& [name, var] : f.net_map) m[name] = r.values[var - 1];
    r.model = std::move(m);
  }
  return r;
}

// --- CircuitEncoder ---------------------------------------------------------

namespace {
std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}
}  // namespace

Term CircuitEncoder::and2(Term a, Term b) {
  if (a.is_const()) return a.const_value() ? b : a;
  if (b.is_const()) return b.const_value() ? a : b;
  if (a == b) return a;
  if (a == ~b) return Term::constant(false);
  std::uint64_t key = pair_key(a.raw(), b.raw());
  if (strash_) {
    auto it = and_table_.find(key);
    if (it != and_table_.end()) return it->second;
  }
  Lit o = Lit::make(dp_.new_var());
  Lit la = a.as_lit(), lb = b.as_lit();
  dp_.add_clause({~o, la});
  dp_.add_clause({~o, lb});
  dp_.add_clause({o, ~la, ~lb});
  Term t = Term::lit(o);
  if (strash_) and_table_.emplace(key, t);
  return t;
}

Term CircuitEncoder::xor2(Term a, Term b) {
  if (a.is_const()) return b ^ a.const_value();
  if (b.is_const()) return a ^ b.const_value();
  if (a == b) return Term::constant(false);
  if (a == ~b) return Term::constant(true);
  bool parity = a.as_lit().sign() != b.as_lit().sign();
  Lit la = Lit::make(a.as_lit().var()), lb = Lit::make(b.as_lit().var());
  std::uint64_t key = pair_key(la.x, lb.x);
  if (strash_) {
    auto it = xor_table_.find(key);
    if (it != xor_table_.end()) return it->second ^ parity;
  }
  Lit o = Lit::make(dp_.new_var());
  dp_.add_clause({~o, la, lb});
  dp_.add_clause({~o, ~la, ~lb});
  dp_.add_clause({o, ~la, lb});
  dp_.add_clause({o, la, ~lb});
  Term t = Term::lit(o);
  if (strash_) xor_table_.emplace(key, t);
  return t ^ parity;
}

Term CircuitEncoder::and_range(std::span<const Term> xs) {
  if (xs.size() == 1) return xs[0];
  std::size_t mid = (xs.size() + 1) / 2;
  return and2(and_range(xs.subspan(0, mid)), and_range(xs.subspan(mid)));
}

Term CircuitEncoder::and_n(std::span<const Term> xs) {
  if (xs.empty()) return Term::constant(true);
  return and_range(xs);
}

Term CircuitEncoder::xor_n(std::span<const Term> xs) {
  if (xs.empty()) return Term::constant(false);
  Term acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = xor2(acc, xs[i]);
  return acc;
}

Term CircuitEncoder::gate(GateType t, std::span<const Term> ins) {
  bool inv = is_inverting(t);
  switch (base_type(t)) {
    case GateType::Buf: return ins[0] ^ inv;
    case GateType::And: return and_n(ins) ^ inv;
    case GateType::Or: {
      std::vector<Term> neg;
      for (Term x : ins) neg.push_back(~x);
      return ~and_n(neg) ^ inv;
    }
    case GateType::Xor: return xor_n(ins) ^ inv;
    default: break;
  }
  return ins[0];
}

std::vector<Term> CircuitEncoder::encode(const Netlist& n, std::span<const Term> inputs,
                                         std::span<const Term> keys) {
  if (inputs.size() != n.inputs().size() || keys.size() != n.keys().size())
    throw PreconditionError("encode: input or key terms have the wrong width");
  std::vector<Term> t(n.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) t[n.inputs()[i]] = inputs[i];
  for (std::size_t i = 0; i < keys.size(); ++i) t[n.keys()[i]] = keys[i];
  std::vector<Term> buf;
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (net.kind == NetKind::Const0) t[i] = Term::constant(false);
    else if (net.kind == NetKind::Const1) t[i] = Term::constant(true);
    else if (net.is_gate()) {
      buf.clear();
      for (NetId f : net.fanins) buf.push_back(t[f]);
      t[i] = gate(net.type, buf);
    }
  }
  return t;
}

std::vector<Term> CircuitEncoder::encode_outputs(const Netlist& n, std::span<const Term> inputs,
                                                 std::span<const Term> keys) {
  auto t = encode(n, inputs, keys);
  std::vector<Term> out;
  for (NetId o : n.outputs()) out.push_back(t[o]);
  return out;
}

bool CircuitEncoder::require(Term t, bool value) {
  if (t.is_const()) {
    if (t.const_value() == value) return true;
    dp_.add_clause(std::span<const Lit>{});
    return false;
  }
  return dp_.add_clause({t.as_lit() ^ !value});
}

Lit CircuitEncoder::to_lit(Term t) {
  if (!t.is_const()) return t.as_lit();
  if (!true_lit_) {
    true_lit_ = Lit::make(dp_.new_var());
    dp_.add_clause({*true_lit_});
  }
  return t.const_value() ? *true_lit_ : ~*true_lit_;
}

}  // namespace lockwork::sat
