#include "lockwork/equivalence.hpp"

#include <algorithm>
#include <set>

#include "lockwork/error.hpp"
#include "lockwork/sat/cnf.hpp"
#include "lockwork/simulate.hpp"

namespace lockwork {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "EQUIVALENT";
    case Verdict::Different: return "DIFFERENT";
    case Verdict::Timeout: return "TIMEOUT";
  }
  return "?";
}

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

EquivalenceResult check_equivalence(const Netlist& a, const Netlist& b, const sat::Budget& budget,
                                    const sat::SolverFactory& factory) {
  if (as_set(a.input_names()) != as_set(b.input_names()))
    throw PreconditionError("check_equivalence: primary inputs differ");
  if (as_set(a.output_names()) != as_set(b.output_names()))
    throw PreconditionError("check_equivalence: primary output names differ");
  if (as_set(a.key_names()) != as_set(b.key_names()))
    throw PreconditionError("check_equivalence: key inputs must be applied first");

  auto dp = factory ? factory() : std::make_unique<sat::Solver>();
  sat::CircuitEncoder enc(*dp);

  // Shared terms by name.
  std::vector<std::string> names = a.input_names();
  auto kn = a.key_names();
  names.insert(names.end(), kn.begin(), kn.end());
  std::map<std::string, sat::Term> shared;
  for (const auto& nm : names) shared.emplace(nm, enc.fresh());
  auto terms_for = [&](const Netlist& n, std::vector<sat::Term>& in, std::vector<sat::Term>& ks) {
    for (NetId i : n.inputs()) in.push_back(shared.at(n.net(i).name));
    for (NetId k : n.keys()) ks.push_back(shared.at(n.net(k).name));
  };
  std::vector<sat::Term> ia, ka, ib, kb;
  terms_for(a, ia, ka);
  terms_for(b, ib, kb);
  auto oa = enc.encode_outputs(a, ia, ka);
  auto ob = enc.encode_outputs(b, ib, kb);

  const auto bnames = b.output_names();
  std::vector<std::pair<std::string, sat::Term>> diffs;
  for (std::size_t i = 0; i < oa.size(); ++i) {
    const std::string& name = a.net(a.outputs()[i]).name;
    sat::Term other = ob[std::find(bnames.begin(), bnames.end(), name) - bnames.begin()];
    sat::Term d = enc.xor2(oa[i], other);
    if (d.is_const() && !d.const_value()) continue;
    diffs.emplace_back(name, d);
  }

  EquivalenceResult r;
  if (diffs.empty()) {
    r.verdict = Verdict::Equivalent;
    return r;
  }
  sat::Term root = sat::Term::constant(false);
  for (auto& [n, d] : diffs) root = enc.or2(root, d);
  std::vector<sat::Lit> assume{enc.to_lit(root)};
  auto st = dp->solve(assume, budget);
  if (st == sat::Status::Unsat) {
    r.verdict = Verdict::Equivalent;
    return r;
  }
  if (st == sat::Status::Timeout) return r;

  Assignment cex, inputs, key;
  for (const auto& nm : names) {
    bool v = dp->value(enc.to_lit(shared.at(nm)));
    cex[nm] = v;
    (is_key_name(nm) ? key : inputs)[nm] = v;
  }
  auto sa = simulate(a, inputs, key);
  auto sb = simulate(b, inputs, key);
  for (auto& [name, v] : sa)
    if (sb.at(name) != v) {
      r.differing_output = name;
      break;
    }
  if (r.differing_output.empty())
    throw Error("check_equivalence: SAT counterexample not confirmed by simulation");
  r.verdict = Verdict::Different;
  r.counterexample = std::move(cex);
  return r;
}

}  // namespace lockwork
