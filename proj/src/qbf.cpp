#include "lockwork/qbf.hpp"

#include <set>

#include "lockwork/error.hpp"
#include "lockwork/sat/cnf.hpp"
#include "lockwork/simulate.hpp"

namespace lockwork {

const char* qbf_status_name(QbfStatus s) {
  switch (s) {
    case QbfStatus::Solved: return "SOLVED";
    case QbfStatus::NoSolution: return "NO_SOLUTION";
    case QbfStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

namespace {

using sat::Term;

std::unique_ptr<sat::DecisionProcedure> make_solver(const sat::SolverFactory& f) {
  return f ? f() : std::make_unique<sat::Solver>();
}

enum class Round { Found, Refuted, Timeout };

struct RoundResult {
  Round round = Round::Timeout;
  std::vector<bool> key;
};

// Comparator partners: for each input position, the key positions it is
// XOR/XNOR-compared with, in netlist order.
std::vector<std::vector<std::size_t>> partners(const Netlist& n) {
  std::vector<std::vector<std::size_t>> p(n.inputs().size());
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& g = n.net(i);
    if (!g.is_gate() || g.fanins.size() != 2) continue;
    if (g.type != GateType::Xor && g.type != GateType::Xnor) continue;
    int a = n.input_index(g.fanins[0]), b = n.input_index(g.fanins[1]);
    int ka = n.key_index_of(g.fanins[0]), kb = n.key_index_of(g.fanins[1]);
    if (a >= 0 && kb >= 0) p[a].push_back(static_cast<std::size_t>(kb));
    if (b >= 0 && ka >= 0) p[b].push_back(static_cast<std::size_t>(ka));
  }
  return p;
}

RoundResult cegar(const Netlist& unit, bool c, const QbfOptions& opt, std::size_t& iterations) {
  const std::size_t ni = unit.inputs().size(), nk = unit.keys().size();
  auto synth = make_solver(opt.factory);
  sat::CircuitEncoder enc(*synth);
  std::vector<Term> key;
  for (std::size_t i = 0; i < nk; ++i) key.push_back(enc.fresh());
  auto link = partners(unit);
  std::size_t max_partners = 0;
  for (auto& p : link) max_partners = std::max(max_partners, p.size());

  std::set<std::vector<bool>> samples;
  bool consistent = true;
  auto add_copy = [&](const std::vector<Term>& in) {
    Term out = enc.encode_outputs(unit, in, key)[0];
    consistent = enc.require(out, c) && consistent;
  };
  auto add_sample = [&](const std::vector<bool>& x) {
    if (!samples.insert(x).second) return;
    std::vector<Term> in;
    for (bool b : x) in.push_back(Term::constant(b));
    add_copy(in);
  };
  add_sample(std::vector<bool>(ni, false));
  add_sample(std::vector<bool>(ni, true));

  std::set<std::vector<std::uint32_t>> symbolic;
  RoundResult r;
  while (true) {
    if (!consistent) {
      r.round = Round::Refuted;
      return r;
    }
    if (iterations >= opt.max_iterations || opt.budget.expired()) return r;
    ++iterations;
    auto st = synth->solve(opt.budget);
    if (st == sat::Status::Unsat) {
      r.round = Round::Refuted;
      return r;
    }
    if (st == sat::Status::Timeout) return r;
    std::vector<bool> k(nk);
    for (std::size_t i = 0; i < nk; ++i)
      k[i] = key[i].is_const() ? key[i].const_value() : synth->value(key[i].as_lit());

    // Verify: is there an input driving the output away from c?
    auto check = make_solver(opt.factory);
    sat::CircuitEncoder venc(*check);
    std::vector<Term> vin, vkey;
    for (std::size_t i = 0; i < ni; ++i) vin.push_back(venc.fresh());
    for (bool b : k) vkey.push_back(Term::constant(b));
    Term vout = venc.encode_outputs(unit, vin, vkey)[0];
    auto vst = venc.require(vout, !c) ? check->solve(opt.budget) : sat::Status::Unsat;
    if (vst == sat::Status::Timeout) return r;
    if (vst == sat::Status::Unsat) {
      r.round = Round::Found;
      r.key = std::move(k);
      return r;
    }
    std::vector<bool> x(ni);
    for (std::size_t i = 0; i < ni; ++i)
      x[i] = vin[i].is_const() ? vin[i].const_value() : check->value(vin[i].as_lit());
    if (evaluate(unit, x, k)[0] == c) throw Error("2QBF: counterexample failed re-simulation");
    add_sample(x);

    if (!opt.symbolic_samples) continue;
    for (std::size_t choice = 0; choice < max_partners; ++choice) {
      std::vector<Term> in(ni);
      std::vector<std::uint32_t> sig;
      bool any = false;
      for (std::size_t j = 0; j < ni; ++j) {
        if (link[j].empty()) {
          in[j] = Term::constant(x[j]);
        } else {
          std::size_t ki = link[j][std::min(choice, link[j].size() - 1)];
          in[j] = key[ki] ^ (x[j] != k[ki]);
          any = true;
        }
        sig.push_back(in[j].raw());
      }
      if (any && symbolic.insert(sig).second) add_copy(in);
    }
  }
}

}  // namespace

QbfOutcome solve_constant_output_2qbf(const Netlist& unit, const QbfOptions& opt) {
  if (unit.outputs().size() != 1) throw PreconditionError("2QBF unit must have exactly one output");
  if (unit.keys().empty()) throw PreconditionError("2QBF unit has no key inputs");
  QbfOutcome out;
  bool timed_out = false;
  for (bool c : {false, true}) {
    auto r = cegar(unit, c, opt, out.cegar_iterations);
    if (r.round == Round::Found) {
      out.status = QbfStatus::Solved;
      out.constant = c;
      Assignment key;
      for (std::size_t i = 0; i < r.key.size(); ++i) key[unit.net(unit.keys()[i]).name] = r.key[i];
      out.key = std::move(key);
      return out;
    }
    if (r.round == Round::Timeout) timed_out = true;
  }
  out.status = timed_out ? QbfStatus::Timeout : QbfStatus::NoSolution;
  return out;
}

}  // namespace lockwork
