#include "lockwork/flows.hpp"

#include <chrono>

#include "lockwork/equivalence.hpp"
#include "lockwork/error.hpp"
#include "lockwork/transform.hpp"

namespace lockwork {

const char* flow_name(Flow f) { return f == Flow::Og ? "OG" : "OL"; }

const char* verification_name(Verification v) {
  switch (v) {
    case Verification::LecPass: return "LEC_PASS";
    case Verification::LecFail: return "LEC_FAIL";
    case Verification::NotApplicable: return "NOT_APPLICABLE";
  }
  return "?";
}

sat::Budget FlowBudgets::stage(std::int64_t ms) const {
  if (deterministic || ms <= 0) return sat::Budget::unlimited();
  return sat::Budget::for_duration(std::chrono::milliseconds(ms));
}

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Classify and partition; fills the report and returns nullopt on failure.
std::optional<Analysis> classify_stage(const Netlist& cll, AttackReport& r) {
  Stopwatch sw;
  r.key = PartialKey::unknown(cll);
  std::optional<Analysis> a;
  try {
    if (cll.keys().empty()) throw PreconditionError("netlist has no key inputs");
    a = analyze(cll);
    r.scheme = a->classification.scheme;
    r.technique = a->classification.technique;
    if (a->cg) r.critical_gate = a->cg->gate;
    if (r.scheme == Scheme::Unclassified) {
      r.error = "UNCLASSIFIED";
      r.diagnostic = a->classification.note;
      a.reset();
    }
  } catch (const CgNotFound& e) {
    r.error = "CG_NOT_FOUND";
    r.diagnostic = e.what();
    r.scheme = Scheme::Unclassified;
    a.reset();
  } catch (const PreconditionError& e) {
    r.error = "PRECONDITION";
    r.diagnostic = e.what();
    a.reset();
  }
  r.stage_times_ms["classification"] = sw.ms();
  return a;
}

QbfOutcome qbf_stage(const Analysis& a, const FlowBudgets& b, AttackReport& r) {
  Stopwatch sw;
  QbfOptions opt;
  opt.budget = b.stage(b.qbf_ms);
  opt.max_iterations = b.max_cegar;
  opt.factory = b.factory;
  auto q = solve_constant_output_2qbf(a.parts->unit_part, opt);
  r.qbf_status = q.status;
  r.cegar_iterations = q.cegar_iterations;
  if (q.status == QbfStatus::Solved) {
    r.family = Family::Sflt;
    for (auto& [name, v] : *q.key) r.key.set(name, v, Provenance::Verified);
  } else if (q.status == QbfStatus::NoSolution) {
    r.family = Family::Dflt;
  }
  r.stage_times_ms["qbf"] = sw.ms();
  return q;
}

// Outputs of the functional part that the removed unit used to reach.
std::vector<std::string> outputs_behind(const Netlist& n, const std::string& net) {
  std::vector<bool> hit(n.nets().size(), false);
  hit[n.id(net)] = true;
  for (NetId id = 0; id < n.nets().size(); ++id)
    for (NetId f : n.net(id).fanins)
      if (hit[f]) hit[id] = true;
  std::vector<std::string> out;
  for (NetId o : n.outputs())
    if (hit[o]) out.push_back(n.net(o).name);
  return out;
}

// DIP phase, then a query phase when the DIP loop did not finish (or when
// its key is not trustworthy because outputs were left out).
void oracle_stage(const Netlist& target, const Oracle& oracle, const FlowBudgets& b,
                  const std::vector<std::string>& ignore, AttackReport& r) {
  if (target.keys().empty()) return;
  Stopwatch sw;
  DipOptions d;
  d.budget = b.stage(b.dip_ms);
  d.max_dips = b.max_dips;
  d.ignore_outputs = ignore;
  d.factory = b.factory;
  auto dip = dip_attack(target, oracle, d);
  r.dip_count = dip.dip_count;
  r.stage_times_ms["dip"] = sw.ms();
  if (dip.complete && ignore.empty()) {
    for (auto& [name, v] : *dip.key) r.key.set(name, v, Provenance::Verified);
    Stopwatch ps;
    PartialKey proven = prove_bits(target, oracle.input_names(), oracle.output_names(), dip.observations,
                                   {}, b.stage(b.query_ms), b.conflicts_per_call, b.factory);
    for (std::size_t i = 0; i < proven.names.size(); ++i)
      if (proven.provenance[i] == Provenance::Proven) r.key.set(proven.names[i], *proven.bits[i], Provenance::Proven);
    r.stage_times_ms["proof"] = ps.ms();
    return;
  }
  Stopwatch qs;
  QueryOptions q;
  q.budget = b.stage(b.query_ms);
  q.max_queries = b.max_queries;
  q.conflicts_per_call = b.conflicts_per_call;
  q.seed = b.seed;
  q.ignore_outputs = ignore;
  q.factory = b.factory;
  auto qr = query_attack(target, oracle, q, dip.observations);
  r.query_count = qr.query_count;
  r.key.merge(qr.key);
  r.stage_times_ms["query"] = qs.ms();
}

void scope_stage(const Netlist& target, const FlowBudgets& b, AttackReport& r, const char* stage) {
  if (target.keys().empty()) return;
  Stopwatch sw;
  ScopeOptions s;
  s.budget = b.stage(b.scope_ms);
  r.key.merge(scope_attack(target, s));
  r.stage_times_ms[stage] = sw.ms();
}

}  // namespace

AttackReport run_og_flow(const Netlist& cll, const Oracle& oracle, const FlowBudgets& budgets) {
  AttackReport r;
  r.flow = Flow::Og;
  auto a = classify_stage(cll, r);
  if (!a) return r;
  if (r.scheme == Scheme::RllOnly) {
    oracle_stage(cll, oracle, budgets, {}, r);
  } else {
    auto q = qbf_stage(*a, budgets, r);
    const Netlist& func = a->parts->functional_part;
    if (q.status == QbfStatus::Solved) {
      oracle_stage(func, oracle, budgets, {}, r);
    } else {
      // The stripped functional part differs from the oracle behind the
      // critical gate, so those outputs cannot constrain the key.
      oracle_stage(func, oracle, budgets, outputs_behind(func, a->parts->critical_gate), r);
    }
  }
  if (r.key.total()) {
    Stopwatch sw;
    r.oracle_check = oracle_agrees(cll, r.key.assignment(), oracle, 10000, budgets.seed);
    r.stage_times_ms["oracle_check"] = sw.ms();
  }
  return r;
}

AttackReport run_ol_flow(const Netlist& cll, const FlowBudgets& budgets) {
  AttackReport r;
  r.flow = Flow::Ol;
  auto a = classify_stage(cll, r);
  if (!a) return r;
  if (r.scheme == Scheme::RllOnly) {
    scope_stage(cll, budgets, r, "scope");
    return r;
  }
  auto q = qbf_stage(*a, budgets, r);
  if (q.status != QbfStatus::Solved) scope_stage(a->parts->unit_part, budgets, r, "scope_unit");
  scope_stage(a->parts->functional_part, budgets, r, "scope_functional");
  return r;
}

Verification verify_key(const Netlist& locked, const PartialKey& key, const Netlist& original,
                        const sat::Budget& budget, const sat::SolverFactory& factory) {
  if (!key.total() || key.names.size() != locked.keys().size()) return Verification::LecFail;
  auto activated = apply_key(locked, key.assignment());
  auto eq = check_equivalence(activated, original, budget, factory);
  return eq.verdict == Verdict::Equivalent ? Verification::LecPass : Verification::LecFail;
}

}  // namespace lockwork
