#include "lockwork/attacks.hpp"

#include <algorithm>
#include <memory>

#include "lockwork/error.hpp"
#include "lockwork/random.hpp"
#include "lockwork/sat/cnf.hpp"
#include "lockwork/simulate.hpp"

namespace lockwork {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Unknown: return "UNKNOWN";
    case Provenance::Proven: return "PROVEN";
    case Provenance::Verified: return "VERIFIED";
    case Provenance::Guessed: return "GUESSED";
  }
  return "?";
}

PartialKey PartialKey::unknown(const Netlist& n) {
  PartialKey k;
  for (NetId id : keys_by_index(n)) k.names.push_back(n.net(id).name);
  k.bits.assign(k.names.size(), std::nullopt);
  k.provenance.assign(k.names.size(), Provenance::Unknown);
  return k;
}

std::optional<std::size_t> PartialKey::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

void PartialKey::set(const std::string& name, bool value, Provenance p) {
  auto i = index_of(name);
  if (!i) throw PreconditionError("unknown key " + name);
  bits[*i] = value;
  provenance[*i] = p;
}

void PartialKey::merge(const PartialKey& other) {
  for (std::size_t i = 0; i < other.names.size(); ++i)
    if (other.bits[i])
      if (auto j = index_of(other.names[i])) {
        bits[*j] = other.bits[i];
        provenance[*j] = other.provenance[i];
      }
}

std::size_t PartialKey::decided() const {
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto& b) { return b.has_value(); }));
}

std::size_t PartialKey::proven() const {
  return static_cast<std::size_t>(std::count(provenance.begin(), provenance.end(), Provenance::Proven));
}

Assignment PartialKey::assignment() const {
  Assignment a;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (bits[i]) a[names[i]] = *bits[i];
  return a;
}

std::string PartialKey::to_string() const {
  std::string s;
  for (auto& b : bits) s += b ? (*b ? '1' : '0') : 'x';
  return s;
}

namespace {

using sat::Term;

// Two key copies of the locked netlist over shared inputs, plus oracle
// agreement constraints on both copies.
class KeyMiter {
 public:
  KeyMiter(const Netlist& locked, const std::vector<std::string>& oracle_inputs,
           const std::vector<std::string>& oracle_outputs, const std::vector<std::string>& ignore,
           const sat::SolverFactory& factory)
      : n_(locked),
        solver_(factory ? factory() : std::make_unique<sat::Solver>()),
        enc_(*solver_) {
    if (locked.keys().empty()) throw PreconditionError("netlist has no key inputs");
    // Locked inputs in oracle order.
    for (NetId i : locked.inputs()) {
      auto it = std::find(oracle_inputs.begin(), oracle_inputs.end(), locked.net(i).name);
      if (it == oracle_inputs.end())
        throw PreconditionError("oracle lacks input " + locked.net(i).name);
      input_pos_.push_back(static_cast<std::size_t>(it - oracle_inputs.begin()));
    }
    for (std::size_t o = 0; o < locked.outputs().size(); ++o) {
      const std::string& name = locked.net(locked.outputs()[o]).name;
      if (std::find(ignore.begin(), ignore.end(), name) != ignore.end()) continue;
      auto it = std::find(oracle_outputs.begin(), oracle_outputs.end(), name);
      if (it == oracle_outputs.end()) throw PreconditionError("oracle lacks output " + name);
      compared_.emplace_back(o, static_cast<std::size_t>(it - oracle_outputs.begin()));
    }
    for (std::size_t i = 0; i < locked.keys().size(); ++i) {
      ka_.push_back(enc_.fresh());
      kb_.push_back(enc_.fresh());
    }
    for (std::size_t i = 0; i < locked.inputs().size(); ++i) x_.push_back(enc_.fresh());
    auto a = enc_.encode_outputs(locked, x_, ka_);
    auto b = enc_.encode_outputs(locked, x_, kb_);
    Term diff = Term::constant(false);
    for (auto [o, _] : compared_) diff = enc_.or2(diff, enc_.xor2(a[o], b[o]));
    diff_ = diff;
  }

  std::size_t oracle_width() const { return input_pos_.size(); }

  void add(const Observation& obs) {
    std::vector<Term> in(input_pos_.size());
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = Term::constant(obs.inputs[input_pos_[i]]);
    for (auto* keys : {&ka_, &kb_}) {
      auto out = enc_.encode_outputs(n_, in, *keys);
      for (auto [o, r] : compared_) consistent_ = enc_.require(out[o], obs.outputs[r]) && consistent_;
    }
  }

  bool consistent() const { return consistent_; }

  /// Input on which two consistent keys disagree.
  sat::Status find_dip(const sat::Budget& budget, std::vector<bool>& oracle_x) {
    if (!consistent_ || (diff_.is_const() && !diff_.const_value())) return sat::Status::Unsat;
    std::vector<sat::Lit> as{enc_.to_lit(diff_)};
    auto st = solver_->solve(as, budget);
    if (st != sat::Status::Sat) return st;
    std::size_t width = 0;
    for (auto p : input_pos_) width = std::max(width, p + 1);
    oracle_x.assign(std::max(width, oracle_x.size()), false);
    for (std::size_t i = 0; i < x_.size(); ++i) oracle_x[input_pos_[i]] = value(x_[i]);
    return st;
  }

  /// Any key consistent with the observations, by key name.
  sat::Status consistent_key(const sat::Budget& budget, Assignment& key) {
    if (!consistent_) return sat::Status::Unsat;
    auto st = solver_->solve(budget);
    if (st != sat::Status::Sat) return st;
    for (std::size_t i = 0; i < ka_.size(); ++i) key[n_.net(n_.keys()[i]).name] = value(ka_[i]);
    return st;
  }

  /// Is key bit `i` (positional in n.keys()) forced to !v?
  sat::Status try_bit(std::size_t i, bool v, const sat::Budget& budget) {
    if (!consistent_) return sat::Status::Unsat;
    if (ka_[i].is_const()) return ka_[i].const_value() == v ? sat::Status::Sat : sat::Status::Unsat;
    std::vector<sat::Lit> as{ka_[i].as_lit() ^ !v};
    return solver_->solve(as, budget);
  }

 private:
  bool value(Term t) const { return t.is_const() ? t.const_value() : solver_->value(t.as_lit()); }

  const Netlist& n_;
  std::unique_ptr<sat::DecisionProcedure> solver_;
  sat::CircuitEncoder enc_;
  std::vector<std::size_t> input_pos_;
  std::vector<std::pair<std::size_t, std::size_t>> compared_;
  std::vector<Term> ka_, kb_, x_;
  Term diff_;
  bool consistent_ = true;
};

sat::Budget with_conflicts(const sat::Budget& b, std::int64_t conflicts) {
  sat::Budget r = b;
  r.conflicts = conflicts;
  return r;
}

// Proves bits in-place; stops early when the global budget runs out.
void prove_into(KeyMiter& m, const Netlist& locked, PartialKey& key, const sat::Budget& budget,
                std::int64_t conflicts) {
  for (std::size_t i = 0; i < locked.keys().size(); ++i) {
    if (budget.expired()) return;
    const std::string& name = locked.net(locked.keys()[i]).name;
    auto idx = key.index_of(name);
    if (!idx || key.provenance[*idx] == Provenance::Proven) continue;
    auto b = with_conflicts(budget, conflicts);
    if (m.try_bit(i, false, b) == sat::Status::Unsat) key.set(name, true, Provenance::Proven);
    else if (m.try_bit(i, true, b) == sat::Status::Unsat) key.set(name, false, Provenance::Proven);
  }
}

}  // namespace

DipResult dip_attack(const Netlist& locked, const Oracle& oracle, const DipOptions& opt) {
  KeyMiter m(locked, oracle.input_names(), oracle.output_names(), opt.ignore_outputs, opt.factory);
  DipResult r;
  std::vector<bool> x(oracle.input_names().size());
  while (true) {
    if (r.dip_count >= opt.max_dips || opt.budget.expired()) return r;
    auto st = m.find_dip(opt.budget, x);
    if (st == sat::Status::Timeout) return r;
    if (st == sat::Status::Unsat) break;
    Observation obs{x, oracle.query(x)};
    m.add(obs);
    r.observations.push_back(std::move(obs));
    ++r.dip_count;
  }
  Assignment key;
  if (m.consistent_key(opt.budget, key) == sat::Status::Sat) {
    r.complete = true;
    r.key = std::move(key);
  } else if (!m.consistent()) {
    throw Error("DIP attack: observations contradict every key");
  }
  return r;
}

PartialKey prove_bits(const Netlist& locked, const std::vector<std::string>& oracle_inputs,
                      const std::vector<std::string>& oracle_outputs,
                      const std::vector<Observation>& observations,
                      const std::vector<std::string>& ignore_outputs, const sat::Budget& budget,
                      std::int64_t conflicts_per_call, const sat::SolverFactory& factory) {
  KeyMiter m(locked, oracle_inputs, oracle_outputs, ignore_outputs, factory);
  for (const auto& o : observations) m.add(o);
  PartialKey key = PartialKey::unknown(locked);
  if (!m.consistent()) return key;  // contradictory observations prove nothing useful
  prove_into(m, locked, key, budget, conflicts_per_call);
  return key;
}

QueryResult query_attack(const Netlist& locked, const Oracle& oracle, const QueryOptions& opt,
                         const std::vector<Observation>& carryover) {
  QueryResult r;
  r.key = PartialKey::unknown(locked);
  if (opt.max_queries == 0 || opt.budget.expired()) return r;
  KeyMiter m(locked, oracle.input_names(), oracle.output_names(), opt.ignore_outputs, opt.factory);
  for (const auto& o : carryover) m.add(o);
  r.observations = carryover;
  Rng rng(opt.seed);
  const std::size_t width = oracle.input_names().size();
  const std::size_t period = opt.discriminating_per_random + 1;
  bool discriminators_left = true;
  std::vector<bool> x(width);

  auto observe = [&](const std::vector<bool>& in) {
    Observation obs{in, oracle.query(in)};
    m.add(obs);
    r.observations.push_back(std::move(obs));
    ++r.query_count;
  };

  prove_into(m, locked, r.key, opt.budget, opt.conflicts_per_call);
  while (r.key.proven() < r.key.names.size() && m.consistent()) {
    bool stop = false;
    for (std::size_t q = 0; q < period; ++q) {
      if (r.query_count >= opt.max_queries || opt.budget.expired()) {
        stop = true;
        break;
      }
      bool random = q == period - 1 || !discriminators_left;
      if (!random) {
        auto st = m.find_dip(with_conflicts(opt.budget, opt.conflicts_per_call), x);
        if (st == sat::Status::Unsat) discriminators_left = false;
        if (st != sat::Status::Sat) random = true;
      }
      if (random) {
        // Once no discriminator exists, random queries add nothing.
        if (!discriminators_left) {
          stop = true;
          break;
        }
        for (std::size_t i = 0; i < width; ++i) x[i] = rng.bit();
      }
      observe(x);
    }
    prove_into(m, locked, r.key, opt.budget, opt.conflicts_per_call);
    if (stop) break;
  }
  if (!m.consistent()) {
    // Observations no key explains (e.g. a stripped output slipped in):
    // nothing proven under them can be trusted.
    r.key = PartialKey::unknown(locked);
  }
  return r;
}

bool oracle_agrees(const Netlist& locked, const Assignment& key, const Oracle& oracle,
                   std::size_t patterns, std::uint64_t seed) {
  std::vector<bool> kv;
  for (NetId k : locked.keys()) {
    auto it = key.find(locked.net(k).name);
    if (it == key.end()) return false;
    kv.push_back(it->second);
  }
  const auto& names = oracle.input_names();
  std::vector<std::size_t> pos;
  for (NetId i : locked.inputs()) {
    auto it = std::find(names.begin(), names.end(), locked.net(i).name);
    if (it == names.end()) return false;
    pos.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  std::vector<std::size_t> out_pos;
  for (NetId o : locked.outputs()) {
    auto it = std::find(oracle.output_names().begin(), oracle.output_names().end(), locked.net(o).name);
    if (it == oracle.output_names().end()) return false;
    out_pos.push_back(static_cast<std::size_t>(it - oracle.output_names().begin()));
  }
  Rng rng(seed);
  std::vector<bool> x(names.size()), lx(pos.size());
  for (std::size_t p = 0; p < patterns + 2; ++p) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = p == 0 ? false : p == 1 ? true : rng.bit();
    for (std::size_t i = 0; i < pos.size(); ++i) lx[i] = x[pos[i]];
    auto want = oracle.query(x);
    auto got = evaluate(locked, lx, kv);
    for (std::size_t o = 0; o < got.size(); ++o)
      if (got[o] != want[out_pos[o]]) return false;
  }
  return true;
}

}  // namespace lockwork
