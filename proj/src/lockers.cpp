#include "lockwork/lockers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "lockwork/error.hpp"
#include "lockwork/random.hpp"
#include "lockwork/sat/cnf.hpp"
#include "lockwork/sat/solver.hpp"
#include "lockwork/simulate.hpp"

namespace lockwork {

const char* technique_name(Technique t) {
  switch (t) {
    case Technique::Rll: return "RLL";
    case Technique::AntiSat: return "ANTISAT";
    case Technique::AntiSatDtl: return "ANTISAT_DTL";
    case Technique::CasLock: return "CASLOCK";
    case Technique::SarLock: return "SARLOCK";
    case Technique::TtLock: return "TTLOCK";
  }
  return "?";
}

std::optional<Technique> parse_technique(std::string_view s) {
  std::string u;
  for (char c : s)
    if (c != '-' && c != '_') u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "RLL") return Technique::Rll;
  if (u == "ANTISAT") return Technique::AntiSat;
  if (u == "ANTISATDTL" || u == "DTL") return Technique::AntiSatDtl;
  if (u == "CASLOCK") return Technique::CasLock;
  if (u == "SARLOCK") return Technique::SarLock;
  if (u == "TTLOCK") return Technique::TtLock;
  return std::nullopt;
}

const char* label_name(KeyLabel l) { return l == KeyLabel::Rll ? "RLL" : "PSLL"; }

namespace {

std::string key_name(std::size_t i) { return "keyinput" + std::to_string(i); }

void check_key_names_free(const Netlist& n, std::size_t offset, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i)
    if (n.find(key_name(offset + i)))
      throw PreconditionError("key name " + key_name(offset + i) + " already in use");
}

// Copies all primary and key inputs of `n`, then `count` new key inputs.
std::vector<NetId> copy_inputs(NetlistBuilder& b, const Netlist& n, std::vector<NetId>& map,
                               std::size_t offset, std::size_t count) {
  for (NetId i : n.inputs()) map[i] = b.add_input(n.net(i).name);
  for (NetId k : n.keys()) map[k] = b.add_key(n.net(k).name);
  std::vector<NetId> keys;
  for (std::size_t i = 0; i < count; ++i) keys.push_back(b.add_key(key_name(offset + i)));
  return keys;
}

NetId copy_net(NetlistBuilder& b, const Net& net, const std::vector<NetId>& map,
               const std::string& name) {
  if (net.kind == NetKind::Const0) return b.add_constant(name, false);
  if (net.kind == NetKind::Const1) return b.add_constant(name, true);
  std::vector<NetId> f;
  for (NetId x : net.fanins) f.push_back(map[x]);
  return b.add_gate(name, net.type, std::move(f));
}

GateType complement(GateType t) {
  switch (t) {
    case GateType::And: return GateType::Nand;
    case GateType::Nand: return GateType::And;
    case GateType::Or: return GateType::Nor;
    case GateType::Nor: return GateType::Or;
    case GateType::Xor: return GateType::Xnor;
    case GateType::Xnor: return GateType::Xor;
    case GateType::Not: return GateType::Buf;
    case GateType::Buf: return GateType::Not;
  }
  return t;
}

// Balanced 2-input tree; node k (post-order) gets types[k]. With
// invert_root the root gate computes the complement.
NetId tree(NetlistBuilder& b, const std::vector<NetId>& leaves, const std::vector<GateType>& types,
           bool invert_root) {
  std::size_t next = 0;
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi, bool root) -> NetId {
    if (hi - lo == 1) {
      if (root && invert_root) return b.add_gate(b.fresh_name(), GateType::Not, {leaves[lo]});
      return leaves[lo];
    }
    std::size_t mid = lo + (hi - lo + 1) / 2;
    NetId l = self(self, lo, mid, false);
    NetId r = self(self, mid, hi, false);
    GateType t = types[next++];
    if (root && invert_root) t = complement(t);
    return b.add_gate(b.fresh_name(), t, {l, r});
  };
  return rec(rec, 0, leaves.size(), true);
}

// Shared scaffolding for the point-function lockers: copies `n`, renames
// the chosen output's driver and leaves room for the unit.
struct Graft {
  NetlistBuilder b;
  std::vector<NetId> map;
  NetId target_old = 0;
  NetId driver = 0;  // renamed original driver in the new netlist
  std::vector<NetId> taps, keys;
  std::vector<std::size_t> tap_positions;
  std::string target_name;
};

Graft begin_graft(const Netlist& n, std::size_t nkeys, std::size_t ntaps, std::size_t offset,
                  Rng& rng, const std::optional<std::string>& target) {
  if (ntaps == 0) throw PreconditionError("point-function width must be positive");
  if (ntaps > n.inputs().size())
    throw PreconditionError("not enough primary inputs for " + std::to_string(ntaps) + " taps");
  check_key_names_free(n, offset, nkeys);
  std::vector<NetId> candidates;
  for (NetId o : n.outputs())
    if (n.net(o).is_gate()) candidates.push_back(o);
  if (candidates.empty()) throw PreconditionError("no output is driven by a gate");

  Graft g{NetlistBuilder(n.name()), std::vector<NetId>(n.size()), 0, 0, {}, {}, {}, {}};
  if (target) {
    auto id = n.find(*target);
    if (!id || std::find(candidates.begin(), candidates.end(), *id) == candidates.end())
      throw PreconditionError("target '" + *target + "' is not a gate-driven output");
    g.target_old = *id;
  } else {
    g.target_old = candidates[rng.below(candidates.size())];
  }
  g.target_name = n.net(g.target_old).name;
  std::vector<std::size_t> pos(n.inputs().size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
  g.tap_positions = rng.sample(pos, ntaps);

  g.b.reserve_names_of(n);
  g.keys = copy_inputs(g.b, n, g.map, offset, nkeys);
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (net.kind == NetKind::Input || net.kind == NetKind::Key) continue;
    std::string name = i == g.target_old ? g.b.fresh_name() : net.name;
    g.map[i] = copy_net(g.b, net, g.map, name);
  }
  g.driver = g.map[g.target_old];
  for (std::size_t p : g.tap_positions) g.taps.push_back(g.map[n.inputs()[p]]);
  return g;
}

Netlist finish_graft(Graft& g, const Netlist& n, NetId critical) {
  NetId cg = g.b.add_gate(g.target_name, GateType::Xor, {g.driver, critical});
  for (NetId o : n.outputs()) g.b.add_output(o == g.target_old ? cg : g.map[o]);
  return std::move(g.b).build();
}

std::vector<NetId> pairwise(NetlistBuilder& b, GateType t, const std::vector<NetId>& xs,
                            const std::vector<NetId>& ks) {
  std::vector<NetId> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(b.add_gate(b.fresh_name(), t, {xs[i], ks[i]}));
  return out;
}

GroundTruth psll_truth(const std::vector<NetId>& keys, const NetlistBuilder& b,
                       const std::vector<bool>& secret, Technique t, const std::string& cg,
                       std::uint64_t seed) {
  GroundTruth g;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    g.secret[b.net(keys[i]).name] = secret[i];
    g.labels[b.net(keys[i]).name] = KeyLabel::Psll;
  }
  g.psll = t;
  g.cg_hint = cg;
  g.seed = seed;
  return g;
}

// True when `net` is 0 on every input pattern under `secret`. Exhaustive
// over the taps for narrow units, a SAT check otherwise.
bool unit_constant_zero(const Netlist& locked, NetId net, const std::vector<std::size_t>& taps,
                        const GroundTruth& truth) {
  std::vector<bool> key;
  for (NetId k : locked.keys()) {
    auto it = truth.secret.find(locked.net(k).name);
    key.push_back(it != truth.secret.end() && it->second);
  }
  std::size_t n = taps.size();
  if (n > 16) {
    sat::Solver s;
    sat::CircuitEncoder enc(s);
    std::vector<sat::Term> in, kt;
    for (std::size_t i = 0; i < locked.inputs().size(); ++i) in.push_back(enc.fresh());
    for (bool b : key) kt.push_back(sat::Term::constant(b));
    auto terms = enc.encode(locked, in, kt);
    if (!enc.require(terms[net], true)) return true;
    return s.solve() == sat::Status::Unsat;
  }
  std::vector<std::uint64_t> kw;
  for (bool b : key) kw.push_back(b ? ~0ull : 0);
  // The unit only reads the taps, so other inputs stay at 0.
  std::uint64_t total = 1ull << n;
  for (std::uint64_t base = 0; base < total; base += 64) {
    std::vector<std::uint64_t> iw(locked.inputs().size(), 0);
    for (std::size_t t = 0; t < n; ++t) {
      std::uint64_t w = 0;
      for (std::uint64_t j = 0; j < 64; ++j) w |= (((base + j) >> t) & 1) << j;
      iw[taps[t]] = w;
    }
    auto v = simulate_words(locked, iw, kw);
    std::uint64_t mask = total - base >= 64 ? ~0ull : (1ull << (total - base)) - 1;
    if (v[net] & mask) return false;
  }
  return true;
}

std::vector<bool> random_bits(Rng& rng, std::size_t n) {
  std::vector<bool> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.bit();
  return v;
}

LockResult lock_two_block(const Netlist& n, std::size_t key_width, std::uint64_t seed,
                          Technique tech, std::size_t offset, double dtl_ratio,
                          const std::optional<std::string>& target) {
  if (key_width < 2 || key_width % 2)
    throw PreconditionError(std::string(technique_name(tech)) + " needs an even key width >= 2");
  std::size_t w = key_width / 2;
  constexpr int kAttempts = 16;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    Graft g = begin_graft(n, key_width, w, offset, rng, target);
    std::vector<NetId> k1(g.keys.begin(), g.keys.begin() + w), k2(g.keys.begin() + w, g.keys.end());
    std::vector<bool> half = random_bits(rng, w);
    std::vector<bool> secret = half;
    secret.insert(secret.end(), half.begin(), half.end());

    NetId blk_g, blk_gbar;
    if (tech == Technique::CasLock) {
      auto l1 = pairwise(g.b, GateType::Xor, g.taps, k1);
      auto l2 = pairwise(g.b, GateType::Xnor, g.taps, k2);
      blk_g = l1[0];
      blk_gbar = l2[0];
      for (std::size_t i = 1; i < w; ++i) {
        bool and_step = i % 2 == 1;
        blk_g = g.b.add_gate(g.b.fresh_name(), and_step ? GateType::And : GateType::Or, {blk_g, l1[i]});
        blk_gbar = g.b.add_gate(g.b.fresh_name(), and_step ? GateType::Or : GateType::And,
                                {blk_gbar, l2[i]});
      }
    } else {
      auto l1 = pairwise(g.b, GateType::Xor, g.taps, k1);
      auto l2 = pairwise(g.b, GateType::Xor, g.taps, k2);
      std::vector<GateType> types(w - 1, GateType::And);
      if (tech == Technique::AntiSatDtl && w > 1) {
        std::size_t m = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(dtl_ratio * static_cast<double>(w - 1))));
        std::vector<std::size_t> idx(w - 1);
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        const GateType repl[] = {GateType::Or, GateType::Nand, GateType::Xor};
        for (std::size_t i : rng.sample(idx, std::min(m, idx.size()))) types[i] = repl[rng.below(3)];
      }
      blk_g = tree(g.b, l1, types, false);
      blk_gbar = tree(g.b, l2, types, true);
    }
    NetId critical = g.b.add_gate(g.b.fresh_name(), GateType::And, {blk_g, blk_gbar});
    std::string critical_name = g.b.net(critical).name;
    auto truth = psll_truth(g.keys, g.b, secret, tech, g.target_name, seed);
    auto taps = g.tap_positions;
    Netlist locked = finish_graft(g, n, critical);
    if (unit_constant_zero(locked, locked.id(critical_name), taps, truth))
      return {std::move(locked), std::move(truth)};
  }
  throw Error(std::string(technique_name(tech)) + ": no key makes the critical signal constant 0");
}

}  // namespace

LockResult lock_rll(const Netlist& n, std::size_t p, std::uint64_t seed, std::size_t key_offset) {
  if (p == 0) throw PreconditionError("RLL needs at least one key");
  check_key_names_free(n, key_offset, p);
  std::vector<NetId> candidates;
  for (NetId i = 0; i < n.size(); ++i)
    if (n.net(i).is_gate() && !n.is_output(i)) candidates.push_back(i);
  if (candidates.size() < p)
    throw PreconditionError("RLL: " + std::to_string(p) + " keys requested but only " +
                            std::to_string(candidates.size()) + " internal nets");
  Rng rng(seed);
  auto sites = rng.sample(candidates, p);
  std::sort(sites.begin(), sites.end());
  std::vector<bool> secret = random_bits(rng, p);

  NetlistBuilder b(n.name());
  b.reserve_names_of(n);
  std::vector<NetId> map(n.size());
  auto keys = copy_inputs(b, n, map, key_offset, p);
  std::size_t next_site = 0;
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (net.kind == NetKind::Input || net.kind == NetKind::Key) continue;
    map[i] = copy_net(b, net, map, net.name);
    if (next_site < sites.size() && sites[next_site] == i) {
      GateType t = secret[next_site] ? GateType::Xnor : GateType::Xor;
      map[i] = b.add_gate(b.fresh_name(), t, {map[i], keys[next_site]});
      ++next_site;
    }
  }
  for (NetId o : n.outputs()) b.add_output(map[o]);

  GroundTruth truth;
  truth.has_rll = true;
  truth.seed = seed;
  for (std::size_t i = 0; i < p; ++i) {
    truth.secret[key_name(key_offset + i)] = secret[i];
    truth.labels[key_name(key_offset + i)] = KeyLabel::Rll;
  }
  return {std::move(b).build(), std::move(truth)};
}

LockResult lock_antisat(const Netlist& n, std::size_t key_width, std::uint64_t seed, bool dtl,
                        std::size_t key_offset, double dtl_ratio,
                        const std::optional<std::string>& target) {
  return lock_two_block(n, key_width, seed, dtl ? Technique::AntiSatDtl : Technique::AntiSat,
                        key_offset, dtl_ratio, target);
}

LockResult lock_caslock(const Netlist& n, std::size_t key_width, std::uint64_t seed,
                        std::size_t key_offset, const std::optional<std::string>& target) {
  return lock_two_block(n, key_width, seed, Technique::CasLock, key_offset, 0, target);
}

LockResult lock_sarlock(const Netlist& n, std::size_t key_width, std::uint64_t seed,
                        std::size_t key_offset, const std::optional<std::string>& target) {
  if (key_width < 2) throw PreconditionError("SARLOCK needs key width >= 2");
  Rng rng(seed);
  Graft g = begin_graft(n, key_width, key_width, key_offset, rng, target);
  std::vector<bool> secret = random_bits(rng, key_width);
  auto eq = pairwise(g.b, GateType::Xnor, g.taps, g.keys);
  std::vector<GateType> ands(key_width - 1, GateType::And);
  NetId cmp = tree(g.b, eq, ands, false);
  std::vector<NetId> lits;
  for (std::size_t i = 0; i < key_width; ++i)
    lits.push_back(secret[i] ? g.keys[i] : g.b.add_gate(g.b.fresh_name(), GateType::Not, {g.keys[i]}));
  NetId mask = tree(g.b, lits, ands, true);
  NetId flip = g.b.add_gate(g.b.fresh_name(), GateType::And, {cmp, mask});
  auto truth = psll_truth(g.keys, g.b, secret, Technique::SarLock, g.target_name, seed);
  return {finish_graft(g, n, flip), std::move(truth)};
}

LockResult lock_ttlock(const Netlist& n, std::size_t key_width, std::uint64_t seed,
                       std::size_t key_offset, const std::optional<std::string>& target) {
  if (key_width < 2) throw PreconditionError("TTLOCK needs key width >= 2");
  Rng rng(seed);
  Graft g = begin_graft(n, key_width, key_width, key_offset, rng, target);
  std::vector<bool> secret = random_bits(rng, key_width);
  std::vector<GateType> ands(key_width - 1, GateType::And);
  // Perturb: comparator against the protected pattern, already folded.
  std::vector<NetId> lits;
  for (std::size_t i = 0; i < key_width; ++i)
    lits.push_back(secret[i] ? g.taps[i] : g.b.add_gate(g.b.fresh_name(), GateType::Not, {g.taps[i]}));
  NetId perturb = tree(g.b, lits, ands, false);
  g.driver = g.b.add_gate(g.b.fresh_name(), GateType::Xor, {g.driver, perturb});
  auto eq = pairwise(g.b, GateType::Xnor, g.taps, g.keys);
  NetId restore = tree(g.b, eq, ands, false);
  auto truth = psll_truth(g.keys, g.b, secret, Technique::TtLock, g.target_name, seed);
  return {finish_graft(g, n, restore), std::move(truth)};
}

LockResult lock(const Netlist& n, const LockSpec& s, std::size_t key_offset) {
  switch (s.technique) {
    case Technique::Rll: return lock_rll(n, s.key_width, s.seed, key_offset);
    case Technique::AntiSat:
      return lock_antisat(n, s.key_width, s.seed, false, key_offset, s.dtl_ratio, s.target_output);
    case Technique::AntiSatDtl:
      return lock_antisat(n, s.key_width, s.seed, true, key_offset, s.dtl_ratio, s.target_output);
    case Technique::CasLock: return lock_caslock(n, s.key_width, s.seed, key_offset, s.target_output);
    case Technique::SarLock: return lock_sarlock(n, s.key_width, s.seed, key_offset, s.target_output);
    case Technique::TtLock: return lock_ttlock(n, s.key_width, s.seed, key_offset, s.target_output);
  }
  throw PreconditionError("unknown technique");
}

CompoundResult lock_compound(const Netlist& n, std::size_t rll_p, const LockSpec& pslt,
                             std::uint64_t seed) {
  if (pslt.technique == Technique::Rll)
    throw PreconditionError("compound locking needs a point-function technique");
  if (rll_p == 0) throw PreconditionError("compound locking needs a random-locking layer");
  auto rll = lock_rll(n, rll_p, Rng::derive(seed, 1), 0);
  LockSpec spec = pslt;
  spec.seed = Rng::derive(seed ^ pslt.seed, 2);
  auto ps = lock(rll.locked, spec, rll_p);
  GroundTruth t = ps.truth;
  for (auto& [k, v] : rll.truth.secret) t.secret[k] = v;
  for (auto& [k, v] : rll.truth.labels) t.labels[k] = v;
  t.has_rll = true;
  t.seed = seed;
  return {std::move(ps.locked), std::move(t), std::move(rll.locked)};
}

std::vector<bool> secret_vector(const Netlist& n, const GroundTruth& t) {
  std::vector<bool> k;
  for (NetId id : n.keys()) {
    auto it = t.secret.find(n.net(id).name);
    if (it == t.secret.end()) throw PreconditionError("secret lacks " + n.net(id).name);
    k.push_back(it->second);
  }
  return k;
}

}  // namespace lockwork
