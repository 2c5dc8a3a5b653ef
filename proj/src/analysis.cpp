#include "lockwork/analysis.hpp"

#include <algorithm>
#include <set>

#include "lockwork/error.hpp"
#include "lockwork/transform.hpp"

namespace lockwork {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::RllOnly: return "RLL_ONLY";
    case Scheme::PsllOnly: return "PSLL_ONLY";
    case Scheme::Cll: return "CLL";
    case Scheme::Unclassified: return "UNCLASSIFIED";
  }
  return "?";
}

const char* family_name(Family f) { return f == Family::Sflt ? "SFLT" : "DFLT"; }

const char* pslt_technique_name(PsltTechnique t) {
  switch (t) {
    case PsltTechnique::AntiSat: return "ANTISAT";
    case PsltTechnique::CasLock: return "CASLOCK";
    case PsltTechnique::SarLock: return "SARLOCK";
    case PsltTechnique::Other: return "OTHER";
  }
  return "?";
}

ReachabilityMap key_reachability(const Netlist& n) {
  auto fo = n.fanouts();
  std::vector<bool> reaches_po(n.size());
  for (NetId i = static_cast<NetId>(n.size()); i-- > 0;) {
    bool r = n.is_output(i);
    for (NetId c : fo[i]) r = r || reaches_po[c];
    reaches_po[i] = r;
  }
  std::vector<int> po_pos(n.size(), -1);
  for (std::size_t i = 0; i < n.outputs().size(); ++i) po_pos[n.outputs()[i]] = static_cast<int>(i);

  ReachabilityMap r;
  std::vector<char> seen(n.size());
  for (NetId k : keys_by_index(n)) {
    const std::string& name = n.net(k).name;
    r.keys.push_back(name);
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<NetId> stack{k}, cone;
    std::vector<int> pos;
    seen[k] = 1;
    while (!stack.empty()) {
      NetId v = stack.back();
      stack.pop_back();
      if (po_pos[v] >= 0) pos.push_back(po_pos[v]);
      if (v != k && reaches_po[v]) cone.push_back(v);
      for (NetId c : fo[v])
        if (!seen[c]) {
          seen[c] = 1;
          stack.push_back(c);
        }
    }
    std::sort(pos.begin(), pos.end());
    std::sort(cone.begin(), cone.end());
    auto& outs = r.outputs[name];
    for (int p : pos) outs.push_back(n.net(n.outputs()[p]).name);
    r.cone[name] = std::move(cone);
  }
  return r;
}

namespace {

// A removable point-function unit: a fanout-free tree rooted at one fanin
// of an XOR/XNOR gate, reading only primary inputs and keys that nothing
// else reads.
struct Unit {
  NetId gate = 0;
  int side = 0;  // -1: the root is an output with no gate above it
  NetId root = 0;
  std::set<NetId> tree;
  std::vector<NetId> keys;         // ascending ids
  std::vector<NetId> comparators;  // XOR/XNOR(PI, key) gates
  std::size_t level = 0;
  bool tainted() const;
  std::size_t compared_keys = 0;
};

bool Unit::tainted() const { return compared_keys < keys.size(); }

std::vector<std::size_t> levels(const Netlist& n) {
  std::vector<std::size_t> lv(n.size(), 0);
  for (NetId i = 0; i < n.size(); ++i)
    for (NetId f : n.net(i).fanins) lv[i] = std::max(lv[i], lv[f] + 1);
  return lv;
}

bool is_comparator(const Netlist& n, const Net& g, NetId* key = nullptr) {
  if (!g.is_gate() || g.fanins.size() != 2) return false;
  if (g.type != GateType::Xor && g.type != GateType::Xnor) return false;
  const Net& a = n.net(g.fanins[0]);
  const Net& b = n.net(g.fanins[1]);
  if (a.kind == NetKind::Input && b.kind == NetKind::Key) {
    if (key) *key = g.fanins[1];
    return true;
  }
  if (b.kind == NetKind::Input && a.kind == NetKind::Key) {
    if (key) *key = g.fanins[0];
    return true;
  }
  return false;
}

std::vector<Unit> find_units(const Netlist& n) {
  auto fo = n.fanouts();
  auto lv = levels(n);
  auto single = [&](NetId v) { return fo[v].size() == 1 && !n.is_output(v); };
  std::vector<bool> treeish(n.size(), false);
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (!net.is_gate()) continue;
    bool ok = true;
    for (NetId f : net.fanins) {
      const Net& fn = n.net(f);
      if (fn.is_gate()) ok = ok && treeish[f] && single(f);
    }
    treeish[i] = ok;
  }

  std::vector<Unit> units;
  auto try_unit = [&](NetId g, int side, NetId u) {
    Unit unit;
    unit.gate = g;
    unit.side = side;
    unit.root = u;
    unit.level = lv[g];
    std::set<NetId> keys;
    std::vector<NetId> stack{u};
    while (!stack.empty()) {
      NetId v = stack.back();
      stack.pop_back();
      if (!unit.tree.insert(v).second) continue;
      for (NetId f : n.net(v).fanins) {
        if (n.net(f).is_gate()) stack.push_back(f);
        else if (n.net(f).kind == NetKind::Key) keys.insert(f);
      }
    }
    if (keys.size() < 2) return;
    bool exclusive = true;
    for (NetId k : keys)
      for (NetId c : fo[k]) exclusive = exclusive && unit.tree.count(c);
    if (!exclusive) return;
    std::set<NetId> compared;
    for (NetId v : unit.tree) {
      NetId k;
      if (is_comparator(n, n.net(v), &k)) {
        unit.comparators.push_back(v);
        compared.insert(k);
      }
    }
    unit.compared_keys = compared.size();
    if (unit.compared_keys < 2) return;
    // Primary inputs enter only through comparators; anything else means
    // the tree has swallowed functional logic.
    bool clean = true;
    for (NetId v : unit.tree) {
      if (is_comparator(n, n.net(v))) continue;
      for (NetId f : n.net(v).fanins) clean = clean && n.net(f).kind != NetKind::Input;
    }
    if (!clean) return;
    unit.keys.assign(keys.begin(), keys.end());
    units.push_back(std::move(unit));
  };
  for (NetId g = 0; g < n.size(); ++g) {
    const Net& gate = n.net(g);
    if (!gate.is_gate() || gate.fanins.size() != 2) continue;
    if (gate.type != GateType::Xor && gate.type != GateType::Xnor) continue;
    for (int side = 0; side < 2; ++side) {
      NetId u = gate.fanins[side];
      if (n.net(u).is_gate() && treeish[u] && single(u)) try_unit(g, side, u);
    }
  }
  // A unit on its own (e.g. a partition's unit part) drives an output.
  for (NetId o : n.outputs())
    if (n.net(o).is_gate() && treeish[o] && fo[o].empty()) try_unit(o, -1, o);
  return units;
}

PsltTechnique fingerprint(const Netlist& n, const Unit& u) {
  std::map<NetId, int> per_input;
  std::set<NetId> compared_keys;
  for (NetId c : u.comparators) {
    const Net& g = n.net(c);
    for (NetId f : g.fanins) {
      if (n.net(f).kind == NetKind::Input) ++per_input[f];
      else compared_keys.insert(f);
    }
  }
  bool all_two = !per_input.empty(), all_one = !per_input.empty();
  for (auto& [pi, count] : per_input) {
    all_two = all_two && count == 2;
    all_one = all_one && count == 1;
  }
  std::set<NetId> comparator_set(u.comparators.begin(), u.comparators.end());
  if (all_two) {
    // Two blocks: look for an alternating AND/OR cascade below the root.
    const Net& root = n.net(u.root);
    for (NetId block : root.fanins) {
      std::vector<GateType> chain;
      NetId v = block;
      while (n.net(v).is_gate() && n.net(v).fanins.size() == 2) {
        const Net& g = n.net(v);
        GateType t = base_type(g.type);
        if (t != GateType::And && t != GateType::Or) break;
        bool a = comparator_set.count(g.fanins[0]) > 0, b = comparator_set.count(g.fanins[1]) > 0;
        chain.push_back(t);
        if (a && b) break;
        if (a) v = g.fanins[1];
        else if (b) v = g.fanins[0];
        else {
          chain.clear();
          break;
        }
      }
      bool alternating = chain.size() >= 2;
      for (std::size_t i = 1; i < chain.size(); ++i) alternating = alternating && chain[i] != chain[i - 1];
      if (alternating) return PsltTechnique::CasLock;
    }
    return PsltTechnique::AntiSat;
  }
  if (all_one) {
    // A mask reads the keys outside the comparators.
    for (NetId v : u.tree) {
      if (comparator_set.count(v)) continue;
      for (NetId f : n.net(v).fanins)
        if (compared_keys.count(f)) return PsltTechnique::SarLock;
    }
  }
  return PsltTechnique::Other;
}

// Largest unit first, then closest to the outputs.
const Unit* best_unit(const std::vector<Unit>& units) {
  const Unit* best = nullptr;
  for (const Unit& u : units)
    if (!best || u.keys.size() > best->keys.size() ||
        (u.keys.size() == best->keys.size() && u.level > best->level))
      best = &u;
  return best;
}

}  // namespace

ClassificationResult classify_keys(const ReachabilityMap& r, const Netlist& n) {
  if (n.keys().empty()) throw PreconditionError("netlist has no key inputs");
  ClassificationResult c;
  for (const auto& k : r.keys) c.labels[k] = KeyLabel::Rll;

  auto units = find_units(n);
  const Unit* unit = best_unit(units);
  if (!unit) {
    c.scheme = Scheme::RllOnly;
    return c;
  }
  if (unit->tainted()) {
    c.scheme = Scheme::Unclassified;
    c.note = "candidate unit at " + n.net(unit->gate).name + " mixes comparator keys with " +
             std::to_string(unit->keys.size() - unit->compared_keys) + " other keys";
    return c;
  }
  // Grouping by reachable outputs: the unit's keys define the group's
  // output set, and every key sharing it joins the group.
  const auto& group_outputs = r.outputs.at(n.net(unit->keys.front()).name);
  std::size_t psll = 0;
  for (const auto& k : r.keys)
    if (r.outputs.at(k) == group_outputs) {
      c.labels[k] = KeyLabel::Psll;
      ++psll;
    }
  c.scheme = unit->keys.size() == r.keys.size() ? Scheme::PsllOnly : Scheme::Cll;
  if (c.scheme == Scheme::PsllOnly)
    for (auto& [k, l] : c.labels) l = KeyLabel::Psll;
  else if (psll != unit->keys.size())
    c.note = std::to_string(psll) + " keys share the unit's outputs; " +
             std::to_string(unit->keys.size()) + " converge in it";
  c.technique = fingerprint(n, *unit);
  return c;
}

CriticalGate find_critical_gate(const Netlist& n, const ClassificationResult& c) {
  if (c.scheme != Scheme::Cll && c.scheme != Scheme::PsllOnly)
    throw PreconditionError(std::string("critical gate search needs a point-function unit, scheme is ") +
                            scheme_name(c.scheme));
  if (!is_2input(n)) throw PreconditionError("critical gate search needs a 2-input netlist");

  std::set<std::string> group;
  for (const auto& [k, l] : c.labels)
    if (l == KeyLabel::Psll) group.insert(k);

  auto units = find_units(n);
  const Unit* best = nullptr;
  std::size_t best_cost = 0;
  for (const Unit& u : units) {
    if (u.tainted() || u.side < 0) continue;
    std::size_t inside = 0;
    for (NetId k : u.keys) inside += group.count(n.net(k).name);
    std::size_t cost = (u.keys.size() - inside) + (group.size() - inside);
    if (!best || cost < best_cost || (cost == best_cost && u.level > best->level)) {
      best = &u;
      best_cost = cost;
    }
  }
  if (!best) throw CgNotFound("no gate separates the point-function keys from the rest");

  CriticalGate cg;
  cg.gate = n.net(best->gate).name;
  cg.unit_fanin = best->side;
  cg.refined = c;
  std::set<std::string> unit_keys;
  for (NetId k : best->keys) unit_keys.insert(n.net(k).name);
  for (auto& [k, l] : cg.refined.labels) {
    KeyLabel want = unit_keys.count(k) ? KeyLabel::Psll : KeyLabel::Rll;
    if (want != l) cg.relabeled.push_back(k);
    l = want;
  }
  cg.refined.scheme = unit_keys.size() == cg.refined.labels.size() ? Scheme::PsllOnly : Scheme::Cll;
  cg.refined.technique = fingerprint(n, *best);
  if (!cg.relabeled.empty())
    cg.refined.note = std::to_string(cg.relabeled.size()) + " keys relabeled at the critical gate";
  return cg;
}

PartitionResult partition(const Netlist& n, const std::string& cg_name, const ClassificationResult& c) {
  NetId cg = n.id(cg_name);
  const Net& g = n.net(cg);
  if (!g.is_gate() || g.fanins.size() != 2)
    throw PreconditionError("critical gate " + cg_name + " must have two fanins");
  if (g.type != GateType::Xor && g.type != GateType::Xnor)
    throw PreconditionError("critical gate " + cg_name + " must be XOR or XNOR");
  auto is_psll = [&](NetId k) {
    auto it = c.labels.find(n.net(k).name);
    return it != c.labels.end() && it->second == KeyLabel::Psll;
  };

  // The unit side reads PSLL keys only.
  int unit_side = -1;
  for (int s = 0; s < 2; ++s) {
    auto cone = fanin_cone(n, {g.fanins[s]});
    bool psll = false, rll = false;
    for (NetId k : n.keys())
      if (cone[k]) (is_psll(k) ? psll : rll) = true;
    if (psll && !rll) {
      if (unit_side >= 0) throw PreconditionError("both fanins of " + cg_name + " look like units");
      unit_side = s;
    }
  }
  if (unit_side < 0) throw PreconditionError("no fanin of " + cg_name + " is a pure unit");
  NetId unit_root = g.fanins[unit_side];
  NetId func = g.fanins[1 - unit_side];

  PartitionResult p;
  p.critical_gate = cg_name;
  p.cg_function = g.type;

  // Functional side: everything the outputs still need once the CG only
  // forwards its functional fanin.
  std::vector<bool> need(n.size(), false);
  for (NetId o : n.outputs()) need[o] = true;
  for (NetId i = static_cast<NetId>(n.size()); i-- > 0;) {
    if (!need[i]) continue;
    if (i == cg) {
      need[func] = true;
      continue;
    }
    for (NetId f : n.net(i).fanins) need[f] = true;
  }
  NetlistBuilder b(n.name() + "_functional");
  std::vector<NetId> map(n.size());
  for (NetId i : n.inputs()) map[i] = b.add_input(n.net(i).name);
  for (NetId k : n.keys()) {
    if (!is_psll(k)) map[k] = b.add_key(n.net(k).name);
    else if (need[k]) throw PreconditionError("PSLL key " + n.net(k).name + " reaches the functional side");
  }
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (!need[i] || net.kind == NetKind::Input || net.kind == NetKind::Key) continue;
    if (net.is_const()) {
      map[i] = b.add_constant(net.name, net.kind == NetKind::Const1);
    } else if (i == cg) {
      map[i] = b.add_gate(net.name, GateType::Buf, {map[func]});
    } else {
      std::vector<NetId> f;
      for (NetId x : net.fanins) f.push_back(map[x]);
      map[i] = b.add_gate(net.name, net.type, std::move(f));
    }
  }
  for (NetId o : n.outputs()) b.add_output(map[o]);
  p.functional_part = std::move(b).build();

  p.unit_part = extract_cone(n, unit_root, n.name() + "_unit");
  for (NetId k : p.unit_part.keys())
    if (!is_psll(n.id(p.unit_part.net(k).name)))
      throw PreconditionError("RLL key " + p.unit_part.net(k).name + " reaches the unit");
  return p;
}

Netlist merge(const PartitionResult& p) {
  const Netlist& f = p.functional_part;
  const Netlist& u = p.unit_part;
  NetlistBuilder b(f.name());
  b.reserve_names_of(f);
  b.reserve_names_of(u);
  for (NetId i : f.inputs()) b.add_input(f.net(i).name);
  for (NetId k : f.keys()) b.add_key(f.net(k).name);
  for (NetId k : u.keys())
    if (!b.contains(u.net(k).name)) b.add_key(u.net(k).name);

  auto copy = [&](const Netlist& src, std::vector<NetId>& map, NetId i, const std::string& name) {
    const Net& net = src.net(i);
    if (net.is_const()) return b.add_constant(name, net.kind == NetKind::Const1);
    std::vector<NetId> fi;
    for (NetId x : net.fanins) fi.push_back(map[x]);
    return b.add_gate(name, net.type, std::move(fi));
  };

  std::vector<NetId> umap(u.size());
  for (NetId i = 0; i < u.size(); ++i) {
    const Net& net = u.net(i);
    if (auto id = b.find(net.name)) umap[i] = *id;
    else umap[i] = copy(u, umap, i, net.name);
  }
  NetId unit_root = umap[u.outputs()[0]];

  std::vector<NetId> fmap(f.size());
  for (NetId i = 0; i < f.size(); ++i) {
    const Net& net = f.net(i);
    if (net.name == p.critical_gate) {
      NetId side = copy(f, fmap, i, b.fresh_name());
      fmap[i] = b.add_gate(net.name, p.cg_function, {side, unit_root});
    } else if (auto id = b.find(net.name)) {
      fmap[i] = *id;
    } else {
      fmap[i] = copy(f, fmap, i, net.name);
    }
  }
  for (NetId o : f.outputs()) b.add_output(fmap[o]);
  return std::move(b).build();
}

Analysis analyze(const Netlist& n) {
  Analysis a{decompose_to_2input(n), {}, {}, {}, {}};
  a.reach = key_reachability(a.decomposed);
  a.classification = classify_keys(a.reach, a.decomposed);
  if (a.classification.scheme == Scheme::Cll || a.classification.scheme == Scheme::PsllOnly) {
    a.cg = find_critical_gate(a.decomposed, a.classification);
    a.classification = a.cg->refined;
    a.parts = partition(a.decomposed, a.cg->gate, a.classification);
  }
  return a;
}

}  // namespace lockwork
