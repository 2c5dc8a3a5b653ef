#include "lockwork/transform.hpp"

#include <algorithm>
#include <map>

#include "lockwork/error.hpp"

namespace lockwork {

bool is_2input(const Netlist& n) {
  return std::all_of(n.nets().begin(), n.nets().end(),
                     [](const Net& x) { return !x.is_gate() || x.fanins.size() <= 2; });
}

namespace {

// Copies the interface (inputs, keys, constants) of `n` into `b`.
NetId copy_source(NetlistBuilder& b, const Net& net) {
  switch (net.kind) {
    case NetKind::Input: return b.add_input(net.name);
    case NetKind::Key: return b.add_key(net.name);
    case NetKind::Const0: return b.add_constant(net.name, false);
    case NetKind::Const1: return b.add_constant(net.name, true);
    default: break;
  }
  throw Error("copy_source called on a gate");
}

NetId build_tree(NetlistBuilder& b, const std::vector<NetId>& f, std::size_t lo, std::size_t hi,
                 GateType inner) {
  if (hi - lo == 1) return f[lo];
  std::size_t mid = lo + (hi - lo + 1) / 2;
  NetId l = build_tree(b, f, lo, mid, inner);
  NetId r = build_tree(b, f, mid, hi, inner);
  return b.add_gate(b.fresh_name(), inner, {l, r});
}

}  // namespace

Netlist decompose_to_2input(const Netlist& n) {
  if (is_2input(n)) return n;
  NetlistBuilder b(n.name());
  b.reserve_names_of(n);
  std::vector<NetId> map(n.size());
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (!net.is_gate()) {
      map[i] = copy_source(b, net);
      continue;
    }
    std::vector<NetId> f;
    for (NetId x : net.fanins) f.push_back(map[x]);
    if (f.size() <= 2) {
      map[i] = b.add_gate(net.name, net.type, f);
      continue;
    }
    GateType base = base_type(net.type);
    if (base == GateType::Xor) {
      NetId acc = b.add_gate(b.fresh_name(), GateType::Xor, {f[0], f[1]});
      for (std::size_t k = 2; k + 1 < f.size(); ++k)
        acc = b.add_gate(b.fresh_name(), GateType::Xor, {acc, f[k]});
      map[i] = b.add_gate(net.name, net.type, {acc, f.back()});
    } else {
      std::size_t mid = (f.size() + 1) / 2;
      NetId l = build_tree(b, f, 0, mid, base);
      NetId r = build_tree(b, f, mid, f.size(), base);
      map[i] = b.add_gate(net.name, net.type, {l, r});
    }
  }
  for (NetId o : n.outputs()) b.add_output(map[o]);
  return std::move(b).build();
}

namespace {

// Signal in the rewritten netlist: 0/1 are constants, otherwise
// 2*(id+1) + complement.
using Sig = std::uint32_t;
constexpr Sig kFalse = 0, kTrue = 1;
inline bool sig_const(Sig s) { return s < 2; }
inline Sig sig_of(NetId id, bool inv) { return 2 * (id + 1) + (inv ? 1 : 0); }
inline NetId sig_id(Sig s) { return s / 2 - 1; }
inline bool sig_inv(Sig s) { return s & 1; }

class Rewriter {
 public:
  Rewriter(const Netlist& src, const RewriteOptions& opt) : src_(src), opt_(opt), b_(src.name()) {
    b_.reserve_names_of(src);
  }

  Netlist run(const std::unordered_map<NetId, bool>& fixed) {
    std::vector<Sig> sig(src_.size());
    for (NetId i = 0; i < src_.size(); ++i) {
      const Net& net = src_.net(i);
      switch (net.kind) {
        case NetKind::Input: sig[i] = sig_of(b_.add_input(net.name), false); break;
        case NetKind::Key: {
          auto it = fixed.find(i);
          sig[i] = it == fixed.end() ? sig_of(b_.add_key(net.name), false)
                                     : (it->second ? kTrue : kFalse);
          break;
        }
        case NetKind::Const0: sig[i] = kFalse; break;
        case NetKind::Const1: sig[i] = kTrue; break;
        case NetKind::Gate: {
          std::vector<Sig> in;
          for (NetId f : net.fanins) in.push_back(sig[f]);
          sig[i] = gate(net, in);
          break;
        }
      }
      if (src_.is_output(i)) outputs_.push_back(materialize_output(net.name, sig[i]));
    }
    for (NetId o : outputs_) b_.add_output(o);
    Netlist raw = std::move(b_).build();
    return prune_dead(raw, {true, opt_.keep_unused_keys});
  }

 private:
  NetId add_node(const std::string& preferred, GateType t, std::vector<NetId> fanins) {
    std::vector<NetId> key = fanins;
    if (is_commutative(t)) std::sort(key.begin(), key.end());
    auto hkey = std::make_pair(t, key);
    if (opt_.strash) {
      auto it = strash_.find(hkey);
      if (it != strash_.end()) return it->second;
    }
    std::string name = !preferred.empty() && !b_.contains(preferred) ? preferred : b_.fresh_name();
    NetId id = b_.add_gate(std::move(name), t, std::move(fanins));
    if (opt_.strash) strash_.emplace(std::move(hkey), id);
    return id;
  }

  NetId materialize(Sig s) {
    if (!sig_inv(s)) return sig_id(s);
    NetId base = sig_id(s);
    auto it = inverters_.find(base);
    if (it != inverters_.end()) return it->second;
    NetId id = add_node({}, GateType::Not, {base});
    inverters_.emplace(base, id);
    return id;
  }

  NetId materialize_output(const std::string& name, Sig s) {
    if (sig_const(s)) {
      if (auto f = b_.find(name); f && b_.net(*f).is_const()) return *f;
      return b_.add_constant(b_.contains(name) ? b_.fresh_name() : name, s == kTrue);
    }
    NetId id = sig_id(s);
    if (!sig_inv(s) && b_.net(id).name == name) return id;
    if (b_.contains(name)) return materialize(s);
    if (sig_inv(s)) {
      auto it = inverters_.find(id);
      if (it != inverters_.end()) return b_.add_gate(name, GateType::Buf, {it->second});
      NetId inv = b_.add_gate(name, GateType::Not, {id});
      inverters_.emplace(id, inv);
      return inv;
    }
    return b_.add_gate(name, GateType::Buf, {id});
  }

  Sig gate(const Net& net, std::vector<Sig>& in) {
    GateType base = base_type(net.type);
    bool out_inv = is_inverting(net.type);
    if (base == GateType::Buf) return in[0] ^ (out_inv ? 1u : 0u);

    if (base == GateType::Xor) {
      bool parity = out_inv;
      std::map<NetId, int> count;
      for (Sig s : in) {
        if (sig_const(s)) {
          parity ^= s == kTrue;
          continue;
        }
        parity ^= sig_inv(s);
        count[sig_id(s)] ^= 1;
      }
      std::vector<NetId> ids;
      for (auto& [id, c] : count)
        if (c) ids.push_back(id);
      if (ids.empty()) return parity ? kTrue : kFalse;
      if (ids.size() == 1) return sig_of(ids[0], parity);
      // Keep the original fanin order among survivors.
      std::vector<NetId> ordered;
      for (Sig s : in)
        if (!sig_const(s)) {
          NetId id = sig_id(s);
          if (count[id] && std::find(ordered.begin(), ordered.end(), id) == ordered.end())
            ordered.push_back(id);
        }
      return sig_of(add_node(net.name, parity ? GateType::Xnor : GateType::Xor, ordered), false);
    }

    // AND / OR families: `ctrl` is the controlling input value.
    Sig ctrl = base == GateType::And ? kFalse : kTrue;
    std::vector<Sig> keep;
    for (Sig s : in) {
      if (s == ctrl) return ctrl ^ (out_inv ? 1u : 0u);
      if (sig_const(s)) continue;
      if (std::find(keep.begin(), keep.end(), s ^ 1u) != keep.end())
        return ctrl ^ (out_inv ? 1u : 0u);
      if (std::find(keep.begin(), keep.end(), s) == keep.end()) keep.push_back(s);
    }
    if (keep.empty()) return (ctrl ^ 1u) ^ (out_inv ? 1u : 0u);
    if (keep.size() == 1) return keep[0] ^ (out_inv ? 1u : 0u);
    std::vector<NetId> fanins;
    for (Sig s : keep) fanins.push_back(materialize(s));
    return sig_of(add_node(net.name, net.type, fanins), false);
  }

  const Netlist& src_;
  RewriteOptions opt_;
  NetlistBuilder b_;
  std::map<std::pair<GateType, std::vector<NetId>>, NetId> strash_;
  std::unordered_map<NetId, NetId> inverters_;
  std::vector<NetId> outputs_;
};

}  // namespace

Netlist propagate_constants(const Netlist& n, const std::unordered_map<NetId, bool>& fixed_keys,
                            const RewriteOptions& opt) {
  for (auto& [id, v] : fixed_keys)
    if (id >= n.size() || n.net(id).kind != NetKind::Key)
      throw PreconditionError("propagate_constants: only key inputs can be fixed");
  return Rewriter(n, opt).run(fixed_keys);
}

Netlist apply_key(const Netlist& n, const Assignment& key) {
  if (n.keys().empty()) return n;
  std::unordered_map<NetId, bool> fixed;
  for (NetId k : n.keys()) {
    auto it = key.find(n.net(k).name);
    if (it == key.end()) throw PreconditionError("partial key: '" + n.net(k).name + "' unassigned");
    fixed.emplace(k, it->second);
  }
  return propagate_constants(n, fixed);
}

std::vector<bool> fanin_cone(const Netlist& n, const std::vector<NetId>& roots) {
  std::vector<bool> mark(n.size(), false);
  for (NetId r : roots) mark[r] = true;
  for (NetId i = static_cast<NetId>(n.size()); i-- > 0;)
    if (mark[i])
      for (NetId f : n.net(i).fanins) mark[f] = true;
  return mark;
}

namespace {

Netlist rebuild(const Netlist& n, const std::vector<bool>& keep, const std::vector<NetId>& outputs,
                std::string name) {
  NetlistBuilder b(std::move(name));
  std::vector<NetId> map(n.size(), 0);
  for (NetId i = 0; i < n.size(); ++i) {
    if (!keep[i]) continue;
    const Net& net = n.net(i);
    if (!net.is_gate()) {
      map[i] = copy_source(b, net);
      continue;
    }
    std::vector<NetId> f;
    for (NetId x : net.fanins) f.push_back(map[x]);
    map[i] = b.add_gate(net.name, net.type, std::move(f));
  }
  for (NetId o : outputs) b.add_output(map[o]);
  return std::move(b).build();
}

}  // namespace

Netlist prune_dead(const Netlist& n, const PruneOptions& opt) {
  std::vector<NetId> outs(n.outputs().begin(), n.outputs().end());
  auto keep = fanin_cone(n, outs);
  for (NetId i : n.inputs()) keep[i] = keep[i] || opt.keep_unused_inputs;
  for (NetId k : n.keys()) keep[k] = keep[k] || opt.keep_unused_keys;
  return rebuild(n, keep, outs, n.name());
}

Netlist drop_outputs(const Netlist& n, const std::vector<std::string>& names,
                     const PruneOptions& opt) {
  std::vector<NetId> outs;
  for (NetId o : n.outputs())
    if (std::find(names.begin(), names.end(), n.net(o).name) == names.end()) outs.push_back(o);
  auto keep = fanin_cone(n, outs);
  for (NetId i : n.inputs()) keep[i] = keep[i] || opt.keep_unused_inputs;
  for (NetId k : n.keys()) keep[k] = keep[k] || opt.keep_unused_keys;
  return rebuild(n, keep, outs, n.name());
}

Netlist extract_cone(const Netlist& n, NetId root, std::string name) {
  auto keep = fanin_cone(n, {root});
  return rebuild(n, keep, {root}, name.empty() ? n.name() : std::move(name));
}

}  // namespace lockwork
