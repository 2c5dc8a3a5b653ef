#include "lockwork/simulate.hpp"

#include "lockwork/error.hpp"

namespace lockwork {

Assignment simulate(const Netlist& n, const Assignment& inputs, const Assignment& key) {
  auto lookup = [](const Assignment& a, const std::string& name, const char* what) {
    auto it = a.find(name);
    if (it == a.end()) throw PreconditionError(std::string("missing ") + what + " '" + name + "'");
    return it->second;
  };
  std::vector<std::uint64_t> in, k;
  for (NetId i : n.inputs()) in.push_back(lookup(inputs, n.net(i).name, "input"));
  for (NetId i : n.keys()) k.push_back(lookup(key, n.net(i).name, "key input"));
  auto v = simulate_words(n, in, k);
  std::vector<bool> out;
  for (NetId o : n.outputs()) out.push_back(v[o] & 1);
  Assignment result;
  for (std::size_t i = 0; i < out.size(); ++i) result[n.net(n.outputs()[i]).name] = out[i];
  return result;
}

std::vector<bool> evaluate(const Netlist& n, const std::vector<bool>& inputs,
                           const std::vector<bool>& keys) {
  if (inputs.size() != n.inputs().size() || keys.size() != n.keys().size())
    throw PreconditionError("evaluate: input or key vector has the wrong width");
  std::vector<std::uint64_t> iw(inputs.size()), kw(keys.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) iw[i] = inputs[i] ? 1 : 0;
  for (std::size_t i = 0; i < keys.size(); ++i) kw[i] = keys[i] ? 1 : 0;
  auto v = simulate_words(n, iw, kw);
  std::vector<bool> out;
  out.reserve(n.outputs().size());
  for (NetId o : n.outputs()) out.push_back(v[o] & 1);
  return out;
}

std::uint64_t eval_gate_words(GateType t, std::span<const std::uint64_t> in) {
  std::uint64_t v = in[0];
  switch (base_type(t)) {
    case GateType::And:
      for (std::size_t i = 1; i < in.size(); ++i) v &= in[i];
      break;
    case GateType::Or:
      for (std::size_t i = 1; i < in.size(); ++i) v |= in[i];
      break;
    case GateType::Xor:
      for (std::size_t i = 1; i < in.size(); ++i) v ^= in[i];
      break;
    default:
      break;
  }
  return is_inverting(t) ? ~v : v;
}

std::vector<std::uint64_t> simulate_words(const Netlist& n, std::span<const std::uint64_t> inputs,
                                          std::span<const std::uint64_t> keys) {
  if (inputs.size() != n.inputs().size() || keys.size() != n.keys().size())
    throw PreconditionError("simulate_words: input or key vector has the wrong width");
  std::vector<std::uint64_t> v(n.size(), 0);
  for (std::size_t i = 0; i < inputs.size(); ++i) v[n.inputs()[i]] = inputs[i];
  for (std::size_t i = 0; i < keys.size(); ++i) v[n.keys()[i]] = keys[i];
  std::vector<std::uint64_t> buf;
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    switch (net.kind) {
      case NetKind::Const0: v[i] = 0; break;
      case NetKind::Const1: v[i] = ~std::uint64_t{0}; break;
      case NetKind::Gate:
        buf.clear();
        for (NetId f : net.fanins) buf.push_back(v[f]);
        v[i] = eval_gate_words(net.type, buf);
        break;
      default: break;
    }
  }
  return v;
}

namespace {

Tri eval_tri(GateType t, std::span<const Tri> in) {
  Tri r;
  switch (base_type(t)) {
    case GateType::And: {
      bool unknown = false;
      r = Tri::One;
      for (Tri x : in) {
        if (x == Tri::Zero) { r = Tri::Zero; unknown = false; break; }
        if (x == Tri::X) unknown = true;
      }
      if (unknown) r = Tri::X;
      break;
    }
    case GateType::Or: {
      bool unknown = false;
      r = Tri::Zero;
      for (Tri x : in) {
        if (x == Tri::One) { r = Tri::One; unknown = false; break; }
        if (x == Tri::X) unknown = true;
      }
      if (unknown) r = Tri::X;
      break;
    }
    case GateType::Xor: {
      bool p = false;
      for (Tri x : in) {
        if (x == Tri::X) return Tri::X;
        p ^= x == Tri::One;
      }
      r = tri(p);
      break;
    }
    default:
      r = in[0];
  }
  if (is_inverting(t) && r != Tri::X) r = r == Tri::One ? Tri::Zero : Tri::One;
  return r;
}

}  // namespace

std::vector<Tri> simulate_ternary(const Netlist& n, std::span<const Tri> inputs,
                                  std::span<const Tri> keys) {
  if (inputs.size() != n.inputs().size() || keys.size() != n.keys().size())
    throw PreconditionError("simulate_ternary: input or key vector has the wrong width");
  std::vector<Tri> v(n.size(), Tri::X);
  for (std::size_t i = 0; i < inputs.size(); ++i) v[n.inputs()[i]] = inputs[i];
  for (std::size_t i = 0; i < keys.size(); ++i) v[n.keys()[i]] = keys[i];
  std::vector<Tri> buf;
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (net.kind == NetKind::Const0) v[i] = Tri::Zero;
    else if (net.kind == NetKind::Const1) v[i] = Tri::One;
    else if (net.is_gate()) {
      buf.clear();
      for (NetId f : net.fanins) buf.push_back(v[f]);
      v[i] = eval_tri(net.type, buf);
    }
  }
  return v;
}

}  // namespace lockwork
