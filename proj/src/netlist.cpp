#include "lockwork/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "lockwork/error.hpp"

namespace lockwork {

const char* gate_name(GateType t) {
  switch (t) {
    case GateType::And: return "AND";
    case GateType::Or: return "OR";
    case GateType::Nand: return "NAND";
    case GateType::Nor: return "NOR";
    case GateType::Xor: return "XOR";
    case GateType::Xnor: return "XNOR";
    case GateType::Not: return "NOT";
    case GateType::Buf: return "BUF";
  }
  return "?";
}

std::optional<GateType> parse_gate_name(std::string_view s) {
  std::string u(s);
  for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "AND") return GateType::And;
  if (u == "OR") return GateType::Or;
  if (u == "NAND") return GateType::Nand;
  if (u == "NOR") return GateType::Nor;
  if (u == "XOR") return GateType::Xor;
  if (u == "XNOR") return GateType::Xnor;
  if (u == "NOT" || u == "INV") return GateType::Not;
  if (u == "BUF" || u == "BUFF") return GateType::Buf;
  return std::nullopt;
}

bool is_commutative(GateType t) { return t != GateType::Not && t != GateType::Buf; }

bool is_inverting(GateType t) {
  return t == GateType::Nand || t == GateType::Nor || t == GateType::Xnor || t == GateType::Not;
}

GateType base_type(GateType t) {
  switch (t) {
    case GateType::Nand: return GateType::And;
    case GateType::Nor: return GateType::Or;
    case GateType::Xnor: return GateType::Xor;
    case GateType::Not: return GateType::Buf;
    default: return t;
  }
}

bool eval_gate(GateType t, std::span<const bool> in) {
  bool v = false;
  switch (base_type(t)) {
    case GateType::And:
      v = std::all_of(in.begin(), in.end(), [](bool b) { return b; });
      break;
    case GateType::Or:
      v = std::any_of(in.begin(), in.end(), [](bool b) { return b; });
      break;
    case GateType::Xor:
      for (bool b : in) v ^= b;
      break;
    default:
      v = in[0];
  }
  return is_inverting(t) ? !v : v;
}

bool is_key_name(std::string_view name) { return key_index(name) >= 0; }

long key_index(std::string_view name) {
  constexpr std::string_view prefix = "keyinput";
  if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix) return -1;
  auto digits = name.substr(prefix.size());
  long v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || p != digits.data() + digits.size()) return -1;
  return v;
}

std::optional<NetId> Netlist::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NetId Netlist::id(std::string_view name) const {
  auto f = find(name);
  if (!f) throw PreconditionError("unknown net '" + std::string(name) + "'");
  return *f;
}

std::size_t Netlist::gate_count() const {
  return static_cast<std::size_t>(
      std::count_if(nets_.begin(), nets_.end(), [](const Net& n) { return n.is_gate(); }));
}

int Netlist::input_index(NetId id) const {
  auto it = std::find(inputs_.begin(), inputs_.end(), id);
  return it == inputs_.end() ? -1 : static_cast<int>(it - inputs_.begin());
}

int Netlist::key_index_of(NetId id) const {
  auto it = std::find(keys_.begin(), keys_.end(), id);
  return it == keys_.end() ? -1 : static_cast<int>(it - keys_.begin());
}

bool Netlist::is_output(NetId id) const {
  return std::find(outputs_.begin(), outputs_.end(), id) != outputs_.end();
}

std::vector<std::vector<NetId>> Netlist::fanouts() const {
  std::vector<std::vector<NetId>> out(nets_.size());
  for (NetId i = 0; i < nets_.size(); ++i)
    for (NetId f : nets_[i].fanins) out[f].push_back(i);
  return out;
}

static std::vector<std::string> names_of(const Netlist& n, std::span<const NetId> ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (NetId i : ids) out.push_back(n.net(i).name);
  return out;
}

std::vector<std::string> Netlist::input_names() const { return names_of(*this, inputs_); }
std::vector<std::string> Netlist::key_names() const { return names_of(*this, keys_); }
std::vector<std::string> Netlist::output_names() const { return names_of(*this, outputs_); }

Netlist Netlist::renamed(std::string name) const {
  Netlist copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

NetlistBuilder::NetlistBuilder(std::string name) { n_.name_ = std::move(name); }

NetId NetlistBuilder::add(Net net) {
  if (net.name.empty()) throw ParseError(0, "empty net name");
  if (n_.by_name_.count(net.name)) throw ParseError(0, "duplicate net definition '" + net.name + "'");
  NetId id = static_cast<NetId>(n_.nets_.size());
  n_.by_name_.emplace(net.name, id);
  n_.nets_.push_back(std::move(net));
  return id;
}

NetId NetlistBuilder::add_input(std::string name) {
  if (is_key_name(name)) return add_key(std::move(name));
  NetId id = add(Net{std::move(name), NetKind::Input, GateType::Buf, {}});
  n_.inputs_.push_back(id);
  return id;
}

NetId NetlistBuilder::add_key(std::string name) {
  if (!is_key_name(name)) throw ParseError(0, "'" + name + "' is not a key input name");
  NetId id = add(Net{std::move(name), NetKind::Key, GateType::Buf, {}});
  n_.keys_.push_back(id);
  return id;
}

NetId NetlistBuilder::add_constant(std::string name, bool value) {
  return add(Net{std::move(name), value ? NetKind::Const1 : NetKind::Const0, GateType::Buf, {}});
}

NetId NetlistBuilder::add_gate(std::string name, GateType type, std::vector<NetId> fanins) {
  bool unary = type == GateType::Not || type == GateType::Buf;
  if (unary ? fanins.size() != 1 : fanins.size() < 2)
    throw ParseError(0, std::string("bad arity for ") + gate_name(type) + " '" + name + "'");
  for (NetId f : fanins)
    if (f >= n_.nets_.size()) throw ParseError(0, "fanin of '" + name + "' is not defined earlier");
  return add(Net{std::move(name), NetKind::Gate, type, std::move(fanins)});
}

void NetlistBuilder::add_output(NetId id) {
  if (id >= n_.nets_.size()) throw ParseError(0, "output refers to unknown net");
  if (n_.is_output(id)) throw ParseError(0, "duplicate output '" + n_.nets_[id].name + "'");
  n_.outputs_.push_back(id);
}

std::string NetlistBuilder::fresh_name() {
  for (;;) {
    std::string s = "_n" + std::to_string(counter_++);
    if (!n_.by_name_.count(s)) return s;
  }
}

void NetlistBuilder::reserve_names_of(const Netlist& n) {
  for (const Net& net : n.nets()) {
    std::string_view s = net.name;
    if (s.size() < 3 || s.substr(0, 2) != "_n") continue;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) counter_ = std::max(counter_, v + 1);
  }
}

bool NetlistBuilder::contains(std::string_view name) const {
  return n_.by_name_.count(std::string(name)) != 0;
}

std::optional<NetId> NetlistBuilder::find(std::string_view name) const { return n_.find(name); }

Netlist NetlistBuilder::build() && { return std::move(n_); }

Stats structural_stats(const Netlist& n) {
  Stats s;
  std::vector<std::size_t> level(n.size(), 0);
  for (NetId i = 0; i < n.size(); ++i) {
    const Net& net = n.net(i);
    if (!net.is_gate()) continue;
    ++s.gate_count;
    s.literal_count += net.fanins.size();
    std::size_t l = 0;
    for (NetId f : net.fanins) l = std::max(l, level[f]);
    level[i] = l + 1;
  }
  for (NetId o : n.outputs()) s.depth = std::max(s.depth, level[o]);
  return s;
}

std::size_t polarity_free_literals(const Netlist& n) {
  std::size_t lits = 0;
  for (const Net& net : n.nets())
    if (net.is_gate() && base_type(net.type) != GateType::Buf) lits += net.fanins.size();
  return lits;
}

bool structurally_equal(const Netlist& a, const Netlist& b) {
  if (a.size() != b.size()) return false;
  if (a.input_names() != b.input_names() || a.key_names() != b.key_names() ||
      a.output_names() != b.output_names())
    return false;
  for (const Net& na : a.nets()) {
    auto idb = b.find(na.name);
    if (!idb) return false;
    const Net& nb = b.net(*idb);
    if (na.kind != nb.kind) return false;
    if (!na.is_gate()) continue;
    if (na.type != nb.type || na.fanins.size() != nb.fanins.size()) return false;
    for (std::size_t i = 0; i < na.fanins.size(); ++i)
      if (a.net(na.fanins[i]).name != b.net(nb.fanins[i]).name) return false;
  }
  return true;
}

std::vector<NetId> keys_by_index(const Netlist& n) {
  std::vector<NetId> ks(n.keys().begin(), n.keys().end());
  std::stable_sort(ks.begin(), ks.end(), [&](NetId x, NetId y) {
    return key_index(n.net(x).name) < key_index(n.net(y).name);
  });
  return ks;
}

}  // namespace lockwork
