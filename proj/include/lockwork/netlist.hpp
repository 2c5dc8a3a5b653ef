#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lockwork {

enum class GateType : std::uint8_t { And, Or, Nand, Nor, Xor, Xnor, Not, Buf };
enum class NetKind : std::uint8_t { Input, Key, Const0, Const1, Gate };

using NetId = std::uint32_t;

/// Bit values keyed by net name. Ordered so iteration is deterministic.
using Assignment = std::map<std::string, bool>;

const char* gate_name(GateType t);
std::optional<GateType> parse_gate_name(std::string_view s);
bool is_commutative(GateType t);
/// True for NAND/NOR/XNOR/NOT.
bool is_inverting(GateType t);
/// Positive counterpart: NAND->AND, NOR->OR, XNOR->XOR, NOT->BUF.
GateType base_type(GateType t);
bool eval_gate(GateType t, std::span<const bool> in);

/// `keyinput<digits>` names identify key inputs.
bool is_key_name(std::string_view name);
/// Numeric suffix of a key name; -1 if not a key name.
long key_index(std::string_view name);

struct Net {
  std::string name;
  NetKind kind = NetKind::Input;
  GateType type = GateType::Buf;  // only meaningful for gates
  std::vector<NetId> fanins;

  bool is_gate() const { return kind == NetKind::Gate; }
  bool is_const() const { return kind == NetKind::Const0 || kind == NetKind::Const1; }
};

struct Stats {
  std::size_t gate_count = 0;
  std::size_t literal_count = 0;
  std::size_t depth = 0;
};

/// Immutable combinational netlist. Nets are stored in topological order,
/// so every fanin id is smaller than the id of the net it feeds.
class Netlist {
 public:
  Netlist() = default;

  const std::string& name() const { return name_; }
  std::span<const Net> nets() const { return nets_; }
  const Net& net(NetId id) const { return nets_[id]; }
  std::size_t size() const { return nets_.size(); }

  std::span<const NetId> inputs() const { return inputs_; }
  std::span<const NetId> keys() const { return keys_; }
  std::span<const NetId> outputs() const { return outputs_; }

  std::optional<NetId> find(std::string_view name) const;
  /// Throws PreconditionError when the net does not exist.
  NetId id(std::string_view name) const;

  std::size_t gate_count() const;
  /// Position of a net in inputs()/keys(); -1 otherwise.
  int input_index(NetId id) const;
  int key_index_of(NetId id) const;
  bool is_output(NetId id) const;

  std::vector<std::vector<NetId>> fanouts() const;

  std::vector<std::string> input_names() const;
  std::vector<std::string> key_names() const;
  std::vector<std::string> output_names() const;

  Netlist renamed(std::string name) const;

 private:
  friend class NetlistBuilder;
  std::string name_;
  std::vector<Net> nets_;
  std::vector<NetId> inputs_, keys_, outputs_;
  std::unordered_map<std::string, NetId> by_name_;
};

/// Incremental constructor; nets must be added in topological order.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(std::string name = {});

  NetId add_input(std::string name);
  NetId add_key(std::string name);
  NetId add_constant(std::string name, bool value);
  NetId add_gate(std::string name, GateType type, std::vector<NetId> fanins);
  void add_output(NetId id);

  /// Fresh name in the reserved `_n<counter>` namespace.
  std::string fresh_name();
  /// Makes fresh_name() skip everything already used by `n`.
  void reserve_names_of(const Netlist& n);

  bool contains(std::string_view name) const;
  std::optional<NetId> find(std::string_view name) const;
  const Net& net(NetId id) const { return n_.nets_[id]; }
  std::size_t size() const { return n_.nets_.size(); }

  Netlist build() &&;

 private:
  NetId add(Net net);
  Netlist n_;
  std::uint64_t counter_ = 0;
};

Stats structural_stats(const Netlist& n);

/// Literal count where NOT/BUF cost nothing; a proxy for logic size that
/// ignores inverter placement.
std::size_t polarity_free_literals(const Netlist& n);

/// Same PIs, keys, POs, constants and gates (by name), ignoring net order.
bool structurally_equal(const Netlist& a, const Netlist& b);

/// Keys of `n` sorted by numeric index; the order used by key vectors.
std::vector<NetId> keys_by_index(const Netlist& n);

}  // namespace lockwork
