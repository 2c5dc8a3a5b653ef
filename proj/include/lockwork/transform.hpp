#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "lockwork/netlist.hpp"

namespace lockwork {

/// Splits every gate with more than two fanins. AND/OR/NAND/NOR become
/// left-leaning balanced trees (the root keeps the gate's name and function),
/// XOR/XNOR become parity chains whose last gate carries the inversion.
Netlist decompose_to_2input(const Netlist& n);
bool is_2input(const Netlist& n);

struct RewriteOptions {
  /// Merge structurally identical gates.
  bool strash = false;
  /// Keep key inputs that no longer reach an output.
  bool keep_unused_keys = false;
};

/// Replaces the given key inputs by constants and simplifies: constant
/// folding, buffer and double-inverter removal, duplicate and complementary
/// fanins, optional structural hashing, dead-logic removal. Outputs keep
/// their names. Unfixed keys stay key inputs.
Netlist propagate_constants(const Netlist& n, const std::unordered_map<NetId, bool>& fixed_keys,
                            const RewriteOptions& opt = {});

/// All key inputs must be assigned; the result has no key inputs.
Netlist apply_key(const Netlist& n, const Assignment& key);

struct PruneOptions {
  bool keep_unused_inputs = true;
  bool keep_unused_keys = true;
};

/// Drops every gate and constant outside the fanin cones of the outputs.
Netlist prune_dead(const Netlist& n, const PruneOptions& opt = {});

/// Removes the named outputs (the nets stay if something else uses them).
Netlist drop_outputs(const Netlist& n, const std::vector<std::string>& names,
                     const PruneOptions& opt = {});

/// Fanin cone of `root` as a standalone netlist whose only output is `root`.
/// PIs and keys outside the cone are dropped.
Netlist extract_cone(const Netlist& n, NetId root, std::string name = {});

/// Marks the transitive fanin of the given roots (roots included).
std::vector<bool> fanin_cone(const Netlist& n, const std::vector<NetId>& roots);

}  // namespace lockwork
