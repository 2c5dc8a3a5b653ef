#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lockwork/netlist.hpp"

namespace lockwork {

/// Evaluates POs by name. Throws PreconditionError if a PI or key is missing.
Assignment simulate(const Netlist& n, const Assignment& inputs, const Assignment& key);

/// Positional variant: values follow n.inputs() / n.keys(); returns POs in
/// n.outputs() order.
std::vector<bool> evaluate(const Netlist& n, const std::vector<bool>& inputs,
                           const std::vector<bool>& keys);

/// 64 patterns at a time. Returns one word per net.
std::vector<std::uint64_t> simulate_words(const Netlist& n, std::span<const std::uint64_t> inputs,
                                          std::span<const std::uint64_t> keys);

std::uint64_t eval_gate_words(GateType t, std::span<const std::uint64_t> in);

enum class Tri : std::uint8_t { Zero, One, X };

inline Tri tri(bool b) { return b ? Tri::One : Tri::Zero; }

/// Three-valued evaluation; returns one value per net.
std::vector<Tri> simulate_ternary(const Netlist& n, std::span<const Tri> inputs,
                                  std::span<const Tri> keys);

}  // namespace lockwork
