#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lockwork/netlist.hpp"

namespace lockwork {

enum class Technique { Rll, AntiSat, AntiSatDtl, CasLock, SarLock, TtLock };
const char* technique_name(Technique t);
std::optional<Technique> parse_technique(std::string_view s);

enum class KeyLabel { Rll, Psll };
const char* label_name(KeyLabel l);

struct LockSpec {
  Technique technique = Technique::Rll;
  std::size_t key_width = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> target_output;
  /// Share of tree gates rewritten by the DTL variant.
  double dtl_ratio = 0.25;
};

/// Harness-side record of how a netlist was locked.
struct GroundTruth {
  Assignment secret;
  std::map<std::string, KeyLabel> labels;
  bool has_rll = false;
  std::optional<Technique> psll;
  /// Name of the gate that merges the point-function unit into the design.
  std::optional<std::string> cg_hint;
  std::uint64_t seed = 0;
};

struct LockResult {
  Netlist locked;
  GroundTruth truth;
};

/// Key names start at keyinput<key_offset>.
LockResult lock_rll(const Netlist& n, std::size_t p, std::uint64_t seed, std::size_t key_offset = 0);
LockResult lock_antisat(const Netlist& n, std::size_t key_width, std::uint64_t seed, bool dtl,
                        std::size_t key_offset = 0, double dtl_ratio = 0.25,
                        const std::optional<std::string>& target = {});
LockResult lock_caslock(const Netlist& n, std::size_t key_width, std::uint64_t seed,
                        std::size_t key_offset = 0, const std::optional<std::string>& target = {});
LockResult lock_sarlock(const Netlist& n, std::size_t key_width, std::uint64_t seed,
                        std::size_t key_offset = 0, const std::optional<std::string>& target = {});
LockResult lock_ttlock(const Netlist& n, std::size_t key_width, std::uint64_t seed,
                       std::size_t key_offset = 0, const std::optional<std::string>& target = {});

LockResult lock(const Netlist& n, const LockSpec& spec, std::size_t key_offset = 0);

struct CompoundResult {
  Netlist locked;
  GroundTruth truth;
  /// The netlist after the random-locking layer only.
  Netlist rll_only;
};

/// Random locking with `rll_p` keys first, then the point-function layer.
CompoundResult lock_compound(const Netlist& n, std::size_t rll_p, const LockSpec& pslt,
                             std::uint64_t seed);

/// Secret bits in n.keys() order.
std::vector<bool> secret_vector(const Netlist& n, const GroundTruth& t);

}  // namespace lockwork
