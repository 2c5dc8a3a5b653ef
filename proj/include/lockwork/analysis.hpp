#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lockwork/lockers.hpp"
#include "lockwork/netlist.hpp"

namespace lockwork {

enum class Scheme { RllOnly, PsllOnly, Cll, Unclassified };
enum class Family { Sflt, Dflt };
enum class PsltTechnique { AntiSat, CasLock, SarLock, Other };

const char* scheme_name(Scheme s);
const char* family_name(Family f);
const char* pslt_technique_name(PsltTechnique t);

/// Structural key-to-output reachability.
struct ReachabilityMap {
  /// Key names in index order.
  std::vector<std::string> keys;
  /// Reachable output names per key, in n.outputs() order.
  std::map<std::string, std::vector<std::string>> outputs;
  /// Gates on some path from the key to an output, ascending ids.
  std::map<std::string, std::vector<NetId>> cone;
};

ReachabilityMap key_reachability(const Netlist& n);

struct ClassificationResult {
  Scheme scheme = Scheme::Unclassified;
  std::map<std::string, KeyLabel> labels;
  std::optional<Family> family;
  std::optional<PsltTechnique> technique;
  /// Human-readable reason for UNCLASSIFIED or for relabeled keys.
  std::string note;
};

/// Groups keys by reachable-output count and set, then checks that the
/// candidate group converges in a removable point-function unit.
ClassificationResult classify_keys(const ReachabilityMap& r, const Netlist& n);

struct CriticalGate {
  std::string gate;
  /// Fanin position (0 or 1) that carries the locking/restore unit.
  int unit_fanin = 1;
  ClassificationResult refined;
  /// Keys whose label changed during the search.
  std::vector<std::string> relabeled;
};

/// `n` must be 2-input. Throws CgNotFound when no gate passes the purity
/// test and PreconditionError for RLL_ONLY or UNCLASSIFIED input.
CriticalGate find_critical_gate(const Netlist& n, const ClassificationResult& c);

struct PartitionResult {
  std::string critical_gate;
  GateType cg_function = GateType::Xor;
  /// CG replaced by a buffer of its functional-side fanin; no PSLL keys.
  Netlist functional_part;
  /// Cone of the unit-side fanin, which is its only output.
  Netlist unit_part;
};

PartitionResult partition(const Netlist& n, const std::string& cg, const ClassificationResult& c);

/// Inverse of partition: recombines the parts through the CG function.
Netlist merge(const PartitionResult& p);

/// Classify + CG search on the 2-input form. Convenience for flows and CLI.
struct Analysis {
  Netlist decomposed;
  ReachabilityMap reach;
  ClassificationResult classification;
  std::optional<CriticalGate> cg;
  std::optional<PartitionResult> parts;
};
Analysis analyze(const Netlist& n);

}  // namespace lockwork
