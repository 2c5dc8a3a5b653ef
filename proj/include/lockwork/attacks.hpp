#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lockwork/netlist.hpp"
#include "lockwork/oracle.hpp"
#include "lockwork/sat/backend.hpp"
#include "lockwork/sat/solver.hpp"

namespace lockwork {

/// PROVEN: the opposite value is UNSAT under the observations.
/// VERIFIED: part of a key that passed a functional check, not unique.
/// GUESSED: oracle-less heuristic.
enum class Provenance { Unknown, Proven, Verified, Guessed };
const char* provenance_name(Provenance p);

/// Key bits by key name, in key-index order; nullopt is X.
struct PartialKey {
  std::vector<std::string> names;
  std::vector<std::optional<bool>> bits;
  std::vector<Provenance> provenance;

  static PartialKey unknown(const Netlist& n);

  std::optional<std::size_t> index_of(const std::string& name) const;
  void set(const std::string& name, bool value, Provenance p);
  /// Copies every decided bit of `other` whose name exists here.
  void merge(const PartialKey& other);
  std::size_t decided() const;
  std::size_t proven() const;
  bool total() const { return decided() == names.size(); }
  /// Decided bits only.
  Assignment assignment() const;
  std::string to_string() const;  // '0', '1', 'x' per key index
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct DipOptions {
  sat::Budget budget;
  std::size_t max_dips = kUnlimited;
  /// Outputs left out of the miter and the oracle constraints.
  std::vector<std::string> ignore_outputs;
  sat::SolverFactory factory;
};

struct DipResult {
  bool complete = false;
  /// Key consistent with every observation (only when complete).
  std::optional<Assignment> key;
  std::size_t dip_count = 0;
  std::vector<Observation> observations;
};

/// Oracle-guided SAT attack with distinguishing input patterns.
DipResult dip_attack(const Netlist& locked, const Oracle& oracle, const DipOptions& opt = {});

struct QueryOptions {
  sat::Budget budget;
  std::size_t max_queries = kUnlimited;
  /// Discriminating queries per random query.
  std::size_t discriminating_per_random = 4;
  /// Conflict cap for each discriminating query and each bit proof.
  std::int64_t conflicts_per_call = 20000;
  std::uint64_t seed = 1;
  std::vector<std::string> ignore_outputs;
  sat::SolverFactory factory;
};

struct QueryResult {
  PartialKey key;
  std::size_t query_count = 0;
  std::vector<Observation> observations;
};

/// Accumulates oracle observations and proves key bits one at a time.
QueryResult query_attack(const Netlist& locked, const Oracle& oracle, const QueryOptions& opt = {},
                         const std::vector<Observation>& carryover = {});

/// Bits fixed by `observations`: for each bit, UNSAT of the opposite value.
PartialKey prove_bits(const Netlist& locked, const std::vector<std::string>& oracle_inputs,
                      const std::vector<std::string>& oracle_outputs,
                      const std::vector<Observation>& observations,
                      const std::vector<std::string>& ignore_outputs = {},
                      const sat::Budget& budget = {}, std::int64_t conflicts_per_call = 20000,
                      const sat::SolverFactory& factory = {});

struct ScopeOptions {
  /// Relative literal-count difference below which a bit stays X.
  double threshold = 0.02;
  sat::Budget budget;
};

/// Oracle-less guess per key bit from the size of the two constant
/// propagated variants. Every decided bit is GUESSED.
PartialKey scope_attack(const Netlist& locked, const ScopeOptions& opt = {});

/// Attacker-side check: `key` makes `locked` agree with the oracle on
/// `patterns` random queries (plus all-0 and all-1).
bool oracle_agrees(const Netlist& locked, const Assignment& key, const Oracle& oracle,
                   std::size_t patterns = 10000, std::uint64_t seed = 7);

}  // namespace lockwork
