#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "lockwork/analysis.hpp"
#include "lockwork/attacks.hpp"
#include "lockwork/qbf.hpp"

namespace lockwork {

enum class Flow { Og, Ol };
enum class Verification { LecPass, LecFail, NotApplicable };
const char* flow_name(Flow f);
const char* verification_name(Verification v);

/// Per-stage limits. Times are wall-clock milliseconds (0 = no limit) and
/// are ignored when `deterministic` is set, leaving only the counts.
struct FlowBudgets {
  std::int64_t qbf_ms = 0;
  std::int64_t dip_ms = 0;
  std::int64_t query_ms = 0;
  std::int64_t scope_ms = 0;
  std::size_t max_cegar = 10000;
  std::size_t max_dips = 5000;
  std::size_t max_queries = 2000;
  std::int64_t conflicts_per_call = 20000;
  bool deterministic = false;
  std::uint64_t seed = 1;
  sat::SolverFactory factory;

  sat::Budget stage(std::int64_t ms) const;
};

struct AttackReport {
  Flow flow = Flow::Og;
  Scheme scheme = Scheme::Unclassified;
  std::optional<Family> family;
  std::optional<PsltTechnique> technique;
  std::optional<std::string> critical_gate;
  std::optional<QbfStatus> qbf_status;
  PartialKey key;
  std::size_t dip_count = 0;
  std::size_t query_count = 0;
  std::size_t cegar_iterations = 0;
  std::map<std::string, double> stage_times_ms;
  Verification verification = Verification::NotApplicable;
  /// Attacker-side random-query check of a total key (OG only).
  std::optional<bool> oracle_check;
  /// Set when the flow stopped early: CG_NOT_FOUND, UNCLASSIFIED, ...
  std::optional<std::string> error;
  std::string diagnostic;
};

AttackReport run_og_flow(const Netlist& cll, const Oracle& oracle, const FlowBudgets& budgets = {});
AttackReport run_ol_flow(const Netlist& cll, const FlowBudgets& budgets = {});

/// Harness-side LEC of the recovered key. Only a total key can pass.
Verification verify_key(const Netlist& locked, const PartialKey& key, const Netlist& original,
                        const sat::Budget& budget = {}, const sat::SolverFactory& factory = {});

}  // namespace lockwork
