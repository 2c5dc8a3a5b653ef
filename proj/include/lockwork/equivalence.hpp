#pragma once

#include <optional>
#include <string>

#include "lockwork/netlist.hpp"
#include "lockwork/sat/backend.hpp"
#include "lockwork/sat/solver.hpp"

namespace lockwork {

enum class Verdict { Equivalent, Different, Timeout };
const char* verdict_name(Verdict v);

struct EquivalenceResult {
  Verdict verdict = Verdict::Timeout;
  /// Input pattern (and shared key values) on which the outputs differ.
  std::optional<Assignment> counterexample;
  std::string differing_output;
};

/// Miter check. Both netlists must have the same input names and output
/// names. Key inputs present in both under the same name are treated as
/// shared free inputs; any other key input is a precondition error.
/// A Different verdict is confirmed by simulation before returning.
EquivalenceResult check_equivalence(const Netlist& a, const Netlist& b,
                                    const sat::Budget& budget = {},
                                    const sat::SolverFactory& factory = {});

}  // namespace lockwork
