#pragma once

#include <cstddef>
#include <optional>

#include "lockwork/netlist.hpp"
#include "lockwork/sat/backend.hpp"
#include "lockwork/sat/solver.hpp"

namespace lockwork {

enum class QbfStatus { Solved, NoSolution, Timeout };
const char* qbf_status_name(QbfStatus s);

struct QbfOutcome {
  QbfStatus status = QbfStatus::Timeout;
  std::optional<bool> constant;
  std::optional<Assignment> key;
  std::size_t cegar_iterations = 0;
};

struct QbfOptions {
  sat::Budget budget;
  std::size_t max_iterations = 10000;
  /// Adds, next to each concrete counterexample, a copy whose inputs are
  /// tied to their comparator keys (x = k xor c). Sound, and it collapses
  /// point-function units to a handful of iterations.
  bool symbolic_samples = true;
  sat::SolverFactory factory;
};

/// Does some key make the single output of `unit` constant over all
/// inputs? Tries constant 0, then 1. A SOLVED key is verified by an UNSAT
/// check (and re-simulated).
QbfOutcome solve_constant_output_2qbf(const Netlist& unit, const QbfOptions& opt = {});

}  // namespace lockwork
