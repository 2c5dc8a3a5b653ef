#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lockwork/sat/solver.hpp"

namespace lockwork::sat {

/// Runs an external solver executable on a DIMACS file per solve() call.
/// The executable receives the file path as its last argument and must
/// print `s SATISFIABLE` / `s UNSATISFIABLE` and `v` model lines.
/// Assumptions are passed as unit clauses.
class ExternalSolver final : public DecisionProcedure {
 public:
  explicit ExternalSolver(std::string command);

  Var new_var() override { return vars_++; }
  int num_vars() const override { return vars_; }
  bool add_clause(std::span<const Lit> clause) override;
  using DecisionProcedure::add_clause;
  Status solve(std::span<const Lit> assumptions, const Budget& budget) override;
  using DecisionProcedure::solve;
  bool value(Var v) const override;
  using DecisionProcedure::value;

 private:
  std::string command_;
  int vars_ = 0;
  std::vector<std::vector<int>> clauses_;
  std::vector<bool> model_;
};

using SolverFactory = std::function<std::unique_ptr<DecisionProcedure>()>;

SolverFactory embedded_solver_factory();
SolverFactory external_solver_factory(std::string command);

/// Environment variable naming an external solver command.
inline constexpr const char* kSolverEnv = "LOCKWORK_SAT_SOLVER";
/// External solver when the environment variable is set, else embedded.
SolverFactory solver_factory_from_env();

}  // namespace lockwork::sat
