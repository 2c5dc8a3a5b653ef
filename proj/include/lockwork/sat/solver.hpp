#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace lockwork::sat {

using Var = int;

/// Literal as 2*var + sign (sign = negated).
struct Lit {
  std::uint32_t x = 0;

  static Lit make(Var v, bool negated = false) {
    return Lit{static_cast<std::uint32_t>(2 * v + (negated ? 1 : 0))};
  }
  Var var() const { return static_cast<Var>(x >> 1); }
  bool sign() const { return x & 1; }
  Lit operator~() const { return Lit{x ^ 1u}; }
  Lit operator^(bool b) const { return Lit{x ^ (b ? 1u : 0u)}; }
  bool operator==(const Lit&) const = default;
  auto operator<=>(const Lit&) const = default;

  /// DIMACS integer (1-based, negative when negated).
  int to_dimacs() const { return sign() ? -(var() + 1) : var() + 1; }
  static Lit from_dimacs(int d) { return make(d > 0 ? d - 1 : -d - 1, d < 0); }
};

enum class Status { Sat, Unsat, Timeout };
const char* status_name(Status s);

struct Budget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Conflicts allowed for this call; negative means unlimited.
  std::int64_t conflicts = -1;

  static Budget unlimited() { return {}; }
  static Budget for_duration(std::chrono::milliseconds d) {
    return Budget{std::chrono::steady_clock::now() + d, -1};
  }
  bool expired() const {
    return deadline && std::chrono::steady_clock::now() >= *deadline;
  }
};

/// The decision-procedure interface every attack talks to.
class DecisionProcedure {
 public:
  virtual ~DecisionProcedure() = default;
  virtual Var new_var() = 0;
  virtual int num_vars() const = 0;
  /// Returns false once the clause set is known to be unsatisfiable.
  virtual bool add_clause(std::span<const Lit> clause) = 0;
  virtual Status solve(std::span<const Lit> assumptions, const Budget& budget) = 0;
  /// Model value after a Sat answer.
  virtual bool value(Var v) const = 0;

  bool add_clause(std::initializer_list<Lit> c) {
    return add_clause(std::span<const Lit>(c.begin(), c.size()));
  }
  Status solve(const Budget& budget = {}) { return solve({}, budget); }
  bool value(Lit l) const { return value(l.var()) != l.sign(); }
};

struct SolverStats {
  std::uint64_t conflicts = 0, decisions = 0, propagations = 0, restarts = 0;
};

/// Embedded CDCL solver: two watched literals, VSIDS, phase saving, Luby
/// restarts, 1UIP learning with minimization, learnt-clause reduction.
class Solver final : public DecisionProcedure {
 public:
  Solver();
  ~Solver() override;
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  Var new_var() override;
  int num_vars() const override;
  bool add_clause(std::span<const Lit> clause) override;
  using DecisionProcedure::add_clause;
  Status solve(std::span<const Lit> assumptions, const Budget& budget) override;
  using DecisionProcedure::solve;
  bool value(Var v) const override;
  using DecisionProcedure::value;

  /// Seeds the random decision stream; 0 disables random decisions.
  void set_random_seed(std::uint64_t seed, double freq = 0.01);
  const SolverStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lockwork::sat
