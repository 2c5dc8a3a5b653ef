#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lockwork/netlist.hpp"
#include "lockwork/sat/solver.hpp"

namespace lockwork::sat {

/// Plain clause list with DIMACS numbering (variables are 1-based).
struct CnfFormula {
  int variable_count = 0;
  std::vector<std::vector<int>> clauses;
  std::map<std::string, int> net_map;

  Var new_var() { return variable_count++; }
  bool add_clause(std::span<const Lit> c);
  bool add_clause(std::initializer_list<Lit> c) {
    return add_clause(std::span<const Lit>(c.begin(), c.size()));
  }
};

/// One variable per net, gate-consistency clauses per gate. XOR/XNOR with
/// more than two fanins use auxiliary chain variables.
CnfFormula to_cnf(const Netlist& n);

std::string to_dimacs(const CnfFormula& f);
CnfFormula parse_dimacs(std::string_view text);

/// Copies the clauses into `dp`, creating variables as needed.
void load(const CnfFormula& f, DecisionProcedure& dp);

struct SatResult {
  Status status = Status::Timeout;
  /// Values of the mapped nets; present iff status is Sat.
  std::optional<Assignment> model;
  /// Values of every variable (index = var); empty unless Sat.
  std::vector<bool> values;
};

/// `assumptions` are DIMACS literals. Uses the embedded solver unless a
/// back end is given.
SatResult solve(const CnfFormula& f, std::span<const int> assumptions, const Budget& budget,
                DecisionProcedure* backend = nullptr);

/// Gate-consistency clauses relating `out` to `ins`.
template <class Sink>
void encode_gate_clauses(Sink& s, GateType t, Lit out, std::span<const Lit> ins) {
  GateType base = base_type(t);
  Lit o = is_inverting(t) ? ~out : out;
  switch (base) {
    case GateType::Buf:
      s.add_clause({~o, ins[0]});
      s.add_clause({o, ~ins[0]});
      return;
    case GateType::And: {
      std::vector<Lit> big{o};
      for (Lit i : ins) {
        s.add_clause({~o, i});
        big.push_back(~i);
      }
      s.add_clause(std::span<const Lit>(big));
      return;
    }
    case GateType::Or: {
      std::vector<Lit> big{~o};
      for (Lit i : ins) {
        s.add_clause({o, ~i});
        big.push_back(i);
      }
      s.add_clause(std::span<const Lit>(big));
      return;
    }
    case GateType::Xor: {
      Lit acc = ins[0];
      for (std::size_t k = 1; k < ins.size(); ++k) {
        Lit b = ins[k];
        Lit r = k + 1 == ins.size() ? o : Lit::make(s.new_var());
        s.add_clause({~r, acc, b});
        s.add_clause({~r, ~acc, ~b});
        s.add_clause({r, ~acc, b});
        s.add_clause({r, acc, ~b});
        acc = r;
      }
      return;
    }
    default:
      return;
  }
}

/// Value of a node while encoding: a constant or a solver literal.
class Term {
 public:
  Term() : v_(0) {}
  static Term constant(bool b) { return Term(b ? 1u : 0u); }
  static Term lit(Lit l) { return Term(l.x + 2); }

  bool is_const() const { return v_ < 2; }
  bool const_value() const { return v_ == 1; }
  Lit as_lit() const { return Lit{v_ - 2}; }
  Term operator~() const { return Term(is_const() ? v_ ^ 1u : ((v_ - 2) ^ 1u) + 2); }
  Term operator^(bool b) const { return b ? ~*this : *this; }
  bool operator==(const Term&) const = default;
  std::uint32_t raw() const { return v_; }

 private:
  explicit Term(std::uint32_t v) : v_(v) {}
  std::uint32_t v_;
};

/// Encodes circuits into a decision procedure over AND2/XOR2 nodes with
/// constant folding and (optionally) structural hashing, so identical
/// logic shares variables across every netlist encoded through it.
class CircuitEncoder {
 public:
  explicit CircuitEncoder(DecisionProcedure& dp, bool strash = true) : dp_(dp), strash_(strash) {}

  DecisionProcedure& solver() { return dp_; }
  Term fresh() { return Term::lit(Lit::make(dp_.new_var())); }

  Term and2(Term a, Term b);
  Term or2(Term a, Term b) { return ~and2(~a, ~b); }
  Term xor2(Term a, Term b);
  /// Balanced tree matching decompose_to_2input.
  Term and_n(std::span<const Term> xs);
  Term xor_n(std::span<const Term> xs);
  Term gate(GateType t, std::span<const Term> ins);

  /// Per-net terms of `n` with the given input and key terms (positional).
  std::vector<Term> encode(const Netlist& n, std::span<const Term> inputs,
                           std::span<const Term> keys);
  std::vector<Term> encode_outputs(const Netlist& n, std::span<const Term> inputs,
                                   std::span<const Term> keys);

  /// Forces `t` to `value`; returns false if that is already contradictory.
  bool require(Term t, bool value);
  /// A literal equal to `t`, creating a fixed variable for constants.
  Lit to_lit(Term t);

 private:
  Term and_range(std::span<const Term> xs);
  DecisionProcedure& dp_;
  bool strash_;
  std::unordered_map<std::uint64_t, Term> and_table_, xor_table_;
  std::optional<Lit> true_lit_;
};

}  // namespace lockwork::sat
