#pragma once

#include <optional>
#include <set>

#include "clpct/semantics.hpp"

namespace clpct {

/// The negative constraint that keeps a constraint atom from unifying
/// with H: forall V (args != pats \/ ~guard), V the variables of H.
/// For a set of atoms, the conjunction over its elements (true if empty).
/// H elements must share C's predicate and be variable disjoint from C;
/// a predicate mismatch throws.
Constraint neg_constr(const ConstraintAtom& c, const ConstraintAtom& h,
                      const Signature& sig);
Constraint neg_constr(const ConstraintAtom& c,
                      const std::vector<ConstraintAtom>& hs,
                      const Signature& sig);

enum class StepKind { Backtrack, Next, Choice, Unfold };

const char* step_kind_text(StepKind k);

/// Label carried by every concolic step: the current trace plus the rule
/// sets matching the concrete and symbolic states.
struct StepLabel {
  Trace trace;
  std::set<std::string> r_q;
  std::set<std::string> r_s;
  StepKind kind = StepKind::Choice;
};

/// A concrete/symbolic pair executing in lockstep; concrete <= symbolic.
struct ConcolicPair {
  State concrete;
  State symbolic;
  Trace trace;
};

/// One nondeterministic concolic step with rule r (which must match the
/// concrete state): the concrete side steps by r, the symbolic side is
/// strengthened with gamma and then steps by r.
std::pair<ConcolicPair, StepLabel> concolic_step_nd(const ConcolicPair& cs,
                                                    const Program& p,
                                                    const Rule& r,
                                                    FreshVars& supply);

/// Rule sets for a pair, program order.
std::vector<size_t> matching_concrete(const ConcolicPair& cs,
                                      const Program& p);

struct ConcreteEntry {
  State state;
  std::optional<std::string> tag;  // rule chosen by choice, consumed by unfold
};

struct SymbolicEntry {
  State state;
  Trace trace;
  std::optional<std::string> tag;
};

/// Deterministic concolic state: positionally paired stacks.
struct DetConcolicState {
  std::vector<ConcreteEntry> concrete;
  std::vector<SymbolicEntry> symbolic;

  bool empty() const { return concrete.empty(); }

  static DetConcolicState initial(const State& q, const State& i);
};

enum class HaltReason { EmptyStacks, SolvedAllOut, FailedNoBacktrack };

struct DetStepResult {
  bool halted = false;
  HaltReason reason = HaltReason::EmptyStacks;
  DetConcolicState state;  // valid when !halted
  StepLabel label;         // valid when !halted
};

/// One step of the deterministic calculus. `first_solution` drops the
/// next rule, so a solved head halts the whole run.
DetStepResult det_step(const DetConcolicState& ds, const Program& p,
                       FreshVars& supply, bool first_solution = false);

}  // namespace clpct
