#pragma once

#include "clpct/concolic.hpp"
#include "clpct/solver.hpp"

namespace clpct {

/// Inputs of the alternative-test-case generator: the initial symbolic
/// atom I, the current symbolic atom C, and the head atoms matched by
/// the concrete (H_Q) and symbolic (H_S) states, with H_Q a subset of
/// H_S. All H atoms share C's predicate and are pairwise variable
/// disjoint from each other and from C.
struct AltsRequest {
  ConstraintAtom initial;
  ConstraintAtom current;
  std::vector<ConstraintAtom> matched_concrete;
  std::vector<ConstraintAtom> matched_symbolic;
};

/// One alternative test case I /\ c /\ gamma per admissible subset H+ of
/// H_S (H+ distinct from H_Q, c /\ gamma satisfiable, C /\ gamma unifying
/// with every element of H+). Results are normalized and deduplicated;
/// subsets are visited largest first, ties in element order.
std::vector<ConstraintAtom> alts(const AltsRequest& req, const Signature& sig);

struct CsupInstance {
  ConstraintAtom c_atom;
  std::vector<ConstraintAtom> h_plus;
  std::vector<ConstraintAtom> h_minus;
};

struct CsupResult {
  bool nonempty = false;
  ConstraintAtom witness;  // valid when nonempty
};

/// Decides the constraint selective unification problem: whether some
/// restriction of C unifies with all of H+ and none of H-. On the
/// positive side the witness is C /\ gamma with the H- variables of
/// gamma renamed fresh.
CsupResult csup_decide(const CsupInstance& inst, const Signature& sig);

enum class CsupOracleVerdict { Nonempty, Empty, Unknown };

/// Ground-truth check by bounded enumeration: searches the universe for
/// a witness restriction built from ground equations (one covering point
/// per H+ element, avoiding every H-). Empty only when the universe
/// provably covers the search space; Unknown otherwise.
CsupOracleVerdict csup_oracle(const CsupInstance& inst,
                              const GroundUniverse& u, const Signature& sig);

/// Alpha-renames every quantifier binder to a fresh variable.
Constraint freshen_binders(const Constraint& c, FreshVars& supply);

}  // namespace clpct
