#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "clpct/term.hpp"

namespace clpct {

/// Linear expression over the naturals: constant + sum of coeff * var,
/// all coefficients >= 1.
struct LinExpr {
  long long constant = 0;
  std::map<Var, long long> coeffs;

  static LinExpr num(long long k) {
    LinExpr e;
    e.constant = k;
    return e;
  }
  static LinExpr variable(const Var& v) {
    LinExpr e;
    e.coeffs[v] = 1;
    return e;
  }

  LinExpr& operator+=(const LinExpr& o) {
    constant += o.constant;
    for (const auto& [v, c] : o.coeffs) {
      coeffs[v] += c;
      if (coeffs[v] == 0) coeffs.erase(v);
    }
    return *this;
  }

  bool is_constant() const { return coeffs.empty(); }
  bool operator==(const LinExpr&) const = default;
  bool operator<(const LinExpr& o) const {
    if (constant != o.constant) return constant < o.constant;
    return coeffs < o.coeffs;
  }
};

/// Converts a Nat-domain term (numerals, variables, + and coefficient *)
/// into a LinExpr. Throws std::invalid_argument on anything else.
LinExpr term_to_linexpr(const Term& t);
Term linexpr_to_term(const LinExpr& e);

enum class TermRel { Eq, Neq };
enum class NatRel { Lt, Le, Eq, Neq, Ge, Gt };

NatRel negate_rel(NatRel r);
const char* rel_text(NatRel r);

enum class CKind {
  True,
  False,
  TermAtom,  // lhs rel rhs over finite trees
  NatAtom,   // lhs rel rhs over naturals
  And,
  Or,
  Not,
  Forall,
  Exists
};

/// First-order constraint formula: atomic (dis)equations over trees,
/// linear relations over naturals, and quantified boolean combinations.
struct Constraint {
  CKind kind = CKind::True;

  Term tl, tr;       // TermAtom
  TermRel trel = TermRel::Eq;
  LinExpr nl, nr;    // NatAtom
  NatRel nrel = NatRel::Eq;

  std::vector<Constraint> kids;  // And / Or / Not (single child)
  std::vector<Var> binders;      // Forall / Exists

  static Constraint truth() { return Constraint{}; }
  static Constraint falsity() {
    Constraint c;
    c.kind = CKind::False;
    return c;
  }
  static Constraint term_atom(Term l, TermRel r, Term rr) {
    Constraint c;
    c.kind = CKind::TermAtom;
    c.tl = std::move(l);
    c.trel = r;
    c.tr = std::move(rr);
    return c;
  }
  static Constraint nat_atom(LinExpr l, NatRel r, LinExpr rr) {
    Constraint c;
    c.kind = CKind::NatAtom;
    c.nl = std::move(l);
    c.nrel = r;
    c.nr = std::move(rr);
    return c;
  }
  static Constraint conj(std::vector<Constraint> ks);
  static Constraint disj(std::vector<Constraint> ks);
  static Constraint neg(Constraint c) {
    Constraint out;
    out.kind = CKind::Not;
    out.kids.push_back(std::move(c));
    return out;
  }
  static Constraint forall(std::vector<Var> vs, Constraint body);
  static Constraint exists(std::vector<Var> vs, Constraint body);

  bool is_true() const { return kind == CKind::True; }
  bool is_false() const { return kind == CKind::False; }

  bool operator==(const Constraint& o) const;
};

/// A state <constraint | goal>. Successful when the goal is empty.
struct State {
  Constraint constraint;
  std::vector<Atom> goal;
};

/// A state whose goal is a single atom; the unit over which unification
/// and neg_constr are defined.
struct ConstraintAtom {
  Constraint constraint;
  Atom atom;

  State to_state() const { return State{constraint, {atom}}; }
};

Constraint apply_subst(const Constraint& c, const Subst& s);
State apply_subst(const State& q, const Subst& s);
ConstraintAtom apply_subst(const ConstraintAtom& c, const Subst& s);

/// Free variables (quantifier-bound ones excluded).
void collect_free_vars(const Constraint& c, std::set<Var>& out);
std::set<Var> vars_of(const Constraint& c);
std::set<Var> vars_of(const State& q);
std::set<Var> vars_of(const ConstraintAtom& c);
/// All variables including quantifier binders; used for rename-apart
/// avoid sets so displays never collide.
std::set<Var> all_vars_of(const Constraint& c);

/// Q /\ d: conjoins d onto the state's constraint, goal unchanged.
State conjoin(const State& q, const Constraint& d);
ConstraintAtom conjoin(const ConstraintAtom& c, const Constraint& d);

/// Selects the leftmost atom of a state together with its constraint.
/// Throws std::invalid_argument on an empty goal ("no selected atom").
ConstraintAtom c_atom(const State& q);

/// C ~ C': the unification formula args(C) = args(C') /\ c /\ d, or
/// false when the predicates differ. Caller renames apart.
Constraint unification_formula(const ConstraintAtom& c1,
                               const ConstraintAtom& c2,
                               const Signature& sig);

/// Structural simplification to a normal form: flattening, unit and
/// negation pushing, equation substitution, quantifier instantiation.
/// `protect` lists variables that must survive equation elimination
/// (typically the goal variables of the surrounding state).
Constraint normalize(const Constraint& c, const Signature& sig,
                     const std::set<Var>& protect = {});
State normalize(const State& q, const Signature& sig);
ConstraintAtom normalize(const ConstraintAtom& c, const Signature& sig);

/// Capture-avoiding substitution into quantified formulas.
Constraint subst_free(const Constraint& c, const Subst& s);

/// Canonical text rendering: infix atoms, /\, \/, ~, forall([..], ..).
std::string render(const Term& t);
std::string render(const LinExpr& e);
std::string render(const Constraint& c);
std::string render(const Atom& a);
std::string render(const State& q);
std::string render(const ConstraintAtom& c);

/// Canonical key after normalization and depth-first variable renaming;
/// the set-membership equality for TC / PTC / TR bookkeeping.
std::string canonical_key(const State& q, const Signature& sig);
std::string canonical_key(const ConstraintAtom& c, const Signature& sig);

}  // namespace clpct
