#pragma once

#include <random>
#include <string>
#include <vector>

#include "clpct/constraint.hpp"
#include "clpct/program.hpp"
#include "clpct/solver.hpp"
#include "clpct/term.hpp"

namespace clpct::testutil {

inline Signature term_sig_abs() {
  Signature sig;
  sig.domain = Domain::Term;
  sig.functors = {{"a", 0}, {"b", 0}, {"s", 1}};
  return sig;
}

inline Signature nat_sig() {
  Signature sig;
  sig.domain = Domain::Nat;
  return sig;
}

inline Term V(const std::string& name) {
  return Term::make_var(Var{name, 0});
}
inline Term A(const std::string& f, std::vector<Term> args = {}) {
  return Term::make_app(f, std::move(args));
}

inline Constraint C(const std::string& text, const Signature& sig) {
  return parse_constraint_text(text, sig);
}
inline State S(const std::string& text, const Signature& sig) {
  return parse_state(text, sig);
}
inline ConstraintAtom CA(const std::string& text, const Signature& sig) {
  return parse_constraint_atom(text, sig);
}

inline const char* kTermBasicProgram = R"(
#domain term.
#functors a/0, b/0, s/1.

p(X) :- {X = a}.
p(s(Y)) :- {true}, q(Y).
q(W) :- {W = a}.
)";

}  // namespace clpct::testutil
