#pragma once

#include <string>
#include <vector>

#include "clpct/constraint.hpp"
#include "clpct/term.hpp"

namespace clpct {

struct Rule {
  std::string label;
  Atom head;
  Constraint guard;
  std::vector<Atom> body;
  int line = 0;

  ConstraintAtom head_c_atom() const { return ConstraintAtom{guard, head}; }
};

struct Program {
  Signature signature;
  std::vector<Rule> rules;

  const Rule* rule_by_label(const std::string& label) const {
    for (const Rule& r : rules)
      if (r.label == label) return &r;
    return nullptr;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Parses a .clp source: header directives (#domain, #functors), then
/// rules `Head :- {Constraint}, Body.`; `%` starts a line comment.
/// Guards are checked satisfiable with solv at load time.
Program parse_program(const std::string& src);

/// Parses `{Constraint} Atom, ...` against an existing signature.
State parse_state(const std::string& src, const Signature& sig);
ConstraintAtom parse_constraint_atom(const std::string& src,
                                     const Signature& sig);
Constraint parse_constraint_text(const std::string& src,
                                 const Signature& sig);

/// Rules r of p whose fresh head c-atom unifies with c_atom(q), in
/// program order (indices into p.rules).
std::vector<size_t> rules_matching(const State& q, const Program& p);

/// Fresh copy of a rule, renamed apart from everything `supply` has seen.
Rule fresh_copy(const Rule& r, FreshVars& supply);

std::set<Var> vars_of(const Rule& r);

}  // namespace clpct
