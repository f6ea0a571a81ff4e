#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace clpct {

/// A logic variable. Identity is the pair (source name, rename index);
/// index 0 means the variable appeared verbatim in the source.
struct Var {
  std::string name;
  int index = 0;

  auto operator<=>(const Var&) const = default;

  std::string display() const {
    return index == 0 ? name : name + "_" + std::to_string(index);
  }
};

enum class TermKind { Variable, Compound };

/// A finite-tree term: a variable or functor(args). Constants are
/// zero-argument compounds. In the Nat domain the only functors are
/// numerals (as constants), "+" and "*" (coefficient * variable).
struct Term {
  TermKind kind = TermKind::Compound;
  Var var;                 // valid when kind == Variable
  std::string functor;     // valid when kind == Compound
  std::vector<Term> args;  // valid when kind == Compound

  static Term make_var(Var v) {
    Term t;
    t.kind = TermKind::Variable;
    t.var = std::move(v);
    return t;
  }
  static Term make_app(std::string f, std::vector<Term> as = {}) {
    Term t;
    t.kind = TermKind::Compound;
    t.functor = std::move(f);
    t.args = std::move(as);
    return t;
  }

  bool is_var() const { return kind == TermKind::Variable; }
  bool operator==(const Term& o) const {
    if (kind != o.kind) return false;
    if (is_var()) return var == o.var;
    return functor == o.functor && args == o.args;
  }
  bool operator<(const Term& o) const;

  bool is_ground() const;
  int depth() const;  // constants have depth 1
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool operator==(const Atom&) const = default;
  bool operator<(const Atom& o) const {
    if (predicate != o.predicate) return predicate < o.predicate;
    return args < o.args;
  }
  int arity() const { return static_cast<int>(args.size()); }
};

enum class Domain { Term, Nat };

/// Declared symbols of a program: the functor alphabet (Term domain only)
/// and the program predicates. Disequation satisfiability over finite
/// trees depends on the functor set, so it is part of every solver call.
struct Signature {
  Domain domain = Domain::Term;
  std::set<std::pair<std::string, int>> functors;
  std::set<std::pair<std::string, int>> program_predicates;

  bool has_functor(const std::string& f, int arity) const {
    return functors.count({f, arity}) > 0;
  }
  bool has_constant() const {
    for (const auto& [f, n] : functors)
      if (n == 0) return true;
    return false;
  }
};

/// Variable -> term bindings, kept idempotent by the unifier.
using Subst = std::map<Var, Term>;

Term apply_subst(const Term& t, const Subst& s);
Atom apply_subst(const Atom& a, const Subst& s);

/// Most general unifier of a list of term pairs, with occurs check
/// (finite trees only). Returns nullopt when not unifiable.
std::optional<Subst> unify(std::vector<std::pair<Term, Term>> eqs);

void collect_vars(const Term& t, std::set<Var>& out);
void collect_vars(const Atom& a, std::set<Var>& out);
std::set<Var> vars_of(const Term& t);
std::set<Var> vars_of(const Atom& a);

bool occurs_in(const Var& v, const Term& t);

/// Session-scoped supply of fresh variables. Names already seen (parsed
/// program variables, earlier fresh picks) are never produced again.
class FreshVars {
 public:
  void reserve(const Var& v) { used_.insert(v.display()); }
  void reserve_all(const std::set<Var>& vs) {
    for (const auto& v : vs) reserve(v);
  }

  Var fresh(const std::string& base) {
    int& k = next_[base];
    for (;;) {
      ++k;
      Var v{base, k};
      if (used_.insert(v.display()).second) return v;
    }
  }

  /// Renames the given variables away from everything this supply has
  /// seen; result is a bijection on `vs`. Names that are still free are
  /// kept verbatim.
  Subst rename_apart(const std::set<Var>& vs) {
    Subst out;
    for (const auto& v : vs) {
      if (used_.insert(v.display()).second) {
        out[v] = Term::make_var(v);
      } else {
        out[v] = Term::make_var(fresh(v.name));
      }
    }
    return out;
  }

 private:
  std::set<std::string> used_;
  std::map<std::string, int> next_;
};

}  // namespace clpct
