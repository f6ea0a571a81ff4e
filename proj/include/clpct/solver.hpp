#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "clpct/constraint.hpp"
#include "clpct/term.hpp"

namespace clpct {

enum class SolverVerdict { Sat, Unsat };

/// Raised when a formula falls outside the decided fragment. Signals an
/// engine bug or an exotic hand-written instance, never approximated.
class UnsupportedFormulaError : public std::runtime_error {
 public:
  explicit UnsupportedFormulaError(const std::string& what)
      : std::runtime_error("unsupported-formula: " + what) {}
};

/// Finite ground universe used by the brute-force oracle: all ground
/// terms up to `term_depth` (Term domain, constants have depth 1), or
/// the naturals 0..`nat_bound` (Nat domain).
struct GroundUniverse {
  Domain domain = Domain::Term;
  int term_depth = 2;
  long long nat_bound = 8;

  static GroundUniverse terms(int depth) {
    return GroundUniverse{Domain::Term, depth, 0};
  }
  static GroundUniverse nats(long long bound) {
    return GroundUniverse{Domain::Nat, 0, bound};
  }
};

/// Deterministic enumeration of all ground terms of depth <= depth,
/// ordered by (depth, structural order).
std::vector<Term> enumerate_ground_terms(const Signature& sig, int depth);

/// The constraint solver contract: Sat iff the existential closure of c
/// holds over the true (unbounded) domain. Throws UnsupportedFormulaError
/// outside the decided fragment.
SolverVerdict solv(const Constraint& c, const Signature& sig);

bool is_sat(const Constraint& c, const Signature& sig);

/// Brute-force satisfiability over a bounded universe; quantifiers range
/// over the same bounded set. Sound for Sat; Unsat is bound-relative.
SolverVerdict oracle_sat(const Constraint& c, const GroundUniverse& u,
                         const Signature& sig);

/// Set(Q): all instantiations of the goal by universe valuations that
/// satisfy the constraint (quantifiers evaluated over the universe).
std::set<std::vector<Atom>> set_of(const State& q, const GroundUniverse& u,
                                   const Signature& sig);

/// Bounded universe large enough, per the static sufficiency criterion,
/// to make oracle Unsat verdicts trustworthy for these formulas.
GroundUniverse sufficient_universe(const std::vector<Constraint>& cs,
                                   const Signature& sig);

/// Bounded-set comparisons used throughout the test suites.
bool bounded_equivalent(const State& a, const State& b,
                        const GroundUniverse& u, const Signature& sig);
bool bounded_leq(const State& a, const State& b, const GroundUniverse& u,
                 const Signature& sig);
bool bounded_equivalent(const Constraint& a, const Constraint& b,
                        const GroundUniverse& u, const Signature& sig);

/// Debug hook: observes every solv call and its verdict.
using SolvLogger = std::function<void(const Constraint&, SolverVerdict)>;
void set_solv_logger(SolvLogger logger);

namespace detail {
SolverVerdict solv_term_domain(const Constraint& c, const Signature& sig);
SolverVerdict solv_nat_domain(const Constraint& c, const Signature& sig);
}  // namespace detail

}  // namespace clpct
