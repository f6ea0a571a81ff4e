#include <doctest.h>

#include "testutil.hpp"

using namespace clpct;
using namespace clpct::testutil;

TEST_SUITE("solver") {
  TEST_CASE("constants") {
    Signature sig = term_sig_abs();
    CHECK(solv(Constraint::truth(), sig) == SolverVerdict::Sat);
    CHECK(solv(Constraint::falsity(), sig) == SolverVerdict::Unsat);
  }

  TEST_CASE("tree equations with occurs check") {
    Signature sig = term_sig_abs();
    CHECK(is_sat(C("X = s(a)", sig), sig));
    CHECK(!is_sat(C("X = s(X)", sig), sig));
    CHECK(!is_sat(C("s(X) = X /\\ W = X", sig), sig));
    CHECK(!is_sat(C("a = b", sig), sig));
    CHECK(is_sat(C("s(X) = s(a)", sig), sig));
  }

  TEST_CASE("unification formula of a restricted and a guarded atom") {
    // solv(N=X /\ X=a /\ W=N /\ forall M (N != s(M))) = true
    Signature sig = term_sig_abs();
    Constraint c =
        C("N = X /\\ X = a /\\ W = N /\\ forall([M], N != s(M))", sig);
    CHECK(solv(c, sig) == SolverVerdict::Sat);
  }

  TEST_CASE("universally excluded shapes over a finite signature") {
    Signature sig = term_sig_abs();
    // N != a and N != s(_) leaves N = b.
    Constraint c = C("N != a /\\ forall([M], N != s(M))", sig);
    CHECK(solv(c, sig) == SolverVerdict::Sat);
    // Excluding every shape is unsatisfiable.
    Constraint all =
        C("N != a /\\ N != b /\\ forall([M], N != s(M))", sig);
    CHECK(solv(all, sig) == SolverVerdict::Unsat);
  }

  TEST_CASE("neg_constr clause with a guard inside") {
    Signature sig = term_sig_abs();
    // forall X' (N != X' \/ X' != a) boils down to N != a.
    Constraint c = C("forall([X1], N != X1 \\/ X1 != a) /\\ N = a", sig);
    CHECK(solv(c, sig) == SolverVerdict::Unsat);
    Constraint c2 = C("forall([X1], N != X1 \\/ X1 != a) /\\ N = b", sig);
    CHECK(solv(c2, sig) == SolverVerdict::Sat);
  }

  TEST_CASE("nat order atoms") {
    Signature sig = nat_sig();
    // solv(X=Y /\ Y<=2 /\ W=X /\ 5<=X /\ X<=10) = false
    Constraint c =
        C("X = Y /\\ Y <= 2 /\\ W = X /\\ 5 <= X /\\ X <= 10", sig);
    CHECK(solv(c, sig) == SolverVerdict::Unsat);
    // solv(X=Z /\ 8<=Z /\ Z<=10 /\ W=X /\ 5<=X /\ X<=10) = true
    Constraint c2 =
        C("X = Z /\\ 8 <= Z /\\ Z <= 10 /\\ W = X /\\ 5 <= X /\\ X <= 10",
          sig);
    CHECK(solv(c2, sig) == SolverVerdict::Sat);
  }

  TEST_CASE("nat quantified clauses reduce by substitution") {
    Signature sig = nat_sig();
    Constraint c = C("forall([T], X != T \\/ 5 <= T) /\\ X <= 3", sig);
    CHECK(solv(c, sig) == SolverVerdict::Unsat);
    Constraint c2 = C("forall([T], X != T \\/ 5 <= T) /\\ X <= 7", sig);
    CHECK(solv(c2, sig) == SolverVerdict::Sat);
    // forall Z (X != Z \/ Z < 8 \/ Z > 10) == X < 8 \/ X > 10
    Constraint c3 =
        C("forall([Z], X != Z \\/ Z < 8 \\/ Z > 10) /\\ X = 9", sig);
    CHECK(solv(c3, sig) == SolverVerdict::Unsat);
  }

  TEST_CASE("nat equalities with non-unit coefficients") {
    Signature sig = nat_sig();
    CHECK(!is_sat(C("X + X = 3", sig), sig));
    CHECK(is_sat(C("X + X = 4", sig), sig));
    CHECK(is_sat(C("3*X + 2*Y = 7", sig), sig));
    CHECK(!is_sat(C("2*X + 2*Y = 7", sig), sig));
  }

  TEST_CASE("oracle matches the documented examples") {
    Signature sig = term_sig_abs();
    Constraint c = C("N != a /\\ forall([Y1], N != s(Y1))", sig);
    CHECK(oracle_sat(c, GroundUniverse::terms(2), sig) == SolverVerdict::Sat);
    CHECK(oracle_sat(C("X != X", sig), GroundUniverse::terms(2), sig) ==
          SolverVerdict::Unsat);
  }

  TEST_CASE("set_of examples") {
    Signature nsig = nat_sig();
    State q = S("{Y <= X + 2} p(X), q(Y)", nsig);
    auto s = set_of(q, GroundUniverse::nats(2), nsig);
    std::vector<Atom> want{Atom{"p", {A("0")}}, Atom{"q", {A("2")}}};
    CHECK(s.count(want) == 1);

    Signature sig = term_sig_abs();
    CHECK(set_of(S("{false} p(X)", sig), GroundUniverse::terms(2), sig)
              .empty());
    auto forced = set_of(S("{X = a} p(X)", sig), GroundUniverse::terms(1), sig);
    CHECK(forced.size() == 1);
    CHECK(forced.count({Atom{"p", {A("a")}}}) == 1);
  }

  TEST_CASE("bounded equivalence helpers") {
    Signature sig = term_sig_abs();
    GroundUniverse u = GroundUniverse::terms(3);
    State a = S("{forall([X1], N != X1 \\/ X1 != a)} p(N)", sig);
    State b = S("{N != a} p(N)", sig);
    CHECK(bounded_equivalent(a, b, u, sig));
    CHECK(bounded_leq(S("{N = b} p(N)", sig), a, u, sig));
  }

  TEST_CASE("normalize preserves bounded satisfiability") {
    Signature sig = term_sig_abs();
    GroundUniverse u = GroundUniverse::terms(3);
    for (const char* text :
         {"W = N /\\ forall([M], N != s(M))",
          "forall([X1], N != X1 \\/ X1 != a) /\\ N = a",
          "s(X) = s(a) /\\ X != a", "X != a \\/ X != b",
          "exists([Z], Z = s(X) /\\ Z != s(a))"}) {
      Constraint c = C(text, sig);
      CHECK(oracle_sat(c, u, sig) == oracle_sat(normalize(c, sig), u, sig));
    }
  }
}
