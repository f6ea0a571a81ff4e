#include <doctest.h>

#include "testutil.hpp"

using namespace clpct;
using namespace clpct::testutil;

TEST_SUITE("terms") {
  TEST_CASE("vars_of reads term structure") {
    Term t = A("f", {V("X"), A("a")});
    CHECK(vars_of(t) == std::set<Var>{Var{"X", 0}});
    CHECK(vars_of(A("a")).empty());
  }

  TEST_CASE("vars_of excludes quantifier-bound variables") {
    Signature sig = term_sig_abs();
    Constraint c = C("forall([M], N != s(M))", sig);
    CHECK(vars_of(c) == std::set<Var>{Var{"N", 0}});
  }

  TEST_CASE("unify with occurs check") {
    auto u = unify({{V("X"), A("s", {A("a")})}});
    REQUIRE(u.has_value());
    CHECK(u->at(Var{"X", 0}) == A("s", {A("a")}));
    CHECK(!unify({{V("X"), A("s", {V("X")})}}).has_value());
    CHECK(!unify({{A("a"), A("b")}}).has_value());
  }

  TEST_CASE("fresh supply never repeats") {
    FreshVars fv;
    fv.reserve(Var{"X", 0});
    std::set<std::string> seen;
    for (int i = 0; i < 3000; ++i)
      CHECK(seen.insert(fv.fresh("X").display()).second);
  }

  TEST_CASE("rename_apart is a variant bijection") {
    FreshVars fv;
    std::set<Var> vs{Var{"X", 0}, Var{"Y", 0}};
    fv.reserve(Var{"X", 0});
    Subst ren = fv.rename_apart(vs);
    CHECK(ren.size() == 2);
    // X was taken, so it must be renamed; Y kept.
    CHECK(ren.at(Var{"X", 0}) != Term::make_var(Var{"X", 0}));
    CHECK(ren.at(Var{"Y", 0}) == Term::make_var(Var{"Y", 0}));
    std::set<Term> range;
    for (auto& [v, t] : ren) range.insert(t);
    CHECK(range.size() == 2);
  }
}

TEST_SUITE("constraints") {
  TEST_CASE("conjoin keeps the goal") {
    Signature sig = term_sig_abs();
    State q = S("{true} p(X)", sig);
    State out = conjoin(q, C("X = a", sig));
    CHECK(out.goal == q.goal);
    CHECK(render(out.constraint) == "true /\\ X = a");
    CHECK(render(normalize(out, sig).constraint) == "X = a");
  }

  TEST_CASE("conjoin with true normalizes away") {
    Signature sig = term_sig_abs();
    State q = S("{X = a} p(X)", sig);
    State out = normalize(conjoin(q, Constraint::truth()), sig);
    CHECK(out.constraint == normalize(q, sig).constraint);
  }

  TEST_CASE("c_atom selects the leftmost atom") {
    Signature sig = term_sig_abs();
    State q = S("{X = a} p(X), q(Y)", sig);
    ConstraintAtom ca = c_atom(q);
    CHECK(render(ca.atom) == "p(X)");
    CHECK_THROWS_AS(c_atom(State{Constraint::truth(), {}}),
                    std::invalid_argument);
  }

  TEST_CASE("c_atom of a rule takes guard and head") {
    Program p = parse_program(kTermBasicProgram);
    ConstraintAtom ca = p.rules[1].head_c_atom();
    CHECK(render(ca) == "{true} p(s(Y))");
  }

  TEST_CASE("unification formula shape and symmetry") {
    Signature sig = term_sig_abs();
    ConstraintAtom c1 = CA("{W = N} q(N)", sig);
    ConstraintAtom c2 = CA("{X = a} q(X)", sig);
    Constraint f12 = unification_formula(c1, c2, sig);
    Constraint f21 = unification_formula(c2, c1, sig);
    CHECK(solv(f12, sig) == solv(f21, sig));
    CHECK(solv(f12, sig) == SolverVerdict::Sat);

    ConstraintAtom other = CA("{true} p(X)", sig);
    CHECK(unification_formula(c1, other, sig).is_false());

    ConstraintAtom v1 = CA("{true} p(X)", sig);
    ConstraintAtom v2 = CA("{true} p(Y)", sig);
    CHECK(solv(unification_formula(v1, v2, sig), sig) == SolverVerdict::Sat);
  }

  TEST_CASE("normalize simplifies the paper shapes") {
    Signature sig = term_sig_abs();
    // W=N /\ forall M (N != s(M))  ==>  forall M (W != s(M))
    Constraint c = C("W = N /\\ forall([M], N != s(M))", sig);
    CHECK(render(normalize(c, sig)) == "forall([M], W != s(M))");

    Signature nsig = nat_sig();
    Constraint q = C("forall([T], X != T \\/ 5 <= T)", nsig);
    CHECK(render(normalize(q, nsig)) == "5 <= X");
  }

  TEST_CASE("normalize is idempotent on random-ish inputs") {
    Signature sig = term_sig_abs();
    for (const char* text :
         {"W = N /\\ forall([M], N != s(M))", "X = a /\\ true",
          "~(X = a /\\ Y != b)", "s(X) = s(a) \\/ false",
          "exists([Z], Z = s(X) /\\ Z != a)",
          "forall([M], N != M \\/ M != a) /\\ N = b"}) {
      Constraint c = C(text, sig);
      Constraint n1 = normalize(c, sig);
      CHECK(normalize(n1, sig) == n1);
    }
  }

  TEST_CASE("normalize detects occurs-check failures") {
    Signature sig = term_sig_abs();
    CHECK(normalize(C("s(X) = X", sig), sig).is_false());
    CHECK(normalize(C("s(X) != X", sig), sig).is_true());
  }

  TEST_CASE("canonical keys are renaming invariant") {
    Signature sig = term_sig_abs();
    State a = S("{X = a} p(X)", sig);
    State b = S("{Y = a} p(Y)", sig);
    State c = S("{Y = b} p(Y)", sig);
    CHECK(canonical_key(a, sig) == canonical_key(b, sig));
    CHECK(canonical_key(a, sig) != canonical_key(c, sig));
  }
}
