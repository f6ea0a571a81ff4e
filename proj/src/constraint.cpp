#include "clpct/constraint.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace clpct {

LinExpr term_to_linexpr(const Term& t) {
  if (t.is_var()) return LinExpr::variable(t.var);
  if (t.functor == "+" && t.args.size() == 2) {
    LinExpr e = term_to_linexpr(t.args[0]);
    e += term_to_linexpr(t.args[1]);
    return e;
  }
  if (t.functor == "*" && t.args.size() == 2 && t.args[1].is_var() &&
      !t.args[0].is_var() && t.args[0].args.empty()) {
    LinExpr e;
    e.coeffs[t.args[1].var] = std::stoll(t.args[0].functor);
    return e;
  }
  if (t.args.empty() && !t.functor.empty() &&
      std::all_of(t.functor.begin(), t.functor.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    return LinExpr::num(std::stoll(t.functor));
  }
  throw std::invalid_argument("not a linear naturals term: " + render(t));
}

Term linexpr_to_term(const LinExpr& e) {
  std::vector<Term> parts;
  for (const auto& [v, c] : e.coeffs) {
    if (c == 1) {
      parts.push_back(Term::make_var(v));
    } else {
      parts.push_back(Term::make_app(
          "*", {Term::make_app(std::to_string(c)), Term::make_var(v)}));
    }
  }
  if (e.constant != 0 || parts.empty())
    parts.push_back(Term::make_app(std::to_string(e.constant)));
  Term out = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;)
    out = Term::make_app("+", {parts[i], out});
  return out;
}

NatRel negate_rel(NatRel r) {
  switch (r) {
    case NatRel::Lt: return NatRel::Ge;
    case NatRel::Le: return NatRel::Gt;
    case NatRel::Eq: return NatRel::Neq;
    case NatRel::Neq: return NatRel::Eq;
    case NatRel::Ge: return NatRel::Lt;
    case NatRel::Gt: return NatRel::Le;
  }
  return NatRel::Eq;
}

const char* rel_text(NatRel r) {
  switch (r) {
    case NatRel::Lt: return "<";
    case NatRel::Le: return "<=";
    case NatRel::Eq: return "=";
    case NatRel::Neq: return "!=";
    case NatRel::Ge: return ">=";
    case NatRel::Gt: return ">";
  }
  return "?";
}

Constraint Constraint::conj(std::vector<Constraint> ks) {
  if (ks.empty()) return truth();
  if (ks.size() == 1) return std::move(ks.front());
  Constraint c;
  c.kind = CKind::And;
  c.kids = std::move(ks);
  return c;
}

Constraint Constraint::disj(std::vector<Constraint> ks) {
  if (ks.empty()) return falsity();
  if (ks.size() == 1) return std::move(ks.front());
  Constraint c;
  c.kind = CKind::Or;
  c.kids = std::move(ks);
  return c;
}

Constraint Constraint::forall(std::vector<Var> vs, Constraint body) {
  if (vs.empty()) return body;
  Constraint c;
  c.kind = CKind::Forall;
  c.binders = std::move(vs);
  c.kids.push_back(std::move(body));
  return c;
}

Constraint Constraint::exists(std::vector<Var> vs, Constraint body) {
  if (vs.empty()) return body;
  Constraint c;
  c.kind = CKind::Exists;
  c.binders = std::move(vs);
  c.kids.push_back(std::move(body));
  return c;
}

bool Constraint::operator==(const Constraint& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case CKind::True:
    case CKind::False:
      return true;
    case CKind::TermAtom:
      return trel == o.trel && tl == o.tl && tr == o.tr;
    case CKind::NatAtom:
      return nrel == o.nrel && nl == o.nl && nr == o.nr;
    case CKind::And:
    case CKind::Or:
    case CKind::Not:
      return kids == o.kids;
    case CKind::Forall:
    case CKind::Exists:
      return binders == o.binders && kids == o.kids;
  }
  return false;
}

namespace {

LinExpr subst_linexpr(const LinExpr& e, const Subst& s) {
  LinExpr out;
  out.constant = e.constant;
  for (const auto& [v, c] : e.coeffs) {
    auto it = s.find(v);
    if (it == s.end()) {
      out.coeffs[v] += c;
      if (out.coeffs[v] == 0) out.coeffs.erase(v);
      continue;
    }
    LinExpr repl = term_to_linexpr(it->second);
    out.constant += c * repl.constant;
    for (const auto& [w, k] : repl.coeffs) {
      out.coeffs[w] += c * k;
      if (out.coeffs[w] == 0) out.coeffs.erase(w);
    }
  }
  return out;
}

}  // namespace

Constraint subst_free(const Constraint& c, const Subst& s) {
  if (s.empty()) return c;
  switch (c.kind) {
    case CKind::True:
    case CKind::False:
      return c;
    case CKind::TermAtom:
      return Constraint::term_atom(apply_subst(c.tl, s), c.trel,
                                   apply_subst(c.tr, s));
    case CKind::NatAtom:
      return Constraint::nat_atom(subst_linexpr(c.nl, s), c.nrel,
                                  subst_linexpr(c.nr, s));
    case CKind::And:
    case CKind::Or:
    case CKind::Not: {
      Constraint out;
      out.kind = c.kind;
      out.kids.reserve(c.kids.size());
      for (const Constraint& k : c.kids) out.kids.push_back(subst_free(k, s));
      return out;
    }
    case CKind::Forall:
    case CKind::Exists: {
      // Drop bindings shadowed by the binders; rename binders that would
      // capture variables introduced by the substitution.
      Subst inner = s;
      for (const Var& b : c.binders) inner.erase(b);
      std::set<Var> introduced;
      for (const auto& [v, t] : inner) collect_vars(t, introduced);
      Subst renames;
      std::vector<Var> binders = c.binders;
      std::set<Var> taken = introduced;
      for (const Var& b : binders) taken.insert(b);
      for (Var& b : binders) {
        if (!introduced.count(b)) continue;
        Var nb = b;
        do {
          ++nb.index;
        } while (taken.count(nb));
        taken.insert(nb);
        renames[b] = Term::make_var(nb);
        b = nb;
      }
      Constraint body = c.kids.front();
      if (!renames.empty()) body = subst_free(body, renames);
      body = subst_free(body, inner);
      Constraint out;
      out.kind = c.kind;
      out.binders = std::move(binders);
      out.kids.push_back(std::move(body));
      return out;
    }
  }
  return c;
}

Constraint apply_subst(const Constraint& c, const Subst& s) {
  return subst_free(c, s);
}

State apply_subst(const State& q, const Subst& s) {
  State out;
  out.constraint = subst_free(q.constraint, s);
  out.goal.reserve(q.goal.size());
  for (const Atom& a : q.goal) out.goal.push_back(apply_subst(a, s));
  return out;
}

ConstraintAtom apply_subst(const ConstraintAtom& c, const Subst& s) {
  return ConstraintAtom{subst_free(c.constraint, s), apply_subst(c.atom, s)};
}

namespace {

void collect_free(const Constraint& c, std::set<Var>& bound,
                  std::set<Var>& out) {
  switch (c.kind) {
    case CKind::True:
    case CKind::False:
      return;
    case CKind::TermAtom: {
      std::set<Var> vs;
      collect_vars(c.tl, vs);
      collect_vars(c.tr, vs);
      for (const Var& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case CKind::NatAtom: {
      for (const auto& [v, k] : c.nl.coeffs)
        if (!bound.count(v)) out.insert(v);
      for (const auto& [v, k] : c.nr.coeffs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case CKind::And:
    case CKind::Or:
    case CKind::Not:
      for (const Constraint& k : c.kids) collect_free(k, bound, out);
      return;
    case CKind::Forall:
    case CKind::Exists: {
      std::vector<Var> added;
      for (const Var& b : c.binders)
        if (bound.insert(b).second) added.push_back(b);
      collect_free(c.kids.front(), bound, out);
      for (const Var& b : added) bound.erase(b);
      return;
    }
  }
}

void collect_all(const Constraint& c, std::set<Var>& out) {
  switch (c.kind) {
    case CKind::TermAtom:
      collect_vars(c.tl, out);
      collect_vars(c.tr, out);
      return;
    case CKind::NatAtom:
      for (const auto& [v, k] : c.nl.coeffs) out.insert(v);
      for (const auto& [v, k] : c.nr.coeffs) out.insert(v);
      return;
    case CKind::Forall:
    case CKind::Exists:
      for (const Var& b : c.binders) out.insert(b);
      [[fallthrough]];
    case CKind::And:
    case CKind::Or:
    case CKind::Not:
      for (const Constraint& k : c.kids) collect_all(k, out);
      return;
    default:
      return;
  }
}

}  // namespace

void collect_free_vars(const Constraint& c, std::set<Var>& out) {
  std::set<Var> bound;
  collect_free(c, bound, out);
}

std::set<Var> vars_of(const Constraint& c) {
  std::set<Var> out;
  collect_free_vars(c, out);
  return out;
}

std::set<Var> vars_of(const State& q) {
  std::set<Var> out;
  collect_free_vars(q.constraint, out);
  for (const Atom& a : q.goal) collect_vars(a, out);
  return out;
}

std::set<Var> vars_of(const ConstraintAtom& c) {
  std::set<Var> out;
  collect_free_vars(c.constraint, out);
  collect_vars(c.atom, out);
  return out;
}

std::set<Var> all_vars_of(const Constraint& c) {
  std::set<Var> out;
  collect_all(c, out);
  return out;
}

State conjoin(const State& q, const Constraint& d) {
  State out = q;
  std::vector<Constraint> ks;
  if (q.constraint.kind == CKind::And)
    ks = q.constraint.kids;
  else
    ks.push_back(q.constraint);
  ks.push_back(d);
  Constraint c;
  c.kind = CKind::And;
  c.kids = std::move(ks);
  out.constraint = std::move(c);
  return out;
}

ConstraintAtom conjoin(const ConstraintAtom& ca, const Constraint& d) {
  State q = conjoin(ca.to_state(), d);
  return ConstraintAtom{q.constraint, q.goal.front()};
}

ConstraintAtom c_atom(const State& q) {
  if (q.goal.empty())
    throw std::invalid_argument("c_atom: no selected atom (empty goal)");
  return ConstraintAtom{q.constraint, q.goal.front()};
}

Constraint unification_formula(const ConstraintAtom& c1,
                               const ConstraintAtom& c2,
                               const Signature& sig) {
  if (c1.atom.predicate != c2.atom.predicate ||
      c1.atom.args.size() != c2.atom.args.size())
    return Constraint::falsity();
  std::vector<Constraint> parts;
  for (size_t i = 0; i < c1.atom.args.size(); ++i) {
    if (sig.domain == Domain::Term) {
      parts.push_back(Constraint::term_atom(c1.atom.args[i], TermRel::Eq,
                                            c2.atom.args[i]));
    } else {
      parts.push_back(Constraint::nat_atom(term_to_linexpr(c1.atom.args[i]),
                                           NatRel::Eq,
                                           term_to_linexpr(c2.atom.args[i])));
    }
  }
  parts.push_back(c1.constraint);
  parts.push_back(c2.constraint);
  return Constraint::conj(std::move(parts));
}

// ---------------------------------------------------------------------------
// normalize

namespace {

bool eval_const_rel(long long l, NatRel r, long long rr) {
  switch (r) {
    case NatRel::Lt: return l < rr;
    case NatRel::Le: return l <= rr;
    case NatRel::Eq: return l == rr;
    case NatRel::Neq: return l != rr;
    case NatRel::Ge: return l >= rr;
    case NatRel::Gt: return l > rr;
  }
  return false;
}

Constraint norm_term_atom(const Constraint& c) {
  const Term& l = c.tl;
  const Term& r = c.tr;
  bool eq = c.trel == TermRel::Eq;
  if (l == r) return eq ? Constraint::truth() : Constraint::falsity();
  if (l.is_var() && occurs_in(l.var, r))
    return eq ? Constraint::falsity() : Constraint::truth();
  if (r.is_var() && occurs_in(r.var, l))
    return eq ? Constraint::falsity() : Constraint::truth();
  if (!l.is_var() && !r.is_var()) {
    if (l.functor != r.functor || l.args.size() != r.args.size())
      return eq ? Constraint::falsity() : Constraint::truth();
    std::vector<Constraint> parts;
    for (size_t i = 0; i < l.args.size(); ++i)
      parts.push_back(Constraint::term_atom(l.args[i], c.trel, r.args[i]));
    return eq ? Constraint::conj(std::move(parts))
              : Constraint::disj(std::move(parts));
  }
  return c;
}

Constraint norm_nat_atom(const Constraint& c, bool under_binder) {
  // Cancel shared parts: evaluate l - r once.
  LinExpr diff = c.nl;
  LinExpr negr;
  negr.constant = -c.nr.constant;
  for (const auto& [v, k] : c.nr.coeffs) negr.coeffs[v] = -k;
  diff += negr;
  if (diff.is_constant())
    return eval_const_rel(diff.constant, c.nrel, 0) ? Constraint::truth()
                                                    : Constraint::falsity();
  // Rebuild with nonnegative sides: positive coefficients left.
  LinExpr lhs, rhs;
  for (const auto& [v, k] : diff.coeffs) {
    if (k > 0)
      lhs.coeffs[v] = k;
    else
      rhs.coeffs[v] = -k;
  }
  if (diff.constant > 0)
    lhs.constant = diff.constant;
  else
    rhs.constant = -diff.constant;
  Constraint atom = Constraint::nat_atom(lhs, c.nrel, rhs);
  if (c.nrel == NatRel::Neq && !under_binder) {
    return Constraint::disj({Constraint::nat_atom(lhs, NatRel::Lt, rhs),
                             Constraint::nat_atom(lhs, NatRel::Gt, rhs)});
  }
  return atom;
}

Constraint negate(const Constraint& c);

Constraint norm_pass(const Constraint& c, const Signature& sig,
                     const std::set<Var>& protect, bool under_binder);

// Tries the quantifier instantiation rewrites:
//   forall V (v != t \/ R)  ==>  R[v := t]   (v in V, t v-free)
//   exists V (v  = t /\ R)  ==>  R[v := t]
std::optional<Constraint> instantiate_quantifier(const Constraint& q) {
  bool is_forall = q.kind == CKind::Forall;
  const Constraint& body = q.kids.front();
  std::vector<Constraint> parts;
  if (is_forall && body.kind == CKind::Or)
    parts = body.kids;
  else if (!is_forall && body.kind == CKind::And)
    parts = body.kids;
  else
    parts = {body};
  std::set<Var> binders(q.binders.begin(), q.binders.end());
  for (size_t i = 0; i < parts.size(); ++i) {
    const Constraint& lit = parts[i];
    Var v;
    Term t;
    bool found = false;
    if (lit.kind == CKind::TermAtom &&
        lit.trel == (is_forall ? TermRel::Neq : TermRel::Eq)) {
      if (lit.tl.is_var() && binders.count(lit.tl.var) &&
          !occurs_in(lit.tl.var, lit.tr)) {
        v = lit.tl.var;
        t = lit.tr;
        found = true;
      } else if (lit.tr.is_var() && binders.count(lit.tr.var) &&
                 !occurs_in(lit.tr.var, lit.tl)) {
        v = lit.tr.var;
        t = lit.tl;
        found = true;
      }
    } else if (lit.kind == CKind::NatAtom &&
               lit.nrel == (is_forall ? NatRel::Neq : NatRel::Eq)) {
      auto exactly_var = [](const LinExpr& e) -> std::optional<Var> {
        if (e.constant == 0 && e.coeffs.size() == 1 &&
            e.coeffs.begin()->second == 1)
          return e.coeffs.begin()->first;
        return std::nullopt;
      };
      if (auto lv = exactly_var(lit.nl);
          lv && binders.count(*lv) && !lit.nr.coeffs.count(*lv)) {
        v = *lv;
        t = linexpr_to_term(lit.nr);
        found = true;
      } else if (auto rv = exactly_var(lit.nr);
                 rv && binders.count(*rv) && !lit.nl.coeffs.count(*rv)) {
        v = *rv;
        t = linexpr_to_term(lit.nl);
        found = true;
      }
    }
    if (!found) continue;
    std::vector<Constraint> rest;
    for (size_t j = 0; j < parts.size(); ++j)
      if (j != i) rest.push_back(parts[j]);
    Subst s{{v, t}};
    Constraint inner = is_forall ? Constraint::disj(std::move(rest))
                                 : Constraint::conj(std::move(rest));
    inner = subst_free(inner, s);
    std::vector<Var> remaining;
    for (const Var& b : q.binders)
      if (!(b == v)) remaining.push_back(b);
    return is_forall ? Constraint::forall(std::move(remaining), inner)
                     : Constraint::exists(std::move(remaining), inner);
  }
  return std::nullopt;
}

Constraint negate(const Constraint& c) {
  switch (c.kind) {
    case CKind::True: return Constraint::falsity();
    case CKind::False: return Constraint::truth();
    case CKind::TermAtom:
      return Constraint::term_atom(
          c.tl, c.trel == TermRel::Eq ? TermRel::Neq : TermRel::Eq, c.tr);
    case CKind::NatAtom:
      return Constraint::nat_atom(c.nl, negate_rel(c.nrel), c.nr);
    case CKind::Not:
      return c.kids.front();
    case CKind::And: {
      std::vector<Constraint> ks;
      for (const Constraint& k : c.kids) ks.push_back(negate(k));
      return Constraint::disj(std::move(ks));
    }
    case CKind::Or: {
      std::vector<Constraint> ks;
      for (const Constraint& k : c.kids) ks.push_back(negate(k));
      return Constraint::conj(std::move(ks));
    }
    case CKind::Forall:
      return Constraint::exists(c.binders, negate(c.kids.front()));
    case CKind::Exists:
      return Constraint::forall(c.binders, negate(c.kids.front()));
  }
  return c;
}

Constraint norm_pass(const Constraint& c, const Signature& sig,
                     const std::set<Var>& protect, bool under_binder) {
  switch (c.kind) {
    case CKind::True:
    case CKind::False:
      return c;
    case CKind::TermAtom:
      return norm_term_atom(c);
    case CKind::NatAtom:
      return norm_nat_atom(c, under_binder);
    case CKind::Not:
      return norm_pass(negate(c.kids.front()), sig, protect, under_binder);
    case CKind::And:
    case CKind::Or: {
      bool is_and = c.kind == CKind::And;
      std::vector<Constraint> flat;
      for (const Constraint& k : c.kids) {
        Constraint nk = norm_pass(k, sig, protect, under_binder);
        if (is_and && nk.is_true()) continue;
        if (!is_and && nk.is_false()) continue;
        if (is_and && nk.is_false()) return Constraint::falsity();
        if (!is_and && nk.is_true()) return Constraint::truth();
        if (nk.kind == c.kind) {
          for (Constraint& g : nk.kids) flat.push_back(std::move(g));
        } else {
          flat.push_back(std::move(nk));
        }
      }
      // Stable structural dedup.
      std::vector<Constraint> uniq;
      for (Constraint& k : flat) {
        bool seen = false;
        for (const Constraint& u : uniq)
          if (u == k) {
            seen = true;
            break;
          }
        if (!seen) uniq.push_back(std::move(k));
      }
      return is_and ? Constraint::conj(std::move(uniq))
                    : Constraint::disj(std::move(uniq));
    }
    case CKind::Forall:
    case CKind::Exists: {
      Constraint body = norm_pass(c.kids.front(), sig, protect, true);
      if (body.is_true() || body.is_false()) return body;
      // Merge directly nested quantifiers of the same kind.
      std::vector<Var> binders = c.binders;
      if (body.kind == c.kind) {
        binders.insert(binders.end(), body.binders.begin(),
                       body.binders.end());
        body = body.kids.front();
      }
      // Drop binders that are not free in the body.
      std::set<Var> free = vars_of(body);
      std::vector<Var> kept;
      for (const Var& b : binders)
        if (free.count(b)) kept.push_back(b);
      if (kept.empty()) return body;
      Constraint q;
      q.kind = c.kind;
      q.binders = std::move(kept);
      q.kids.push_back(std::move(body));
      if (auto inst = instantiate_quantifier(q))
        return norm_pass(*inst, sig, protect, under_binder);
      return q;
    }
  }
  return c;
}

// One top-level equation elimination step; returns true if it rewrote.
bool eliminate_equation(std::vector<Constraint>& conjuncts,
                        const std::set<Var>& protect) {
  for (size_t i = 0; i < conjuncts.size(); ++i) {
    const Constraint& lit = conjuncts[i];
    Var v;
    Term t;
    bool found = false;
    if (lit.kind == CKind::TermAtom && lit.trel == TermRel::Eq) {
      bool l_ok = lit.tl.is_var() && !protect.count(lit.tl.var) &&
                  !occurs_in(lit.tl.var, lit.tr);
      bool r_ok = lit.tr.is_var() && !protect.count(lit.tr.var) &&
                  !occurs_in(lit.tr.var, lit.tl);
      if (l_ok && r_ok) {
        // Both sides eliminable variables: drop the right-hand one.
        v = lit.tr.var;
        t = lit.tl;
        found = true;
      } else if (r_ok) {
        v = lit.tr.var;
        t = lit.tl;
        found = true;
      } else if (l_ok) {
        v = lit.tl.var;
        t = lit.tr;
        found = true;
      }
    } else if (lit.kind == CKind::NatAtom && lit.nrel == NatRel::Eq) {
      auto exactly_var = [](const LinExpr& e) -> std::optional<Var> {
        if (e.constant == 0 && e.coeffs.size() == 1 &&
            e.coeffs.begin()->second == 1)
          return e.coeffs.begin()->first;
        return std::nullopt;
      };
      auto lv = exactly_var(lit.nl);
      auto rv = exactly_var(lit.nr);
      bool l_ok = lv && !protect.count(*lv) && !lit.nr.coeffs.count(*lv);
      bool r_ok = rv && !protect.count(*rv) && !lit.nl.coeffs.count(*rv);
      if (l_ok && r_ok) {
        v = *rv;
        t = linexpr_to_term(lit.nl);
        found = true;
      } else if (r_ok) {
        v = *rv;
        t = linexpr_to_term(lit.nl);
        found = true;
      } else if (l_ok) {
        v = *lv;
        t = linexpr_to_term(lit.nr);
        found = true;
      }
    }
    if (!found) continue;
    Subst s{{v, t}};
    std::vector<Constraint> out;
    for (size_t j = 0; j < conjuncts.size(); ++j) {
      if (j == i) continue;
      out.push_back(subst_free(conjuncts[j], s));
    }
    conjuncts = std::move(out);
    return true;
  }
  return false;
}

}  // namespace

Constraint normalize(const Constraint& c, const Signature& sig,
                     const std::set<Var>& protect) {
  Constraint cur = c;
  for (int round = 0; round < 40; ++round) {
    Constraint next = norm_pass(cur, sig, protect, false);
    // Top-level conjunction scope: equation substitution may drop
    // bindings of unprotected variables.
    std::vector<Constraint> conjuncts;
    if (next.kind == CKind::And)
      conjuncts = next.kids;
    else
      conjuncts = {next};
    bool changed = false;
    while (eliminate_equation(conjuncts, protect)) changed = true;
    if (changed) next = Constraint::conj(std::move(conjuncts));
    if (next == cur) return cur;
    cur = std::move(next);
  }
  return cur;
}

State normalize(const State& q, const Signature& sig) {
  std::set<Var> protect;
  for (const Atom& a : q.goal) collect_vars(a, protect);
  State out = q;
  out.constraint = normalize(q.constraint, sig, protect);
  return out;
}

ConstraintAtom normalize(const ConstraintAtom& c, const Signature& sig) {
  State q = normalize(c.to_state(), sig);
  return ConstraintAtom{q.constraint, q.goal.front()};
}

// ---------------------------------------------------------------------------
// rendering

std::string render(const Term& t) {
  if (t.is_var()) return t.var.display();
  if (t.functor == "+" && t.args.size() == 2)
    return render(t.args[0]) + " + " + render(t.args[1]);
  if (t.functor == "*" && t.args.size() == 2)
    return render(t.args[0]) + "*" + render(t.args[1]);
  if (t.args.empty()) return t.functor;
  std::string out = t.functor + "(";
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += render(t.args[i]);
  }
  return out + ")";
}

std::string render(const LinExpr& e) {
  std::string out;
  for (const auto& [v, c] : e.coeffs) {
    if (!out.empty()) out += " + ";
    if (c != 1) out += std::to_string(c) + "*";
    out += v.display();
  }
  if (e.constant != 0 || out.empty()) {
    if (!out.empty()) out += " + ";
    out += std::to_string(e.constant);
  }
  return out;
}

namespace {

// Precedence: \/ lowest (1), /\ (2), everything else atomic (3).
std::string render_prec(const Constraint& c, int minprec) {
  auto wrap = [&](const std::string& s, int prec) {
    return prec < minprec ? "(" + s + ")" : s;
  };
  switch (c.kind) {
    case CKind::True: return "true";
    case CKind::False: return "false";
    case CKind::TermAtom:
      return render(c.tl) + (c.trel == TermRel::Eq ? " = " : " != ") +
             render(c.tr);
    case CKind::NatAtom:
      return render(c.nl) + " " + rel_text(c.nrel) + " " + render(c.nr);
    case CKind::Not:
      return "~" + render_prec(c.kids.front(), 3);
    case CKind::And: {
      std::string out;
      for (size_t i = 0; i < c.kids.size(); ++i) {
        if (i) out += " /\\ ";
        out += render_prec(c.kids[i], 2);
      }
      return wrap(out, 2);
    }
    case CKind::Or: {
      std::string out;
      for (size_t i = 0; i < c.kids.size(); ++i) {
        if (i) out += " \\/ ";
        out += render_prec(c.kids[i], 1);
      }
      return wrap(out, 1);
    }
    case CKind::Forall:
    case CKind::Exists: {
      std::string out = c.kind == CKind::Forall ? "forall([" : "exists([";
      for (size_t i = 0; i < c.binders.size(); ++i) {
        if (i) out += ", ";
        out += c.binders[i].display();
      }
      out += "], " + render_prec(c.kids.front(), 1) + ")";
      return out;
    }
  }
  return "?";
}

}  // namespace

std::string render(const Constraint& c) { return render_prec(c, 1); }

std::string render(const Atom& a) {
  if (a.args.empty()) return a.predicate;
  std::string out = a.predicate + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += render(a.args[i]);
  }
  return out + ")";
}

std::string render(const State& q) {
  std::string out = "{" + render(q.constraint) + "}";
  for (size_t i = 0; i < q.goal.size(); ++i)
    out += (i ? ", " : " ") + render(q.goal[i]);
  return out;
}

std::string render(const ConstraintAtom& c) { return render(c.to_state()); }

// ---------------------------------------------------------------------------
// canonical keys

namespace {

struct Canonizer {
  std::map<Var, Var> names;
  int next = 0;

  Var get(const Var& v) {
    auto it = names.find(v);
    if (it != names.end()) return it->second;
    Var nv{"_c", ++next};
    names.emplace(v, nv);
    return nv;
  }

  Term walk(const Term& t) {
    if (t.is_var()) return Term::make_var(get(t.var));
    Term out = Term::make_app(t.functor);
    for (const Term& a : t.args) out.args.push_back(walk(a));
    return out;
  }

  Atom walk(const Atom& a) {
    Atom out{a.predicate, {}};
    for (const Term& t : a.args) out.args.push_back(walk(t));
    return out;
  }

  LinExpr walk(const LinExpr& e) {
    LinExpr out;
    out.constant = e.constant;
    for (const auto& [v, c] : e.coeffs) out.coeffs[get(v)] = c;
    return out;
  }

  Constraint walk(const Constraint& c) {
    switch (c.kind) {
      case CKind::True:
      case CKind::False:
        return c;
      case CKind::TermAtom:
        return Constraint::term_atom(walk(c.tl), c.trel, walk(c.tr));
      case CKind::NatAtom:
        return Constraint::nat_atom(walk(c.nl), c.nrel, walk(c.nr));
      case CKind::And:
      case CKind::Or:
      case CKind::Not: {
        Constraint out;
        out.kind = c.kind;
        for (const Constraint& k : c.kids) out.kids.push_back(walk(k));
        return out;
      }
      case CKind::Forall:
      case CKind::Exists: {
        Constraint out;
        out.kind = c.kind;
        for (const Var& b : c.binders) out.binders.push_back(get(b));
        out.kids.push_back(walk(c.kids.front()));
        return out;
      }
    }
    return c;
  }
};

}  // namespace

std::string canonical_key(const State& q, const Signature& sig) {
  State n = normalize(q, sig);
  Canonizer cz;
  std::vector<Atom> goal;
  for (const Atom& a : n.goal) goal.push_back(cz.walk(a));
  Constraint c = cz.walk(n.constraint);
  State renamed{std::move(c), std::move(goal)};
  return render(renamed);
}

std::string canonical_key(const ConstraintAtom& c, const Signature& sig) {
  return canonical_key(c.to_state(), sig);
}

}  // namespace clpct
