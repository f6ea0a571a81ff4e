#include <algorithm>
#include <cassert>
#include <memory>

#include "clpct/solver.hpp"

// Decision procedure for the generated fragment over finite trees:
// existentially closed boolean combinations of equations and
// disequations plus universally quantified clauses of the neg_constr
// shape, forall V (args != pats \/ ~d). Internally every negative
// literal is the complement form ~exists V (E /\ body); a DNF pass,
// unification of the positive part and a depth-bounded constructive
// search over the finite signature decide each disjunct.

namespace clpct {
namespace {

constexpr int kMaxDisjuncts = 20000;
constexpr int kMaxRecursion = 64;

struct TForm;

// ~exists binders (eqs /\ body); body empty means true.
// An Eq literal is TForm::Lit with is_eq = true.
struct TLit {
  bool is_eq = true;
  Term l, r;                                // Eq
  std::vector<Var> binders;                 // NegEx
  std::vector<std::pair<Term, Term>> eqs;   // NegEx
  std::shared_ptr<TForm> body;              // NegEx; null = true
};

struct TForm {
  enum K { True, False, And, Or, Lit } k = True;
  std::vector<TForm> kids;
  TLit lit;

  static TForm truth() { return TForm{}; }
  static TForm falsity() {
    TForm f;
    f.k = False;
    return f;
  }
  static TForm mk_lit(TLit l) {
    TForm f;
    f.k = Lit;
    f.lit = std::move(l);
    return f;
  }
  static TForm conj(std::vector<TForm> ks) {
    std::vector<TForm> flat;
    for (TForm& kf : ks) {
      if (kf.k == True) continue;
      if (kf.k == False) return falsity();
      if (kf.k == And)
        for (TForm& g : kf.kids) flat.push_back(std::move(g));
      else
        flat.push_back(std::move(kf));
    }
    if (flat.empty()) return truth();
    if (flat.size() == 1) return std::move(flat.front());
    TForm f;
    f.k = And;
    f.kids = std::move(flat);
    return f;
  }
  static TForm disj(std::vector<TForm> ks) {
    std::vector<TForm> flat;
    for (TForm& kf : ks) {
      if (kf.k == False) continue;
      if (kf.k == True) return truth();
      if (kf.k == Or)
        for (TForm& g : kf.kids) flat.push_back(std::move(g));
      else
        flat.push_back(std::move(kf));
    }
    if (flat.empty()) return falsity();
    if (flat.size() == 1) return std::move(flat.front());
    TForm f;
    f.k = Or;
    f.kids = std::move(flat);
    return f;
  }
};

class TermSolver {
 public:
  explicit TermSolver(const Signature& sig) : sig_(sig) {
    if (!sig.has_constant())
      throw std::invalid_argument("term signature without constants");
  }

  bool sat(const Constraint& c) {
    for (const Var& v : all_vars_of(c)) used_.reserve(v);
    TForm f = build(c, true);
    return sat_form(f, 0);
  }

 private:
  const Signature& sig_;
  FreshVars used_;

  Var fresh_like(const Var& v) { return used_.fresh(v.name); }

  // NNF construction. Positive existentials are renamed fresh and
  // hoisted; universals become NegEx literals.
  TForm build(const Constraint& c, bool pos) {
    switch (c.kind) {
      case CKind::True:
        return pos ? TForm::truth() : TForm::falsity();
      case CKind::False:
        return pos ? TForm::falsity() : TForm::truth();
      case CKind::TermAtom: {
        bool eq = (c.trel == TermRel::Eq) == pos;
        if (eq) {
          TLit l;
          l.is_eq = true;
          l.l = c.tl;
          l.r = c.tr;
          return TForm::mk_lit(std::move(l));
        }
        TLit l;
        l.is_eq = false;
        l.eqs = {{c.tl, c.tr}};
        return TForm::mk_lit(std::move(l));
      }
      case CKind::NatAtom:
        throw std::invalid_argument("nat atom in term-domain formula");
      case CKind::Not:
        return build(c.kids.front(), !pos);
      case CKind::And: {
        std::vector<TForm> ks;
        for (const Constraint& k : c.kids) ks.push_back(build(k, pos));
        return pos ? TForm::conj(std::move(ks)) : TForm::disj(std::move(ks));
      }
      case CKind::Or: {
        std::vector<TForm> ks;
        for (const Constraint& k : c.kids) ks.push_back(build(k, pos));
        return pos ? TForm::disj(std::move(ks)) : TForm::conj(std::move(ks));
      }
      case CKind::Exists:
      case CKind::Forall: {
        bool exists_like = (c.kind == CKind::Exists) == pos;
        // Rename binders fresh so they are globally unique.
        Subst ren;
        std::vector<Var> fresh;
        for (const Var& b : c.binders) {
          Var nb = fresh_like(b);
          fresh.push_back(nb);
          ren[b] = Term::make_var(nb);
        }
        Constraint body = subst_free(c.kids.front(), ren);
        if (exists_like) return build(body, pos);
        // ~exists fresh (~body under polarity): the body is kept in
        // positive IR form inside the complement literal.
        TLit l;
        l.is_eq = false;
        l.binders = std::move(fresh);
        l.body = std::make_shared<TForm>(build(body, !pos));
        return TForm::mk_lit(std::move(l));
      }
    }
    return TForm::falsity();
  }

  static void dnf(const TForm& f, std::vector<std::vector<TLit>>& out,
                  std::vector<TLit>& path) {
    switch (f.k) {
      case TForm::True:
        out.push_back(path);
        return;
      case TForm::False:
        return;
      case TForm::Lit:
        path.push_back(f.lit);
        out.push_back(path);
        path.pop_back();
        return;
      case TForm::Or:
        for (const TForm& k : f.kids) {
          dnf(k, out, path);
          if (out.size() > kMaxDisjuncts)
            throw UnsupportedFormulaError("DNF blowup in term solver");
        }
        return;
      case TForm::And: {
        // Distribute: conjunction of child DNFs.
        std::vector<std::vector<TLit>> acc{{}};
        for (const TForm& k : f.kids) {
          std::vector<std::vector<TLit>> part;
          std::vector<TLit> p2;
          dnf(k, part, p2);
          std::vector<std::vector<TLit>> next;
          for (const auto& a : acc)
            for (const auto& b : part) {
              next.push_back(a);
              next.back().insert(next.back().end(), b.begin(), b.end());
              if (next.size() > kMaxDisjuncts)
                throw UnsupportedFormulaError("DNF blowup in term solver");
            }
          acc = std::move(next);
          if (acc.empty()) return;
        }
        for (auto& d : acc) {
          std::vector<TLit> full = path;
          full.insert(full.end(), d.begin(), d.end());
          out.push_back(std::move(full));
        }
        return;
      }
    }
  }

  bool sat_form(const TForm& f, int depth) {
    if (depth > kMaxRecursion)
      throw UnsupportedFormulaError("recursion limit in term solver");
    std::vector<std::vector<TLit>> disjuncts;
    std::vector<TLit> path;
    dnf(f, disjuncts, path);
    for (const auto& d : disjuncts)
      if (sat_disjunct(d, depth)) return true;
    return false;
  }

  static TForm subst_form(const TForm& f, const Subst& s) {
    if (s.empty()) return f;
    TForm out = f;
    switch (f.k) {
      case TForm::True:
      case TForm::False:
        return out;
      case TForm::And:
      case TForm::Or:
        out.kids.clear();
        for (const TForm& k : f.kids) out.kids.push_back(subst_form(k, s));
        return out;
      case TForm::Lit: {
        TLit& l = out.lit;
        if (l.is_eq) {
          l.l = apply_subst(l.l, s);
          l.r = apply_subst(l.r, s);
        } else {
          for (auto& [a, b] : l.eqs) {
            a = apply_subst(a, s);
            b = apply_subst(b, s);
          }
          if (l.body) l.body = std::make_shared<TForm>(subst_form(*l.body, s));
        }
        return out;
      }
    }
    return out;
  }

  // Positive complement of a NegEx-free... of any IR formula.
  TForm neg_form(const TForm& f) {
    switch (f.k) {
      case TForm::True: return TForm::falsity();
      case TForm::False: return TForm::truth();
      case TForm::And: {
        std::vector<TForm> ks;
        for (const TForm& k : f.kids) ks.push_back(neg_form(k));
        return TForm::disj(std::move(ks));
      }
      case TForm::Or: {
        std::vector<TForm> ks;
        for (const TForm& k : f.kids) ks.push_back(neg_form(k));
        return TForm::conj(std::move(ks));
      }
      case TForm::Lit: {
        const TLit& l = f.lit;
        if (l.is_eq) {
          TLit n;
          n.is_eq = false;
          n.eqs = {{l.l, l.r}};
          return TForm::mk_lit(std::move(n));
        }
        // ~(~exists V (E /\ body)) = exists V (E /\ body); binders are
        // already globally fresh, so they can surface as free vars.
        std::vector<TForm> parts;
        for (const auto& [a, b] : l.eqs) {
          TLit e;
          e.is_eq = true;
          e.l = a;
          e.r = b;
          parts.push_back(TForm::mk_lit(std::move(e)));
        }
        if (l.body) parts.push_back(*l.body);
        return TForm::conj(std::move(parts));
      }
    }
    return TForm::falsity();
  }

  struct Residual {
    std::vector<Var> binders;                // may be empty
    std::vector<std::pair<Term, Term>> eqs;  // var = pattern pairs
  };

  enum class SimpKind { True, False, Residual_, Split };
  struct SimpResult {
    SimpKind kind;
    Residual residual;  // Residual_
    TForm split;        // Split: general formula to conjoin instead
  };

  SimpResult simp_negex(const TLit& lit, const Subst& sigma, int depth) {
    if (depth > kMaxRecursion)
      throw UnsupportedFormulaError("negex recursion limit");
    std::vector<std::pair<Term, Term>> eqs;
    for (const auto& [a, b] : lit.eqs)
      eqs.emplace_back(apply_subst(a, sigma), apply_subst(b, sigma));
    std::set<Var> binders(lit.binders.begin(), lit.binders.end());

    // Pull equation literals out of a conjunctive body.
    TForm body = lit.body ? subst_form(*lit.body, sigma) : TForm::truth();
    std::vector<TForm> rest;
    std::vector<TForm> flat;
    if (body.k == TForm::And)
      flat = body.kids;
    else if (body.k != TForm::True)
      flat = {body};
    for (TForm& k : flat) {
      if (k.k == TForm::Lit && k.lit.is_eq)
        eqs.emplace_back(k.lit.l, k.lit.r);
      else if (k.k == TForm::False)
        return {SimpKind::True, {}, {}};
      else if (k.k != TForm::True)
        rest.push_back(std::move(k));
    }

    auto theta_opt = unify(eqs);
    if (!theta_opt) return {SimpKind::True, {}, {}};
    Subst theta = *theta_opt;

    Subst theta_free;
    for (const auto& [v, t] : theta)
      if (!binders.count(v)) theta_free[v] = t;

    TForm inner = TForm::conj(std::move(rest));
    inner = subst_form(inner, theta);

    // Binder variables still relevant after unification.
    auto live_binders = [&]() {
      std::set<Var> live;
      std::set<Var> seen;
      for (const auto& [v, t] : theta_free) collect_vars(t, seen);
      collect_form_vars(inner, seen);
      for (const Var& b : binders)
        if (seen.count(b)) live.insert(b);
      return live;
    };
    std::set<Var> live = live_binders();

    if (inner.k == TForm::True) {
      if (theta_free.empty()) return {SimpKind::False, {}, {}};
      Residual res;
      res.binders.assign(live.begin(), live.end());
      for (const auto& [v, t] : theta_free)
        res.eqs.emplace_back(Term::make_var(v), t);
      return {SimpKind::Residual_, std::move(res), {}};
    }

    // Does the remaining body still mention binder variables?
    std::set<Var> inner_vars;
    collect_form_vars(inner, inner_vars);
    bool inner_has_binder = false;
    for (const Var& b : binders)
      if (inner_vars.count(b)) inner_has_binder = true;

    if (!inner_has_binder) {
      // ~exists V (theta_f /\ g) with g binder-free:
      //   = ~g \/ ~exists V (theta_f)
      TForm neg_g = neg_form(inner);
      if (theta_free.empty()) return {SimpKind::Split, {}, std::move(neg_g)};
      TLit remaining;
      remaining.is_eq = false;
      remaining.binders.assign(live.begin(), live.end());
      for (const auto& [v, t] : theta_free)
        remaining.eqs.emplace_back(Term::make_var(v), t);
      return {SimpKind::Split, {},
              TForm::disj({std::move(neg_g), TForm::mk_lit(remaining)})};
    }

    // Body still constrains binder variables: distribute the body DNF
    // into separate complement literals and let the caller re-solve.
    std::vector<std::vector<TLit>> body_disjuncts;
    std::vector<TLit> path;
    dnf(inner, body_disjuncts, path);
    std::vector<TForm> parts;
    for (const auto& bd : body_disjuncts) {
      TLit sub;
      sub.is_eq = false;
      sub.binders.assign(binders.begin(), binders.end());
      for (const auto& [v, t] : theta_free)
        sub.eqs.emplace_back(Term::make_var(v), t);
      std::vector<TForm> sub_body;
      for (const TLit& bl : bd) {
        if (bl.is_eq)
          sub.eqs.emplace_back(bl.l, bl.r);
        else
          sub_body.push_back(TForm::mk_lit(bl));
      }
      if (sub.eqs.empty() && !sub_body.empty()) {
        std::set<Var> bvars;
        for (const TForm& sb : sub_body) collect_form_vars(sb, bvars);
        bool mentions = false;
        for (const Var& b : binders)
          if (bvars.count(b)) mentions = true;
        if (mentions) {
          // No equations left to consume the binders: a genuine
          // alternation forall V exists W ... outside the fragment.
          throw UnsupportedFormulaError(
              "quantifier alternation outside the neg_constr fragment");
        }
      }
      if (!sub_body.empty())
        sub.body = std::make_shared<TForm>(TForm::conj(std::move(sub_body)));
      SimpResult r = simp_negex(sub, {}, depth + 1);
      switch (r.kind) {
        case SimpKind::True:
          break;
        case SimpKind::False:
          return {SimpKind::False, {}, {}};
        case SimpKind::Residual_: {
          TLit res;
          res.is_eq = false;
          res.binders = r.residual.binders;
          res.eqs = r.residual.eqs;
          parts.push_back(TForm::mk_lit(std::move(res)));
          break;
        }
        case SimpKind::Split:
          parts.push_back(std::move(r.split));
          break;
      }
    }
    if (parts.empty()) return {SimpKind::True, {}, {}};
    return {SimpKind::Split, {}, TForm::conj(std::move(parts))};
  }

  static void collect_form_vars(const TForm& f, std::set<Var>& out) {
    switch (f.k) {
      case TForm::True:
      case TForm::False:
        return;
      case TForm::And:
      case TForm::Or:
        for (const TForm& k : f.kids) collect_form_vars(k, out);
        return;
      case TForm::Lit:
        if (f.lit.is_eq) {
          collect_vars(f.lit.l, out);
          collect_vars(f.lit.r, out);
        } else {
          for (const auto& [a, b] : f.lit.eqs) {
            collect_vars(a, out);
            collect_vars(b, out);
          }
          if (f.lit.body) collect_form_vars(*f.lit.body, out);
        }
        return;
    }
  }

  bool sat_disjunct(const std::vector<TLit>& lits, int depth) {
    std::vector<std::pair<Term, Term>> eqs;
    std::vector<TLit> negs;
    for (const TLit& l : lits) {
      if (l.is_eq)
        eqs.emplace_back(l.l, l.r);
      else
        negs.push_back(l);
    }
    auto sigma_opt = unify(eqs);
    if (!sigma_opt) return false;
    const Subst& sigma = *sigma_opt;

    std::vector<Residual> residuals;
    std::vector<TForm> splits;
    for (const TLit& l : negs) {
      SimpResult r = simp_negex(l, sigma, depth);
      switch (r.kind) {
        case SimpKind::True:
          break;
        case SimpKind::False:
          return false;
        case SimpKind::Residual_:
          residuals.push_back(std::move(r.residual));
          break;
        case SimpKind::Split:
          splits.push_back(std::move(r.split));
          break;
      }
    }
    if (!splits.empty()) {
      // Rebuild the disjunct with the split formulas and re-solve.
      std::vector<TForm> parts;
      for (const auto& [a, b] : eqs) {
        TLit e;
        e.is_eq = true;
        e.l = a;
        e.r = b;
        parts.push_back(TForm::mk_lit(std::move(e)));
      }
      for (const Residual& res : residuals) {
        TLit n;
        n.is_eq = false;
        n.binders = res.binders;
        n.eqs = res.eqs;
        parts.push_back(TForm::mk_lit(std::move(n)));
      }
      for (TForm& s : splits) parts.push_back(std::move(s));
      return sat_form(TForm::conj(std::move(parts)), depth + 1);
    }
    return residuals_satisfiable(residuals);
  }

  struct ActiveLit {
    std::set<Var> binders;
    std::vector<std::pair<Term, Term>> eqs;
  };

  // Satisfiability of a conjunction of complement literals
  // ~exists V (x1 = u1 /\ ...) over the finite signature: constructive
  // search assigning constructor shapes to the constrained free
  // variables, with the standard depth bound for disunification.
  bool residuals_satisfiable(const std::vector<Residual>& residuals) {
    if (residuals.empty()) return true;
    int max_depth = 1;
    for (const Residual& r : residuals)
      for (const auto& [a, b] : r.eqs)
        max_depth = std::max({max_depth, a.depth(), b.depth()});
    int budget = max_depth + static_cast<int>(residuals.size()) + 2;

    std::vector<ActiveLit> active;
    for (const Residual& r : residuals) {
      ActiveLit a;
      a.binders.insert(r.binders.begin(), r.binders.end());
      a.eqs = r.eqs;
      active.push_back(std::move(a));
    }
    std::map<Var, int> var_depth;  // shape depth spent per variable
    return search(active, var_depth, budget);
  }

  bool search(const std::vector<ActiveLit>& lits, std::map<Var, int>& depth,
              int budget) {
    // Evaluate each literal; find a decision variable among the free
    // variables that unification still binds.
    std::vector<ActiveLit> pending;
    std::optional<Var> branch_var;
    for (const ActiveLit& l : lits) {
      auto theta_opt = unify(l.eqs);
      if (!theta_opt) continue;  // literal satisfied for good
      bool binds_free = false;
      for (const auto& [v, t] : *theta_opt) {
        if (l.binders.count(v)) continue;
        binds_free = true;
        if (!branch_var) branch_var = v;
      }
      if (!binds_free) return false;  // violated whatever we assign
      pending.push_back(l);
    }
    if (pending.empty()) return true;
    assert(branch_var);
    const Var v = *branch_var;
    int d = depth.count(v) ? depth.at(v) : 0;
    if (d >= budget) return false;
    for (const auto& [f, n] : sig_.functors) {
      std::vector<Term> slots;
      Subst bind;
      std::vector<Var> fresh;
      for (int i = 0; i < n; ++i) {
        Var s = used_.fresh(v.name);
        fresh.push_back(s);
        slots.push_back(Term::make_var(s));
      }
      bind[v] = Term::make_app(f, slots);
      std::vector<ActiveLit> next;
      for (const ActiveLit& l : pending) {
        ActiveLit nl;
        nl.binders = l.binders;
        for (const auto& [a, b] : l.eqs)
          nl.eqs.emplace_back(apply_subst(a, bind), apply_subst(b, bind));
        next.push_back(std::move(nl));
      }
      for (const Var& s : fresh) depth[s] = d + 1;
      bool ok = search(next, depth, budget);
      for (const Var& s : fresh) depth.erase(s);
      if (ok) return true;
    }
    return false;
  }
};

}  // namespace

SolverVerdict detail::solv_term_domain(const Constraint& c,
                                       const Signature& sig) {
  TermSolver solver(sig);
  return solver.sat(c) ? SolverVerdict::Sat : SolverVerdict::Unsat;
}

}  // namespace clpct
