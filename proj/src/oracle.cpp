#include <algorithm>
#include <cassert>

#include "clpct/solver.hpp"

namespace clpct {

std::vector<Term> enumerate_ground_terms(const Signature& sig, int depth) {
  std::vector<Term> cur;  // all terms of depth <= d, grown per round
  for (int d = 1; d <= depth; ++d) {
    std::vector<Term> next;
    for (const auto& [f, n] : sig.functors) {
      if (n == 0) {
        next.push_back(Term::make_app(f));
        continue;
      }
      // All argument tuples from the previous round, at least one of
      // maximal depth is not required: depth <= d covers them already.
      std::vector<size_t> idx(n, 0);
      if (cur.empty()) continue;
      for (;;) {
        std::vector<Term> args;
        args.reserve(n);
        for (int i = 0; i < n; ++i) args.push_back(cur[idx[i]]);
        next.push_back(Term::make_app(f, std::move(args)));
        int i = n - 1;
        while (i >= 0 && ++idx[i] == cur.size()) idx[i--] = 0;
        if (i < 0) break;
      }
    }
    std::sort(next.begin(), next.end(),
              [](const Term& a, const Term& b) {
                int da = a.depth(), db = b.depth();
                if (da != db) return da < db;
                return a < b;
              });
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return cur;
}

namespace {

long long eval_linexpr(const LinExpr& e,
                       const std::map<Var, long long>& val) {
  long long out = e.constant;
  for (const auto& [v, c] : e.coeffs) out += c * val.at(v);
  return out;
}

bool eval_nat_rel(long long l, NatRel r, long long rr) {
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

bool eval_term_domain(const Constraint& c, std::map<Var, Term>& val,
                      const std::vector<Term>& universe) {
  switch (c.kind) {
    case CKind::True: return true;
    case CKind::False: return false;
    case CKind::TermAtom: {
      Subst s;
      for (const auto& [v, t] : val) s[v] = t;
      Term l = apply_subst(c.tl, s);
      Term r = apply_subst(c.tr, s);
      return c.trel == TermRel::Eq ? l == r : !(l == r);
    }
    case CKind::NatAtom:
      throw std::invalid_argument("nat atom under term universe");
    case CKind::And:
      for (const Constraint& k : c.kids)
        if (!eval_term_domain(k, val, universe)) return false;
      return true;
    case CKind::Or:
      for (const Constraint& k : c.kids)
        if (eval_term_domain(k, val, universe)) return true;
      return false;
    case CKind::Not:
      return !eval_term_domain(c.kids.front(), val, universe);
    case CKind::Forall:
    case CKind::Exists: {
      bool want_all = c.kind == CKind::Forall;
      // Odometer over the binders.
      std::vector<Var> bs = c.binders;
      std::vector<size_t> idx(bs.size(), 0);
      std::vector<std::optional<Term>> saved(bs.size());
      for (size_t i = 0; i < bs.size(); ++i) {
        auto it = val.find(bs[i]);
        if (it != val.end()) saved[i] = it->second;
      }
      bool result = want_all;
      for (;;) {
        for (size_t i = 0; i < bs.size(); ++i) val[bs[i]] = universe[idx[i]];
        bool one = eval_term_domain(c.kids.front(), val, universe);
        if (one != want_all) {
          result = one;
          break;
        }
        size_t i = bs.size();
        while (i > 0 && ++idx[i - 1] == universe.size()) idx[--i] = 0;
        if (i == 0) break;
      }
      for (size_t i = 0; i < bs.size(); ++i) {
        if (saved[i])
          val[bs[i]] = *saved[i];
        else
          val.erase(bs[i]);
      }
      return result;
    }
  }
  return false;
}

bool eval_nat_domain(const Constraint& c, std::map<Var, long long>& val,
                     long long bound) {
  switch (c.kind) {
    case CKind::True: return true;
    case CKind::False: return false;
    case CKind::NatAtom:
      return eval_nat_rel(eval_linexpr(c.nl, val), c.nrel,
                          eval_linexpr(c.nr, val));
    case CKind::TermAtom:
      throw std::invalid_argument("term atom under nat universe");
    case CKind::And:
      for (const Constraint& k : c.kids)
        if (!eval_nat_domain(k, val, bound)) return false;
      return true;
    case CKind::Or:
      for (const Constraint& k : c.kids)
        if (eval_nat_domain(k, val, bound)) return true;
      return false;
    case CKind::Not:
      return !eval_nat_domain(c.kids.front(), val, bound);
    case CKind::Forall:
    case CKind::Exists: {
      bool want_all = c.kind == CKind::Forall;
      std::vector<Var> bs = c.binders;
      std::vector<long long> idx(bs.size(), 0);
      std::vector<std::optional<long long>> saved(bs.size());
      for (size_t i = 0; i < bs.size(); ++i) {
        auto it = val.find(bs[i]);
        if (it != val.end()) saved[i] = it->second;
      }
      bool result = want_all;
      for (;;) {
        for (size_t i = 0; i < bs.size(); ++i) val[bs[i]] = idx[i];
        bool one = eval_nat_domain(c.kids.front(), val, bound);
        if (one != want_all) {
          result = one;
          break;
        }
        size_t i = bs.size();
        while (i > 0 && ++idx[i - 1] > bound) idx[--i] = 0;
        if (i == 0) break;
      }
      for (size_t i = 0; i < bs.size(); ++i) {
        if (saved[i])
          val[bs[i]] = *saved[i];
        else
          val.erase(bs[i]);
      }
      return result;
    }
  }
  return false;
}

}  // namespace

SolverVerdict oracle_sat(const Constraint& c, const GroundUniverse& u,
                         const Signature& sig) {
  std::set<Var> vs = vars_of(c);
  std::vector<Var> free(vs.begin(), vs.end());
  if (sig.domain == Domain::Term) {
    std::vector<Term> universe = enumerate_ground_terms(sig, u.term_depth);
    if (universe.empty())
      throw std::invalid_argument("empty term universe (no constants?)");
    std::map<Var, Term> val;
    std::vector<size_t> idx(free.size(), 0);
    for (;;) {
      for (size_t i = 0; i < free.size(); ++i) val[free[i]] = universe[idx[i]];
      if (eval_term_domain(c, val, universe)) return SolverVerdict::Sat;
      size_t i = free.size();
      while (i > 0 && ++idx[i - 1] == universe.size()) idx[--i] = 0;
      if (i == 0) break;
    }
    return SolverVerdict::Unsat;
  }
  std::map<Var, long long> val;
  std::vector<long long> idx(free.size(), 0);
  for (;;) {
    for (size_t i = 0; i < free.size(); ++i) val[free[i]] = idx[i];
    if (eval_nat_domain(c, val, u.nat_bound)) return SolverVerdict::Sat;
    size_t i = free.size();
    while (i > 0 && ++idx[i - 1] > u.nat_bound) idx[--i] = 0;
    if (i == 0) break;
  }
  return SolverVerdict::Unsat;
}

std::set<std::vector<Atom>> set_of(const State& q, const GroundUniverse& u,
                                   const Signature& sig) {
  std::set<std::vector<Atom>> out;
  std::set<Var> vs = vars_of(q);
  std::vector<Var> free(vs.begin(), vs.end());
  if (sig.domain == Domain::Term) {
    std::vector<Term> universe = enumerate_ground_terms(sig, u.term_depth);
    if (universe.empty())
      throw std::invalid_argument("empty term universe (no constants?)");
    std::map<Var, Term> val;
    std::vector<size_t> idx(free.size(), 0);
    for (;;) {
      Subst s;
      for (size_t i = 0; i < free.size(); ++i) {
        val[free[i]] = universe[idx[i]];
        s[free[i]] = universe[idx[i]];
      }
      if (eval_term_domain(q.constraint, val, universe)) {
        std::vector<Atom> atoms;
        for (const Atom& a : q.goal) atoms.push_back(apply_subst(a, s));
        out.insert(std::move(atoms));
      }
      size_t i = free.size();
      while (i > 0 && ++idx[i - 1] == universe.size()) idx[--i] = 0;
      if (i == 0) break;
    }
    return out;
  }
  std::map<Var, long long> val;
  std::vector<long long> idx(free.size(), 0);
  for (;;) {
    for (size_t i = 0; i < free.size(); ++i) val[free[i]] = idx[i];
    if (eval_nat_domain(q.constraint, val, u.nat_bound)) {
      std::vector<Atom> atoms;
      for (const Atom& a : q.goal) {
        Atom g{a.predicate, {}};
        for (const Term& t : a.args) {
          long long v = eval_linexpr(term_to_linexpr(t), val);
          g.args.push_back(Term::make_app(std::to_string(v)));
        }
        atoms.push_back(std::move(g));
      }
      out.insert(std::move(atoms));
    }
    size_t i = free.size();
    while (i > 0 && ++idx[i - 1] > u.nat_bound) idx[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

namespace {

struct FormulaStats {
  int max_term_depth = 1;
  int neg_literals = 0;
  int atoms = 0;
  long long numeral_sum = 0;
  long long max_coeff = 1;

  void scan(const Constraint& c) {
    switch (c.kind) {
      case CKind::TermAtom:
        max_term_depth = std::max({max_term_depth, c.tl.depth(), c.tr.depth()});
        ++atoms;
        if (c.trel == TermRel::Neq) ++neg_literals;
        return;
      case CKind::NatAtom: {
        ++atoms;
        long long m = std::max(std::abs(c.nl.constant),
                               std::abs(c.nr.constant));
        numeral_sum += m;
        for (const auto& [v, k] : c.nl.coeffs)
          max_coeff = std::max(max_coeff, std::abs(k));
        for (const auto& [v, k] : c.nr.coeffs)
          max_coeff = std::max(max_coeff, std::abs(k));
        return;
      }
      case CKind::Forall:
        ++neg_literals;
        [[fallthrough]];
      case CKind::And:
      case CKind::Or:
      case CKind::Not:
      case CKind::Exists:
        for (const Constraint& k : c.kids) scan(k);
        return;
      default:
        return;
    }
  }
};

}  // namespace

GroundUniverse sufficient_universe(const std::vector<Constraint>& cs,
                                   const Signature& sig) {
  FormulaStats st;
  for (const Constraint& c : cs) st.scan(c);
  if (sig.domain == Domain::Term)
    return GroundUniverse::terms(st.max_term_depth + st.neg_literals + 2);
  long long b = (st.numeral_sum + st.atoms + 2) * std::max(1LL, st.max_coeff);
  return GroundUniverse::nats(b);
}

bool bounded_equivalent(const State& a, const State& b,
                        const GroundUniverse& u, const Signature& sig) {
  return set_of(a, u, sig) == set_of(b, u, sig);
}

bool bounded_leq(const State& a, const State& b, const GroundUniverse& u,
                 const Signature& sig) {
  auto sa = set_of(a, u, sig);
  auto sb = set_of(b, u, sig);
  return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

bool bounded_equivalent(const Constraint& a, const Constraint& b,
                        const GroundUniverse& u, const Signature& sig) {
  std::set<Var> vs = vars_of(a);
  for (const Var& v : vars_of(b)) vs.insert(v);
  Atom probe{"_probe", {}};
  for (const Var& v : vs) probe.args.push_back(Term::make_var(v));
  State qa{a, {probe}};
  State qb{b, {probe}};
  return set_of(qa, u, sig) == set_of(qb, u, sig);
}

}  // namespace clpct
