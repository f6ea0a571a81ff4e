#include "clpct/term.hpp"

#include <algorithm>

namespace clpct {

bool Term::operator<(const Term& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (is_var()) return var < o.var;
  if (functor != o.functor) return functor < o.functor;
  return args < o.args;
}

bool Term::is_ground() const {
  if (is_var()) return false;
  return std::all_of(args.begin(), args.end(),
                     [](const Term& t) { return t.is_ground(); });
}

int Term::depth() const {
  if (is_var()) return 1;
  int d = 0;
  for (const Term& a : args) d = std::max(d, a.depth());
  return d + 1;
}

Term apply_subst(const Term& t, const Subst& s) {
  if (t.is_var()) {
    auto it = s.find(t.var);
    if (it == s.end()) return t;
    return it->second;
  }
  Term out = Term::make_app(t.functor);
  out.args.reserve(t.args.size());
  for (const Term& a : t.args) out.args.push_back(apply_subst(a, s));
  return out;
}

Atom apply_subst(const Atom& a, const Subst& s) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(apply_subst(t, s));
  return out;
}

bool occurs_in(const Var& v, const Term& t) {
  if (t.is_var()) return t.var == v;
  for (const Term& a : t.args)
    if (occurs_in(v, a)) return true;
  return false;
}

namespace {

// Binds v := t into s, composing so s stays idempotent.
void compose_binding(Subst& s, const Var& v, const Term& t) {
  Subst one{{v, t}};
  for (auto& [w, u] : s) u = apply_subst(u, one);
  s[v] = t;
}

}  // namespace

std::optional<Subst> unify(std::vector<std::pair<Term, Term>> eqs) {
  Subst s;
  while (!eqs.empty()) {
    auto [l, r] = eqs.back();
    eqs.pop_back();
    l = apply_subst(l, s);
    r = apply_subst(r, s);
    if (l == r) continue;
    if (l.is_var()) {
      if (occurs_in(l.var, r)) return std::nullopt;
      compose_binding(s, l.var, r);
      continue;
    }
    if (r.is_var()) {
      if (occurs_in(r.var, l)) return std::nullopt;
      compose_binding(s, r.var, l);
      continue;
    }
    if (l.functor != r.functor || l.args.size() != r.args.size())
      return std::nullopt;
    for (size_t i = 0; i < l.args.size(); ++i)
      eqs.emplace_back(l.args[i], r.args[i]);
  }
  return s;
}

void collect_vars(const Term& t, std::set<Var>& out) {
  if (t.is_var()) {
    out.insert(t.var);
    return;
  }
  for (const Term& a : t.args) collect_vars(a, out);
}

void collect_vars(const Atom& a, std::set<Var>& out) {
  for (const Term& t : a.args) collect_vars(t, out);
}

std::set<Var> vars_of(const Term& t) {
  std::set<Var> out;
  collect_vars(t, out);
  return out;
}

std::set<Var> vars_of(const Atom& a) {
  std::set<Var> out;
  collect_vars(a, out);
  return out;
}

}  // namespace clpct
