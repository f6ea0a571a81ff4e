#include <algorithm>
#include <cassert>
#include <numeric>

#include "clpct/solver.hpp"

// Linear naturals backend. Quantified negative clauses are reduced by
// substitution on their equations (rule heads bind quantified variables),
// then the quantifier-free remainder goes through DNF; each disjunct is a
// conjunction of linear constraints decided by Fourier-Motzkin elimination
// over the rationals with branch-and-bound on fractional sample points,
// all variables bounded below by 0.

namespace clpct {
namespace {

constexpr int kMaxDisjuncts = 20000;
constexpr int kMaxBBNodes = 20000;

using Aff = std::pair<std::map<Var, long long>, long long>;  // sum + const

Aff aff_of(const LinExpr& e) {
  Aff a;
  a.second = e.constant;
  for (const auto& [v, c] : e.coeffs) a.first[v] = c;
  return a;
}

Aff aff_sub(const Aff& l, const Aff& r) {
  Aff out = l;
  out.second -= r.second;
  for (const auto& [v, c] : r.first) {
    out.first[v] -= c;
    if (out.first[v] == 0) out.first.erase(v);
  }
  return out;
}

Aff aff_add_const(Aff a, long long k) {
  a.second += k;
  return a;
}

Aff aff_neg(const Aff& a) {
  Aff out;
  out.second = -a.second;
  for (const auto& [v, c] : a.first) out.first[v] = -c;
  return out;
}

// An atom is aff >= 0 or aff = 0.
struct NAtom {
  Aff aff;
  bool is_eq = false;
};

struct NForm {
  enum K { True, False, And, Or, Lit } k = True;
  std::vector<NForm> kids;
  NAtom atom;

  static NForm truth() { return NForm{}; }
  static NForm falsity() {
    NForm f;
    f.k = False;
    return f;
  }
  static NForm lit(NAtom a) {
    NForm f;
    f.k = Lit;
    f.atom = std::move(a);
    return f;
  }
  static NForm conj(std::vector<NForm> ks) {
    std::vector<NForm> flat;
    for (NForm& f : ks) {
      if (f.k == True) continue;
      if (f.k == False) return falsity();
      if (f.k == And)
        for (NForm& g : f.kids) flat.push_back(std::move(g));
      else
        flat.push_back(std::move(f));
    }
    if (flat.empty()) return truth();
    if (flat.size() == 1) return std::move(flat.front());
    NForm f;
    f.k = And;
    f.kids = std::move(flat);
    return f;
  }
  static NForm disj(std::vector<NForm> ks) {
    std::vector<NForm> flat;
    for (NForm& f : ks) {
      if (f.k == False) continue;
      if (f.k == True) return truth();
      if (f.k == Or)
        for (NForm& g : f.kids) flat.push_back(std::move(g));
      else
        flat.push_back(std::move(f));
    }
    if (flat.empty()) return falsity();
    if (flat.size() == 1) return std::move(flat.front());
    NForm f;
    f.k = Or;
    f.kids = std::move(flat);
    return f;
  }
};

// Small exact rational with overflow guards.
struct Rat {
  long long n = 0, d = 1;

  Rat() = default;
  Rat(long long num, long long den = 1) : n(num), d(den) { norm(); }

  void norm() {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    long long g = std::gcd(std::abs(n), d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }

  static long long checked(__int128 x) {
    if (x > INT64_MAX / 4 || x < INT64_MIN / 4)
      throw UnsupportedFormulaError("rational overflow in nat solver");
    return static_cast<long long>(x);
  }

  Rat operator+(const Rat& o) const {
    return Rat(checked(static_cast<__int128>(n) * o.d +
                       static_cast<__int128>(o.n) * d),
               checked(static_cast<__int128>(d) * o.d));
  }
  Rat operator-(const Rat& o) const {
    return Rat(checked(static_cast<__int128>(n) * o.d -
                       static_cast<__int128>(o.n) * d),
               checked(static_cast<__int128>(d) * o.d));
  }
  Rat operator*(const Rat& o) const {
    return Rat(checked(static_cast<__int128>(n) * o.n),
               checked(static_cast<__int128>(d) * o.d));
  }
  Rat operator/(const Rat& o) const {
    if (o.n == 0) throw std::invalid_argument("rational division by zero");
    return Rat(checked(static_cast<__int128>(n) * o.d),
               checked(static_cast<__int128>(d) * o.n));
  }
  bool operator<(const Rat& o) const {
    return static_cast<__int128>(n) * o.d < static_cast<__int128>(o.n) * d;
  }
  bool operator<=(const Rat& o) const { return !(o < *this); }
  bool operator==(const Rat& o) const { return n == o.n && d == o.d; }

  bool is_integer() const { return d == 1; }
  long long floor() const {
    long long q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
  }
  long long ceil() const { return -Rat(-n, d).floor(); }
};

// A rational inequality sum(coeffs * x) + c >= 0.
struct RIneq {
  std::map<Var, Rat> coeffs;
  Rat c;
};

class NatSolver {
 public:
  explicit NatSolver(const Signature& sig) : sig_(sig) {
    (void)sig_;
  }

  bool sat(const Constraint& c) {
    for (const Var& v : all_vars_of(c)) used_.reserve(v);
    NForm f = build(c, true);
    std::vector<std::vector<NAtom>> disjuncts;
    std::vector<NAtom> path;
    dnf(f, disjuncts, path);
    for (const auto& d : disjuncts)
      if (disjunct_feasible(d)) return true;
    return false;
  }

 private:
  const Signature& sig_;
  FreshVars used_;

  static NAtom ge0(Aff a) { return NAtom{std::move(a), false}; }
  static NAtom eq0(Aff a) { return NAtom{std::move(a), true}; }

  // NNF with the relation under polarity folded in.
  NForm build(const Constraint& c, bool pos) {
    switch (c.kind) {
      case CKind::True:
        return pos ? NForm::truth() : NForm::falsity();
      case CKind::False:
        return pos ? NForm::falsity() : NForm::truth();
      case CKind::TermAtom:
        throw std::invalid_argument("term atom in nat-domain formula");
      case CKind::NatAtom: {
        NatRel r = pos ? c.nrel : negate_rel(c.nrel);
        Aff d = aff_sub(aff_of(c.nl), aff_of(c.nr));  // lhs - rhs
        switch (r) {
          case NatRel::Lt:  // d < 0  <=>  -d - 1 >= 0
            return NForm::lit(ge0(aff_add_const(aff_neg(d), -1)));
          case NatRel::Le:
            return NForm::lit(ge0(aff_neg(d)));
          case NatRel::Ge:
            return NForm::lit(ge0(d));
          case NatRel::Gt:
            return NForm::lit(ge0(aff_add_const(d, -1)));
          case NatRel::Eq:
            return NForm::lit(eq0(d));
          case NatRel::Neq:
            return NForm::disj(
                {NForm::lit(ge0(aff_add_const(d, -1))),
                 NForm::lit(ge0(aff_add_const(aff_neg(d), -1)))});
        }
        return NForm::falsity();
      }
      case CKind::Not:
        return build(c.kids.front(), !pos);
      case CKind::And: {
        std::vector<NForm> ks;
        for (const Constraint& k : c.kids) ks.push_back(build(k, pos));
        return pos ? NForm::conj(std::move(ks)) : NForm::disj(std::move(ks));
      }
      case CKind::Or: {
        std::vector<NForm> ks;
        for (const Constraint& k : c.kids) ks.push_back(build(k, pos));
        return pos ? NForm::disj(std::move(ks)) : NForm::conj(std::move(ks));
      }
      case CKind::Exists:
      case CKind::Forall: {
        bool exists_like = (c.kind == CKind::Exists) == pos;
        Subst ren;
        std::vector<Var> fresh;
        for (const Var& b : c.binders) {
          Var nb = used_.fresh(b.name);
          fresh.push_back(nb);
          ren[b] = Term::make_var(nb);
        }
        Constraint body = subst_free(c.kids.front(), ren);
        if (exists_like) return build(body, pos);
        // ~exists fresh (body'): eliminate the bound variables by
        // substitution on the equations of each body disjunct; rule
        // heads always bind them that way in the generated fragment.
        NForm inner = build(body, !pos);
        return eliminate_neg_exists(fresh, inner);
      }
    }
    return NForm::falsity();
  }

  NForm eliminate_neg_exists(const std::vector<Var>& binders, NForm inner) {
    std::vector<std::vector<NAtom>> disjuncts;
    std::vector<NAtom> path;
    dnf(inner, disjuncts, path);
    std::vector<NForm> conjuncts;
    for (auto atoms : disjuncts) {
      std::set<Var> remaining(binders.begin(), binders.end());
      // Substitute binder variables out via unit-coefficient equations.
      bool progress = true;
      while (progress) {
        progress = false;
        for (size_t i = 0; i < atoms.size() && !progress; ++i) {
          if (!atoms[i].is_eq) continue;
          for (const auto& [v, k] : atoms[i].aff.first) {
            if (!remaining.count(v)) continue;
            if (k != 1 && k != -1) continue;
            // v = repl with repl = (-aff + k*v) / k
            Aff repl = atoms[i].aff;
            repl.first.erase(v);
            if (k == 1) repl = aff_neg(repl);
            std::vector<NAtom> next;
            for (size_t j = 0; j < atoms.size(); ++j) {
              if (j == i) continue;
              next.push_back(subst_atom(atoms[j], v, repl));
            }
            // The eliminated variable is a natural: repl >= 0.
            next.push_back(ge0(repl));
            atoms = std::move(next);
            remaining.erase(v);
            progress = true;
            break;
          }
        }
      }
      bool leftover = false;
      for (const NAtom& a : atoms)
        for (const auto& [v, k] : a.aff.first)
          if (remaining.count(v)) leftover = true;
      if (leftover)
        throw UnsupportedFormulaError(
            "quantified nat variable not bound by an equation");
      // ~(/\ atoms): negate each atom and disjoin.
      std::vector<NForm> negs;
      for (const NAtom& a : atoms) {
        if (a.is_eq) {
          negs.push_back(NForm::lit(ge0(aff_add_const(a.aff, -1))));
          negs.push_back(NForm::lit(ge0(aff_add_const(aff_neg(a.aff), -1))));
        } else {
          // ~(aff >= 0) <=> -aff - 1 >= 0
          negs.push_back(NForm::lit(ge0(aff_add_const(aff_neg(a.aff), -1))));
        }
      }
      conjuncts.push_back(NForm::disj(std::move(negs)));
    }
    return NForm::conj(std::move(conjuncts));
  }

  static NAtom subst_atom(const NAtom& a, const Var& v, const Aff& repl) {
    auto it = a.aff.first.find(v);
    if (it == a.aff.first.end()) return a;
    long long k = it->second;
    NAtom out = a;
    out.aff.first.erase(v);
    out.aff.second += k * repl.second;
    for (const auto& [w, c] : repl.first) {
      out.aff.first[w] += k * c;
      if (out.aff.first[w] == 0) out.aff.first.erase(w);
    }
    return out;
  }

  static void dnf(const NForm& f, std::vector<std::vector<NAtom>>& out,
                  std::vector<NAtom>& path) {
    switch (f.k) {
      case NForm::True:
        out.push_back(path);
        return;
      case NForm::False:
        return;
      case NForm::Lit:
        path.push_back(f.atom);
        out.push_back(path);
        path.pop_back();
        return;
      case NForm::Or:
        for (const NForm& k : f.kids) {
          dnf(k, out, path);
          if (out.size() > kMaxDisjuncts)
            throw UnsupportedFormulaError("DNF blowup in nat solver");
        }
        return;
      case NForm::And: {
        std::vector<std::vector<NAtom>> acc{{}};
        for (const NForm& k : f.kids) {
          std::vector<std::vector<NAtom>> part;
          std::vector<NAtom> p2;
          dnf(k, part, p2);
          std::vector<std::vector<NAtom>> next;
          for (const auto& a : acc)
            for (const auto& b : part) {
              next.push_back(a);
              next.back().insert(next.back().end(), b.begin(), b.end());
              if (next.size() > kMaxDisjuncts)
                throw UnsupportedFormulaError("DNF blowup in nat solver");
            }
          acc = std::move(next);
          if (acc.empty()) return;
        }
        for (auto& d : acc) {
          std::vector<NAtom> full = path;
          full.insert(full.end(), d.begin(), d.end());
          out.push_back(std::move(full));
        }
        return;
      }
    }
  }

  bool disjunct_feasible(std::vector<NAtom> atoms) {
    // Equalities: gcd reduction and unit-coefficient substitution keep
    // the problem integer-equivalent before the relaxation.
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t i = 0; i < atoms.size(); ++i) {
        NAtom& a = atoms[i];
        if (!a.is_eq) continue;
        if (a.aff.first.empty()) {
          if (a.aff.second != 0) return false;
          atoms.erase(atoms.begin() + i);
          progress = true;
          break;
        }
        long long g = 0;
        for (const auto& [v, k] : a.aff.first) g = std::gcd(g, std::abs(k));
        if (g > 1) {
          if (a.aff.second % g != 0) return false;
          for (auto& [v, k] : a.aff.first) k /= g;
          a.aff.second /= g;
        }
        for (const auto& [v, k] : a.aff.first) {
          if (k != 1 && k != -1) continue;
          Aff repl = a.aff;
          repl.first.erase(v);
          if (k == 1) repl = aff_neg(repl);
          std::vector<NAtom> next;
          for (size_t j = 0; j < atoms.size(); ++j) {
            if (j == i) continue;
            next.push_back(subst_atom(atoms[j], v, repl));
          }
          next.push_back(ge0(repl));
          atoms = std::move(next);
          progress = true;
          break;
        }
        if (progress) break;
      }
    }

    // Remaining system over rationals: equalities as inequality pairs.
    std::vector<RIneq> sys;
    std::set<Var> vars;
    for (const NAtom& a : atoms) {
      RIneq r;
      for (const auto& [v, k] : a.aff.first) {
        r.coeffs[v] = Rat(k);
        vars.insert(v);
      }
      r.c = Rat(a.aff.second);
      if (a.aff.first.empty()) {
        if (a.is_eq ? a.aff.second != 0 : a.aff.second < 0) return false;
        continue;
      }
      sys.push_back(r);
      if (a.is_eq) {
        RIneq n;
        for (const auto& [v, k] : a.aff.first) n.coeffs[v] = Rat(-k);
        n.c = Rat(-a.aff.second);
        sys.push_back(n);
      }
    }
    for (const Var& v : vars) {
      RIneq nn;
      nn.coeffs[v] = Rat(1);
      nn.c = Rat(0);
      sys.push_back(nn);
    }
    int nodes = 0;
    return branch_and_bound(sys, {vars.begin(), vars.end()}, nodes);
  }

  struct Layer {
    Var v;
    std::vector<std::pair<std::map<Var, Rat>, Rat>> lowers;  // v >= expr
    std::vector<std::pair<std::map<Var, Rat>, Rat>> uppers;  // v <= expr
  };

  // Fourier-Motzkin: returns rational feasibility and a sample point
  // that prefers integral coordinates.
  static bool fm_sample(const std::vector<RIneq>& sys,
                        const std::vector<Var>& vars,
                        std::map<Var, Rat>& sample) {
    std::vector<RIneq> cur = sys;
    std::vector<Layer> layers;
    for (const Var& v : vars) {
      Layer layer;
      layer.v = v;
      std::vector<RIneq> next;
      std::vector<std::pair<std::map<Var, Rat>, Rat>> lowers, uppers;
      for (const RIneq& r : cur) {
        auto it = r.coeffs.find(v);
        if (it == r.coeffs.end() || it->second == Rat(0)) {
          next.push_back(r);
          continue;
        }
        // a*v + rest + c >= 0
        Rat a = it->second;
        std::map<Var, Rat> rest;
        for (const auto& [w, k] : r.coeffs)
          if (!(w == v)) rest[w] = k;
        if (Rat(0) < a) {
          // v >= (-rest - c) / a
          std::map<Var, Rat> e;
          for (auto& [w, k] : rest) e[w] = Rat(0) - k / a;
          lowers.emplace_back(std::move(e), (Rat(0) - r.c) / a);
        } else {
          Rat na = Rat(0) - a;
          std::map<Var, Rat> e;
          for (auto& [w, k] : rest) e[w] = k / na;
          uppers.emplace_back(std::move(e), r.c / na);
        }
      }
      for (const auto& [le, lc] : lowers)
        for (const auto& [ue, uc] : uppers) {
          // upper - lower >= 0
          RIneq r;
          for (const auto& [w, k] : ue) r.coeffs[w] = k;
          for (const auto& [w, k] : le) {
            r.coeffs[w] = (r.coeffs.count(w) ? r.coeffs[w] : Rat(0)) - k;
            if (r.coeffs[w] == Rat(0)) r.coeffs.erase(w);
          }
          r.c = uc - lc;
          if (r.coeffs.empty()) {
            if (r.c < Rat(0)) return false;
          } else {
            next.push_back(std::move(r));
          }
        }
      layer.lowers = std::move(lowers);
      layer.uppers = std::move(uppers);
      layers.push_back(std::move(layer));
      cur = std::move(next);
    }
    for (const RIneq& r : cur) {
      assert(r.coeffs.empty());
      if (r.c < Rat(0)) return false;
    }
    // Back-substitution, innermost variable last.
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
      auto eval = [&](const std::pair<std::map<Var, Rat>, Rat>& e) {
        Rat out = e.second;
        for (const auto& [w, k] : e.first) out = out + k * sample.at(w);
        return out;
      };
      Rat lo(0);
      bool has_hi = false;
      Rat hi(0);
      for (const auto& l : it->lowers) {
        Rat v = eval(l);
        if (lo < v) lo = v;
      }
      for (const auto& u : it->uppers) {
        Rat v = eval(u);
        if (!has_hi || v < hi) {
          hi = v;
          has_hi = true;
        }
      }
      Rat pick = Rat(lo.ceil());
      if (has_hi && hi < pick) pick = lo;  // no integer in range; go rational
      sample[it->v] = pick;
    }
    return true;
  }

  static bool branch_and_bound(const std::vector<RIneq>& sys,
                               std::vector<Var> vars, int& nodes) {
    if (++nodes > kMaxBBNodes)
      throw UnsupportedFormulaError("branch-and-bound node limit");
    std::map<Var, Rat> sample;
    if (!fm_sample(sys, vars, sample)) return false;
    for (const Var& v : vars) {
      const Rat& x = sample.at(v);
      if (x.is_integer()) continue;
      // Branch v <= floor(x) and v >= floor(x) + 1.
      long long f = x.floor();
      std::vector<RIneq> left = sys;
      RIneq up;
      up.coeffs[v] = Rat(-1);
      up.c = Rat(f);
      left.push_back(up);
      if (branch_and_bound(left, vars, nodes)) return true;
      std::vector<RIneq> right = sys;
      RIneq lo;
      lo.coeffs[v] = Rat(1);
      lo.c = Rat(-(f + 1));
      right.push_back(lo);
      return branch_and_bound(right, vars, nodes);
    }
    return true;  // integral sample found
  }
};

}  // namespace

SolverVerdict detail::solv_nat_domain(const Constraint& c,
                                      const Signature& sig) {
  NatSolver solver(sig);
  return solver.sat(c) ? SolverVerdict::Sat : SolverVerdict::Unsat;
}

}  // namespace clpct
