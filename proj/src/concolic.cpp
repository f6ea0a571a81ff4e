#include "clpct/concolic.hpp"

#include <algorithm>

#include "clpct/solver.hpp"

namespace clpct {

const char* step_kind_text(StepKind k) {
  switch (k) {
    case StepKind::Backtrack: return "backtrack";
    case StepKind::Next: return "next";
    case StepKind::Choice: return "choice";
    case StepKind::Unfold: return "unfold";
  }
  return "?";
}

Constraint neg_constr(const ConstraintAtom& c, const ConstraintAtom& h,
                      const Signature& sig) {
  if (c.atom.predicate != h.atom.predicate ||
      c.atom.args.size() != h.atom.args.size())
    throw std::invalid_argument("neg_constr: predicate mismatch");
  std::vector<Constraint> body;
  for (size_t i = 0; i < c.atom.args.size(); ++i) {
    if (sig.domain == Domain::Term)
      body.push_back(Constraint::term_atom(c.atom.args[i], TermRel::Neq,
                                           h.atom.args[i]));
    else
      body.push_back(Constraint::nat_atom(term_to_linexpr(c.atom.args[i]),
                                          NatRel::Neq,
                                          term_to_linexpr(h.atom.args[i])));
  }
  if (!h.constraint.is_true()) body.push_back(Constraint::neg(h.constraint));
  std::set<Var> hv = vars_of(h);
  std::vector<Var> binders(hv.begin(), hv.end());
  return Constraint::forall(std::move(binders),
                            Constraint::disj(std::move(body)));
}

Constraint neg_constr(const ConstraintAtom& c,
                      const std::vector<ConstraintAtom>& hs,
                      const Signature& sig) {
  std::vector<Constraint> parts;
  parts.reserve(hs.size());
  for (const ConstraintAtom& h : hs) parts.push_back(neg_constr(c, h, sig));
  return Constraint::conj(std::move(parts));
}

namespace {

std::set<std::string> label_set(const std::vector<size_t>& idx,
                                const Program& p) {
  std::set<std::string> out;
  for (size_t i : idx) out.insert(p.rules[i].label);
  return out;
}

// Fresh head c-atoms for the rules in R_S \ R_Q, renamed apart from the
// symbolic state, in program order.
std::vector<ConstraintAtom> gamma_heads(const State& symbolic,
                                        const std::vector<size_t>& r_q,
                                        const std::vector<size_t>& r_s,
                                        const Program& p, FreshVars& supply) {
  supply.reserve_all(vars_of(symbolic));
  for (const Var& v : all_vars_of(symbolic.constraint)) supply.reserve(v);
  std::vector<ConstraintAtom> out;
  for (size_t i : r_s) {
    if (std::find(r_q.begin(), r_q.end(), i) != r_q.end()) continue;
    Rule copy = fresh_copy(p.rules[i], supply);
    out.push_back(copy.head_c_atom());
  }
  return out;
}

}  // namespace

std::vector<size_t> matching_concrete(const ConcolicPair& cs,
                                      const Program& p) {
  return rules_matching(cs.concrete, p);
}

std::pair<ConcolicPair, StepLabel> concolic_step_nd(const ConcolicPair& cs,
                                                    const Program& p,
                                                    const Rule& r,
                                                    FreshVars& supply) {
  std::vector<size_t> r_q = rules_matching(cs.concrete, p);
  std::vector<size_t> r_s = rules_matching(cs.symbolic, p);
  bool applicable = false;
  for (size_t i : r_q)
    if (p.rules[i].label == r.label) applicable = true;
  if (r_q.empty() || !applicable)
    throw std::invalid_argument("concolic_step_nd: rule not in R_Q");

  Constraint gamma = neg_constr(
      c_atom(cs.symbolic), gamma_heads(cs.symbolic, r_q, r_s, p, supply),
      p.signature);

  ConcolicPair next;
  next.concrete = derive_step(cs.concrete, r, p, supply);
  next.symbolic = derive_step(conjoin(cs.symbolic, gamma), r, p, supply);
  next.trace = cs.trace;
  next.trace.push_back(r.label);

  StepLabel label{cs.trace, label_set(r_q, p), label_set(r_s, p),
                  StepKind::Choice};
  return {std::move(next), std::move(label)};
}

DetConcolicState DetConcolicState::initial(const State& q, const State& i) {
  DetConcolicState ds;
  ds.concrete.push_back({q, std::nullopt});
  ds.symbolic.push_back({i, {}, std::nullopt});
  return ds;
}

DetStepResult det_step(const DetConcolicState& ds, const Program& p,
                       FreshVars& supply, bool first_solution) {
  DetStepResult out;
  if (ds.empty()) {
    out.halted = true;
    out.reason = HaltReason::EmptyStacks;
    return out;
  }
  const ConcreteEntry& qh = ds.concrete.front();
  const SymbolicEntry& sh = ds.symbolic.front();
  bool tail = ds.concrete.size() > 1;

  auto popped = [&]() {
    DetConcolicState next;
    next.concrete.assign(ds.concrete.begin() + 1, ds.concrete.end());
    next.symbolic.assign(ds.symbolic.begin() + 1, ds.symbolic.end());
    return next;
  };

  // next: solved head. Without a tail (or in first-solution mode) the
  // execution is finished instead.
  if (qh.state.goal.empty()) {
    if (!tail || first_solution) {
      out.halted = true;
      out.reason = HaltReason::SolvedAllOut;
      return out;
    }
    out.state = popped();
    out.label = {sh.trace, {}, {}, StepKind::Next};
    return out;
  }

  // unfold: head tagged by a previous choice.
  if (qh.tag) {
    const Rule* r = p.rule_by_label(*qh.tag);
    if (!r) throw std::logic_error("unknown rule tag " + *qh.tag);
    DetConcolicState next = popped();
    ConcreteEntry qe{derive_step(qh.state, *r, p, supply), std::nullopt};
    Trace t = sh.trace;
    t.push_back(r->label);
    SymbolicEntry se{derive_step(sh.state, *r, p, supply), std::move(t),
                     std::nullopt};
    next.concrete.insert(next.concrete.begin(), std::move(qe));
    next.symbolic.insert(next.symbolic.begin(), std::move(se));
    out.state = std::move(next);
    out.label = {sh.trace, {}, {}, StepKind::Unfold};
    return out;
  }

  std::vector<size_t> r_q = rules_matching(qh.state, p);
  if (r_q.empty()) {
    // backtrack, or a failed execution when there is nothing to resume.
    if (!tail) {
      out.halted = true;
      out.reason = HaltReason::FailedNoBacktrack;
      return out;
    }
    std::vector<size_t> r_s = rules_matching(sh.state, p);
    out.state = popped();
    out.label = {sh.trace, {}, label_set(r_s, p), StepKind::Backtrack};
    return out;
  }

  // choice: replace the head pair by one rule-tagged copy per matching
  // rule; every symbolic copy gets gamma conjoined.
  std::vector<size_t> r_s = rules_matching(sh.state, p);
  Constraint gamma = neg_constr(
      c_atom(sh.state), gamma_heads(sh.state, r_q, r_s, p, supply),
      p.signature);
  State strengthened =
      gamma.is_true() ? sh.state : conjoin(sh.state, gamma);

  DetConcolicState next = popped();
  for (size_t k = r_q.size(); k-- > 0;) {
    const std::string& label = p.rules[r_q[k]].label;
    next.concrete.insert(next.concrete.begin(),
                         ConcreteEntry{qh.state, label});
    next.symbolic.insert(next.symbolic.begin(),
                         SymbolicEntry{strengthened, sh.trace, label});
  }
  out.state = std::move(next);
  out.label = {sh.trace, label_set(r_q, p), label_set(r_s, p),
               StepKind::Choice};
  return out;
}

}  // namespace clpct
