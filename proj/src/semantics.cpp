#include "clpct/semantics.hpp"

#include "clpct/solver.hpp"

namespace clpct {

std::string render_trace(const Trace& t) {
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ".";
    out += t[i];
  }
  return out.empty() ? "<empty>" : out;
}

const char* outcome_text(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Failure: return "failure";
    case Outcome::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

State derive_step(const State& q, const Rule& r, const Program& p,
                  FreshVars& supply) {
  if (q.goal.empty())
    throw std::invalid_argument("derive_step: empty goal");
  supply.reserve_all(vars_of(q));
  for (const Var& v : all_vars_of(q.constraint)) supply.reserve(v);
  Rule copy = fresh_copy(r, supply);
  const Atom& call = q.goal.front();
  if (copy.head.predicate != call.predicate ||
      copy.head.args.size() != call.args.size())
    throw std::invalid_argument("derive_step: rule does not match");

  std::vector<Constraint> parts;
  for (size_t i = 0; i < call.args.size(); ++i) {
    if (p.signature.domain == Domain::Term)
      parts.push_back(Constraint::term_atom(copy.head.args[i], TermRel::Eq,
                                            call.args[i]));
    else
      parts.push_back(Constraint::nat_atom(term_to_linexpr(copy.head.args[i]),
                                           NatRel::Eq,
                                           term_to_linexpr(call.args[i])));
  }
  parts.push_back(copy.guard);
  parts.push_back(q.constraint);
  Constraint next = Constraint::conj(std::move(parts));
  if (solv(next, p.signature) == SolverVerdict::Unsat)
    throw std::invalid_argument("derive_step: rule does not match");

  State out;
  out.constraint = std::move(next);
  out.goal = copy.body;
  out.goal.insert(out.goal.end(), q.goal.begin() + 1, q.goal.end());
  return out;
}

namespace {

void explore(const State& q, const Program& p, FreshVars& supply, int depth,
             int budget, std::vector<DerivationStep>& steps,
             std::vector<DerivationRecord>& out) {
  if (q.goal.empty()) {
    out.push_back({steps, Outcome::Success, q});
    return;
  }
  std::vector<size_t> matching = rules_matching(q, p);
  if (matching.empty()) {
    out.push_back({steps, Outcome::Failure, q});
    return;
  }
  if (depth >= budget) {
    out.push_back({steps, Outcome::BudgetExhausted, q});
    return;
  }
  for (size_t idx : matching) {
    const Rule& r = p.rules[idx];
    State next = derive_step(q, r, p, supply);
    steps.push_back({q, r.label, next});
    explore(next, p, supply, depth + 1, budget, steps, out);
    steps.pop_back();
  }
}

}  // namespace

std::vector<DerivationRecord> run_standard(const State& q0, const Program& p,
                                           int budget) {
  std::vector<DerivationRecord> out;
  if (budget < 1) throw std::invalid_argument("budget must be positive");
  if (solv(q0.constraint, p.signature) == SolverVerdict::Unsat) return out;
  FreshVars supply;
  supply.reserve_all(vars_of(q0));
  std::vector<DerivationStep> steps;
  explore(q0, p, supply, 0, budget, steps, out);
  return out;
}

}  // namespace clpct
