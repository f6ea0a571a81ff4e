#pragma once

#include <string>
#include <vector>

#include "clpct/program.hpp"

namespace clpct {

/// Sequence of rule labels identifying an execution path.
using Trace = std::vector<std::string>;

std::string render_trace(const Trace& t);

enum class Outcome { Success, Failure, BudgetExhausted };

const char* outcome_text(Outcome o);

struct DerivationStep {
  State before;
  std::string rule_label;
  State after;
};

struct DerivationRecord {
  std::vector<DerivationStep> steps;
  Outcome outcome = Outcome::Success;
  State final;

  Trace trace() const {
    Trace t;
    for (const DerivationStep& s : steps) t.push_back(s.rule_label);
    return t;
  }
};

/// One derivation step of q with respect to rule r: resolves the leftmost
/// atom against a fresh copy, conjoining the head equations and guard.
/// Throws std::invalid_argument ("rule does not match") when r is not in
/// rules_matching(q, p).
State derive_step(const State& q, const Rule& r, const Program& p,
                  FreshVars& supply);

/// Depth-first, program-order exploration of all finished derivations
/// from q0, each path truncated at `budget` steps. An unsatisfiable
/// initial constraint yields no derivations.
std::vector<DerivationRecord> run_standard(const State& q0, const Program& p,
                                           int budget);

}  // namespace clpct
