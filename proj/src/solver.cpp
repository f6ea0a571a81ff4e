#include <mutex>

#include "clpct/solver.hpp"

namespace clpct {

namespace {
std::mutex g_logger_mutex;
SolvLogger g_logger;

bool mentions_term_atoms(const Constraint& c) {
  if (c.kind == CKind::TermAtom) return true;
  for (const Constraint& k : c.kids)
    if (mentions_term_atoms(k)) return true;
  return false;
}

bool mentions_nat_atoms(const Constraint& c) {
  if (c.kind == CKind::NatAtom) return true;
  for (const Constraint& k : c.kids)
    if (mentions_nat_atoms(k)) return true;
  return false;
}
}  // namespace

void set_solv_logger(SolvLogger logger) {
  std::lock_guard<std::mutex> lock(g_logger_mutex);
  g_logger = std::move(logger);
}

SolverVerdict solv(const Constraint& c, const Signature& sig) {
  if (sig.domain == Domain::Term && mentions_nat_atoms(c))
    throw std::invalid_argument("nat atom under a Term signature");
  if (sig.domain == Domain::Nat && mentions_term_atoms(c))
    throw std::invalid_argument("term atom under a Nat signature");
  SolverVerdict v = sig.domain == Domain::Term
                        ? detail::solv_term_domain(c, sig)
                        : detail::solv_nat_domain(c, sig);
  {
    std::lock_guard<std::mutex> lock(g_logger_mutex);
    if (g_logger) g_logger(c, v);
  }
  return v;
}

bool is_sat(const Constraint& c, const Signature& sig) {
  return solv(c, sig) == SolverVerdict::Sat;
}

}  // namespace clpct
