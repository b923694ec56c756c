// Disjunctive normal form for the global-disjunction fragment with full
// negation: every such formula is equivalent to a global disjunction of
// classical formulas, built by structural induction.  Also: flattening of
// Harrop formulas to classical equivalents, and an entailment decision
// procedure that reduces team entailment to classical entailment between
// disjuncts.

#ifndef TEAMLOG_NORMAL_FORM_HPP
#define TEAMLOG_NORMAL_FORM_HPP

#include "teamlog/team.hpp"

namespace teamlog {

class NormalFormError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultDnfLimit = 4096;

// Classical formulas a1..am with a1 \/ ... \/ am equivalent to phi.
// Induction: atoms are singletons; & takes the pairwise-conjunction product
// in row-major order; | distributes pairwise; \/ concatenates; ~ collapses
// the child's disjuncts into one conjunction of negations; -> rewrites
// (\/ ai) -> chi as the conjunction of ~ai | chi and recurses.
// Disjunct lists are deduplicated up to syntactic equality, first
// occurrence kept.  Throws NormalFormError on dependence/inclusion atoms
// or when an intermediate list exceeds max_disjuncts.
std::vector<Formula> to_dnf(const Formula& phi, std::size_t max_disjuncts = kDefaultDnfLimit);

// The \/-fold of to_dnf(phi), right-associated (single disjunct left bare).
Formula dnf_formula(const Formula& phi, std::size_t max_disjuncts = kDefaultDnfLimit);

// Replaces every \/ in a Harrop formula with |; the result is classical and
// team-equivalent to the input.  Throws NormalFormError unless the input is
// Harrop and free of ->, dependence and inclusion atoms.
Formula harrop_flatten(const Formula& delta);

// Decides psi |= phi: computes both DNFs and checks that every disjunct of
// psi classically entails some disjunct of phi (valuation sweep over the
// shared universe).  Agrees with entails() on the supported fragment.
bool decide_entailment_dnf(const Formula& psi, const Formula& phi);

}  // namespace teamlog

#endif
