// Characteristic-formula constructions and per-fragment expressive
// completeness synthesis: given a team property of the right closure class,
// build a defining formula in the fragment and verify it by extension sweep.
//
// Aggregate conventions: disjuncts/conjuncts follow ascending bit-encoding
// order and fold right-associatively; an empty conjunction is ~_|_, an empty
// disjunction (local or global) is _|_.

#ifndef TEAMLOG_SYNTHESIS_HPP
#define TEAMLOG_SYNTHESIS_HPP

#include "teamlog/team.hpp"

namespace teamlog {

class SynthesisError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conjunction of literals defining a single valuation: u satisfies it iff u = v.
Formula chi_v(const Universe& u, Valuation v);

// Classical formula whose extension is the powerset of t (disjunction of
// chi_v over members, and the complement-based conjunctive variant).
Formula chi_t_disjunctive(const Universe& u, TeamMask t);
Formula chi_t_conjunctive(const Universe& u, TeamMask t);

// Primitive inclusion atom pinning the row v: a nonempty s satisfies it iff
// v is a member of s.  Requires at least one variable.
Formula iota_v(const Universe& u, Valuation v);

// s satisfies iota_t iff t is a subset of s or s is empty.
Formula iota_t(const Universe& u, TeamMask t);

// chi_t & iota_t: extension is exactly {t, empty}.
Formula fix_team(const Universe& u, TeamMask t);

// k-fold local disjunction of the all-variables constancy block; satisfied
// exactly by teams of size at most k.  k = 0 yields _|_.
Formula mu_k(const Universe& u, std::size_t k);

// s satisfies rho_t iff t is not a subset of s; t must be nonempty.
Formula rho_t(const Universe& u, TeamMask t);

// s satisfies sigma_t iff s is not a subset of t or s is empty; t nonempty.
Formula sigma_t(const Universe& u, TeamMask t);

// rho_t | sigma_t: satisfied exactly by the teams different from t.
Formula psi_t(const Universe& u, TeamMask t);

struct SynthesisResult {
  Formula formula;
  Fragment fragment;
  bool verified = false;
  TeamProperty target;
};

// Builds the fragment's characteristic formula for T.  Throws SynthesisError
// (with a witness in the message) when T violates the fragment's
// closure-class precondition or the fragment has no known construction.
SynthesisResult synth(const TeamProperty& T, Fragment fragment);

}  // namespace teamlog

#endif
