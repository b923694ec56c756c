// Closure-class checks on team properties: empty-team membership, downward
// closure, union closure, flatness.  Each checker can report the witness
// teams of a failure.

#ifndef TEAMLOG_CLOSURE_HPP
#define TEAMLOG_CLOSURE_HPP

#include <optional>

#include "teamlog/team.hpp"

namespace teamlog {

// Counterexample to a closure condition; meaning depends on the check:
//   downward: a in T, b subseteq a, b not in T
//   union:    a, b in T, a|b not in T
//   flat:     a is a team on which membership and pointwise membership differ
struct ClosureWitness {
  TeamMask a = 0;
  TeamMask b = 0;
};

bool has_empty(const TeamProperty& T);
bool is_downward_closed(const TeamProperty& T, std::optional<ClosureWitness>* witness = nullptr);
bool is_union_closed(const TeamProperty& T, std::optional<ClosureWitness>* witness = nullptr);
bool is_flat(const TeamProperty& T, std::optional<ClosureWitness>* witness = nullptr);

}  // namespace teamlog

#endif
