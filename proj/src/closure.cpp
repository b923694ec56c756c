#include "teamlog/closure.hpp"

namespace teamlog {

namespace {

void report(std::optional<ClosureWitness>* out, TeamMask a, TeamMask b) {
  if (out) *out = ClosureWitness{a, b};
}

}  // namespace

bool has_empty(const TeamProperty& T) { return T.contains(0); }

bool is_downward_closed(const TeamProperty& T, std::optional<ClosureWitness>* witness) {
  for (TeamMask t = 0; t < T.team_count(); ++t) {
    if (!T.contains(t)) continue;
    for (TeamMask s = t;; s = (s - 1) & t) {
      if (!T.contains(s)) {
        report(witness, t, s);
        return false;
      }
      if (s == 0) break;
    }
  }
  return true;
}

// Binary unions suffice: closure under unions of arbitrary nonempty finite
// families follows by induction.
bool is_union_closed(const TeamProperty& T, std::optional<ClosureWitness>* witness) {
  std::vector<TeamMask> members;
  for (TeamMask t = 0; t < T.team_count(); ++t)
    if (T.contains(t)) members.push_back(t);
  for (TeamMask a : members)
    for (TeamMask b : members)
      if (!T.contains(a | b)) {
        report(witness, a, b);
        return false;
      }
  return true;
}

bool is_flat(const TeamProperty& T, std::optional<ClosureWitness>* witness) {
  for (TeamMask t = 0; t < T.team_count(); ++t) {
    bool pointwise = true;
    for (TeamMask m = t; m; m &= m - 1)
      if (!T.contains(m & ~(m - 1))) {
        pointwise = false;
        break;
      }
    if (T.contains(t) != pointwise) {
      report(witness, t, 0);
      return false;
    }
  }
  return true;
}

}  // namespace teamlog
