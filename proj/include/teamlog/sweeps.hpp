// Brute-force verification sweeps for the documented semantic facts about
// the characteristic-formula constructions, plus mutation-based negative
// controls and random formula generation per fragment (shared by the CLI
// and the acceptance harness).

#ifndef TEAMLOG_SWEEPS_HPP
#define TEAMLOG_SWEEPS_HPP

#include <random>

#include "teamlog/team.hpp"

namespace teamlog {

struct SweepResult {
  std::string id;
  std::string description;
  std::uint64_t cases = 0;
  bool passed = false;
  std::string detail;  // first counterexample, or a short confirmation
};

// Sweep selectors:
//   1    classical formulas: extension = powerset of the truth-set team
//   2    chi_t: extension is the powerset of t (both variants)
//   3    rho_t: satisfied exactly when t is not a subteam
//   5    sigma_t: satisfied exactly off subteams of t (empty aside)
//   6    psi_t: satisfied exactly by teams different from t
//   eq3  chi_v: singleton satisfaction picks out v
//   eq7  iota_v: nonempty teams satisfy iff v is a member
//   eq8  iota_t: satisfied iff t is a subteam or the team is empty
//   eq9  fix_team: extension is {t, empty}
//   mu   mu_k: satisfied exactly by teams of size at most k
//   thm2 synthesis round-trips for the flat and downward-closed fragments
//   thm3 synthesis round-trips for the inclusion fragments
//   thm4 synthesis round-trips for the full fragment construction
const std::vector<std::string>& lemma_ids();

// Runs one sweep over the n-variable universe.  `sample`, when set, bounds
// the number of properties/formulas tried (seeded RNG); otherwise sweeps
// are exhaustive except for the formula corpus of "1", which defaults to
// 200 random classical formulas.
SweepResult run_lemma(const std::string& id, std::size_t n,
                      std::optional<std::size_t> sample = std::nullopt,
                      std::uint64_t seed = 0);

// Negative controls: each deliberately corrupted construction must yield a
// counterexample; `passed` reports that the corruption was caught.
//   sigma-complement  sigma_t built from members instead of the complement
//   iota-drop         fix_team missing one inclusion-atom conjunct
//   raa-weaken        checker accepting RAA on a non-classical conclusion
const std::vector<std::string>& mutation_names();
SweepResult run_mutation(const std::string& name, std::size_t n);

// Random formula over the given variables, staying inside the fragment.
Formula random_formula(std::mt19937& rng, Fragment fragment,
                       const std::vector<std::string>& vars, int depth);

}  // namespace teamlog

#endif
