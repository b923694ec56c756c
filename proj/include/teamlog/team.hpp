// Valuations, teams and the satisfaction relation over a fixed finite
// variable universe, plus brute-force semantic judgments (extension,
// entailment, equivalence).
//
// A valuation is an n-bit word: bit i holds the value of the i-th universe
// variable.  A team is a bitmask over valuation indices.  A team property
// is a bitset over team masks; materializing one costs 2^(2^n) bits, hence
// the universe cap.

#ifndef TEAMLOG_TEAM_HPP
#define TEAMLOG_TEAM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "teamlog/formula.hpp"

namespace teamlog {

using Valuation = std::uint32_t;  // n-bit word, bit i = value of vars[i]
using TeamMask = std::uint64_t;   // bit v set iff valuation v in the team

inline constexpr std::size_t kDefaultUniverseCap = 4;
// Evaluation itself only needs team masks to fit in 64 bits.
inline constexpr std::size_t kEvalLimit = 6;

class UniverseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Universe {
 public:
  explicit Universe(std::vector<std::string> vars, std::size_t cap = kDefaultUniverseCap);

  // Universe spanning exactly the variables of the given formulas, in
  // lexicographic order.
  static Universe spanning(const std::vector<Formula>& formulas,
                           std::size_t cap = kDefaultUniverseCap);

  std::size_t size() const { return vars_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool contains_vars_of(const Formula& f) const;

  std::size_t valuation_count() const { return std::size_t{1} << vars_.size(); }
  TeamMask full_team() const {
    return valuation_count() == 64 ? ~TeamMask{0} : (TeamMask{1} << valuation_count()) - 1;
  }
  // Number of teams, 2^(2^n).  Requires n <= cap (and cap small enough).
  std::uint64_t team_count() const;

  bool operator==(const Universe& other) const { return vars_ == other.vars_; }

 private:
  std::vector<std::string> vars_;
  std::size_t cap_;
};

// Bit-string codec for the JSON surface ("01" = first var 0, second var 1).
std::string valuation_to_bits(const Universe& u, Valuation v);
Valuation valuation_from_bits(const Universe& u, const std::string& bits);

// ---------------------------------------------------------------------------
// Satisfaction

// Evaluator for one formula over one universe; memoizes (subformula, team)
// verdicts so team-property sweeps share work.  Not thread-safe; use one
// evaluator per worker.
class Evaluator {
 public:
  Evaluator(const Universe& u, const Formula& f);
  bool satisfies(TeamMask team);
  const Universe& universe() const { return universe_; }

 private:
  bool eval(const Formula& f, TeamMask team);
  bool eval_local_or(const Formula& f, TeamMask team);
  bool eval_dep(const Formula& f, TeamMask team) const;
  bool eval_inc(const Formula& f, TeamMask team) const;
  int term_value(const Term& t, Valuation v) const;

  Universe universe_;
  Formula formula_;
  std::unordered_map<const void*, std::unordered_map<TeamMask, bool>> memo_;
};

bool satisfies(const Universe& u, TeamMask team, const Formula& f);

// Single-valuation truth for classical formulas; throws on non-classical input.
bool single_valuation_sat(const Universe& u, Valuation v, const Formula& classical);

// ---------------------------------------------------------------------------
// Team properties

class TeamProperty {
 public:
  explicit TeamProperty(Universe u);
  TeamProperty(Universe u, std::vector<bool> members);

  const Universe& universe() const { return universe_; }
  std::uint64_t team_count() const { return members_.size(); }
  bool contains(TeamMask t) const { return members_[t]; }
  void set(TeamMask t, bool in = true) { members_[t] = in; }
  std::uint64_t size() const;  // number of member teams

  bool operator==(const TeamProperty& other) const {
    return universe_ == other.universe_ && members_ == other.members_;
  }

 private:
  Universe universe_;
  std::vector<bool> members_;
};

TeamProperty extension(const Formula& f, const Universe& u);
TeamProperty powerset_property(const Universe& u, TeamMask t);  // all subteams of t

// Entailment over all teams of U; exact whenever U covers the mentioned
// variables.  `countermodel`, when non-null, receives a refuting team.
bool entails(const std::vector<Formula>& gamma, const Formula& phi, const Universe& u,
             TeamMask* countermodel = nullptr);
bool equivalent(const Formula& phi, const Formula& psi, const Universe& u);

// ---------------------------------------------------------------------------
// JSON (team / team-property files)

std::pair<Universe, TeamMask> team_from_json(const std::string& json_text,
                                             std::size_t cap = kDefaultUniverseCap);
TeamProperty property_from_json(const std::string& json_text, std::size_t cap = kDefaultUniverseCap);
std::string team_to_json(const Universe& u, TeamMask t);
std::string property_to_json(const TeamProperty& p);

}  // namespace teamlog

#endif
