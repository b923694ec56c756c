#include "teamlog/team.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include <json.hpp>

namespace teamlog {

Universe::Universe(std::vector<std::string> vars, std::size_t cap) : vars_(std::move(vars)), cap_(cap) {
  std::set<std::string> seen;
  for (const auto& v : vars_)
    if (!seen.insert(v).second) throw UniverseError("duplicate universe variable '" + v + "'");
  if (vars_.size() > kEvalLimit)
    throw UniverseError("universe of " + std::to_string(vars_.size()) +
                        " variables exceeds evaluation limit " + std::to_string(kEvalLimit));
  if (vars_.size() > cap_)
    throw UniverseError("universe of " + std::to_string(vars_.size()) + " variables exceeds cap " +
                        std::to_string(cap_) + " (raise the cap explicitly to override)");
}

Universe Universe::spanning(const std::vector<Formula>& formulas, std::size_t cap) {
  std::set<std::string> vars;
  for (const Formula& f : formulas) {
    auto fv = f.vars();
    vars.insert(fv.begin(), fv.end());
  }
  return Universe(std::vector<std::string>(vars.begin(), vars.end()), cap);
}

std::optional<std::size_t> Universe::index_of(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vars_.begin());
}

bool Universe::contains_vars_of(const Formula& f) const {
  for (const auto& v : f.vars())
    if (!index_of(v)) return false;
  return true;
}

std::uint64_t Universe::team_count() const {
  if (valuation_count() > 32)
    throw UniverseError("team enumeration over " + std::to_string(size()) +
                        " variables is not representable");
  return std::uint64_t{1} << valuation_count();
}

std::string valuation_to_bits(const Universe& u, Valuation v) {
  std::string s(u.size(), '0');
  for (std::size_t i = 0; i < u.size(); ++i)
    if (v >> i & 1) s[i] = '1';
  return s;
}

Valuation valuation_from_bits(const Universe& u, const std::string& bits) {
  if (bits.size() != u.size())
    throw UniverseError("valuation bit-string '" + bits + "' does not match universe size " +
                        std::to_string(u.size()));
  Valuation v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v |= Valuation{1} << i;
    else if (bits[i] != '0')
      throw UniverseError("bad bit '" + std::string(1, bits[i]) + "' in valuation string");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(const Universe& u, const Formula& f) : universe_(u), formula_(f) {
  for (const auto& v : f.vars())
    if (!u.index_of(v)) throw UniverseError("unknown variable '" + v + "' for this universe");
}

bool Evaluator::satisfies(TeamMask team) { return eval(formula_, team); }

int Evaluator::term_value(const Term& t, Valuation v) const {
  switch (t.kind) {
    case Term::Kind::Top: return 1;
    case Term::Kind::Bot: return 0;
    default: return v >> *universe_.index_of(t.var) & 1;
  }
}

bool Evaluator::eval_dep(const Formula& f, TeamMask team) const {
  std::vector<std::size_t> arg_idx;
  for (const auto& a : f.dep_args()) arg_idx.push_back(*universe_.index_of(a));
  std::size_t tgt = *universe_.index_of(f.dep_target());
  std::vector<Valuation> members;
  for (TeamMask m = team; m; m &= m - 1) members.push_back(std::countr_zero(m));
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      bool agree = true;
      for (std::size_t k : arg_idx)
        if ((members[i] >> k & 1) != (members[j] >> k & 1)) { agree = false; break; }
      if (agree && (members[i] >> tgt & 1) != (members[j] >> tgt & 1)) return false;
    }
  return true;
}

bool Evaluator::eval_inc(const Formula& f, TeamMask team) const {
  std::vector<Valuation> members;
  for (TeamMask m = team; m; m &= m - 1) members.push_back(std::countr_zero(m));
  for (Valuation v : members) {
    bool found = false;
    for (Valuation u : members) {
      bool match = true;
      for (std::size_t i = 0; i < f.inc_lhs().size(); ++i)
        if (term_value(f.inc_lhs()[i], v) != term_value(f.inc_rhs()[i], u)) { match = false; break; }
      if (match) { found = true; break; }
    }
    if (!found) return false;
  }
  return true;
}

// Cover search: t |= phi | psi iff some r with r |= phi has a companion
// s |= psi, s between t\r and t.  The superset test is answered by a
// subset-sum (SOS) pass over the 2^k subteams of t, k = |t|.
bool Evaluator::eval_local_or(const Formula& f, TeamMask team) {
  int k = std::popcount(team);
  std::vector<Valuation> pos;
  for (TeamMask m = team; m; m &= m - 1) pos.push_back(std::countr_zero(m));
  auto expand = [&](std::uint32_t local) {
    TeamMask g = 0;
    for (int i = 0; i < k; ++i)
      if (local >> i & 1) g |= TeamMask{1} << pos[i];
    return g;
  };
  std::uint32_t full = k == 32 ? ~0u : (1u << k) - 1;
  std::vector<char> has_super(std::size_t{1} << k);
  for (std::uint32_t s = 0; s <= full; ++s) has_super[s] = eval(f.right(), expand(s));
  for (int b = 0; b < k; ++b)
    for (std::uint32_t s = 0; s <= full; ++s)
      if (!(s >> b & 1)) has_super[s] = has_super[s] || has_super[s | (1u << b)];
  for (std::uint32_t r = 0; r <= full; ++r)
    if (has_super[full & ~r] && eval(f.left(), expand(r))) return true;
  return false;
}

bool Evaluator::eval(const Formula& f, TeamMask team) {
  switch (f.kind()) {
    case Conn::Bottom: return team == 0;
    case Conn::Prop: {
      std::size_t i = *universe_.index_of(f.prop_name());
      for (TeamMask m = team; m; m &= m - 1)
        if (!(std::countr_zero(m) >> i & 1)) return false;
      return true;
    }
    case Conn::DepAtom: return eval_dep(f, team);
    case Conn::IncAtom: return eval_inc(f, team);
    default: break;
  }
  auto& table = memo_[f.node_key()];
  if (auto it = table.find(team); it != table.end()) return it->second;
  bool result = false;
  switch (f.kind()) {
    case Conn::Neg: {
      result = true;
      for (TeamMask m = team; m; m &= m - 1)
        if (eval(f.child(), TeamMask{1} << std::countr_zero(m))) { result = false; break; }
      break;
    }
    case Conn::And: result = eval(f.left(), team) && eval(f.right(), team); break;
    case Conn::GlobalOr: result = eval(f.left(), team) || eval(f.right(), team); break;
    case Conn::LocalOr: result = eval_local_or(f, team); break;
    case Conn::IntImpl: {
      result = true;
      for (TeamMask s = team;; s = (s - 1) & team) {
        if (eval(f.left(), s) && !eval(f.right(), s)) { result = false; break; }
        if (s == 0) break;
      }
      break;
    }
    default: break;
  }
  memo_[f.node_key()][team] = result;
  return result;
}

bool satisfies(const Universe& u, TeamMask team, const Formula& f) {
  return Evaluator(u, f).satisfies(team);
}

bool single_valuation_sat(const Universe& u, Valuation v, const Formula& f) {
  switch (f.kind()) {
    case Conn::Prop: {
      auto i = u.index_of(f.prop_name());
      if (!i) throw UniverseError("unknown variable '" + f.prop_name() + "'");
      return v >> *i & 1;
    }
    case Conn::Bottom: return false;
    case Conn::Neg: return !single_valuation_sat(u, v, f.child());
    case Conn::And: return single_valuation_sat(u, v, f.left()) && single_valuation_sat(u, v, f.right());
    case Conn::LocalOr:
      return single_valuation_sat(u, v, f.left()) || single_valuation_sat(u, v, f.right());
    default:
      throw std::invalid_argument("single_valuation_sat requires a classical formula, got " + f.str());
  }
}

// ---------------------------------------------------------------------------
// Team properties

TeamProperty::TeamProperty(Universe u) : universe_(std::move(u)) {
  members_.assign(universe_.team_count(), false);
}

TeamProperty::TeamProperty(Universe u, std::vector<bool> members) : universe_(std::move(u)), members_(std::move(members)) {
  if (members_.size() != universe_.team_count())
    throw UniverseError("team-property bitset size does not match universe");
}

std::uint64_t TeamProperty::size() const {
  std::uint64_t n = 0;
  for (bool b : members_)
    if (b) ++n;
  return n;
}

TeamProperty extension(const Formula& f, const Universe& u) {
  Evaluator ev(u, f);
  TeamProperty out(u);
  for (TeamMask t = 0; t < u.team_count(); ++t)
    if (ev.satisfies(t)) out.set(t);
  return out;
}

TeamProperty powerset_property(const Universe& u, TeamMask t) {
  TeamProperty out(u);
  for (TeamMask s = t;; s = (s - 1) & t) {
    out.set(s);
    if (s == 0) break;
  }
  return out;
}

bool entails(const std::vector<Formula>& gamma, const Formula& phi, const Universe& u,
             TeamMask* countermodel) {
  std::vector<Evaluator> premises;
  premises.reserve(gamma.size());
  for (const Formula& g : gamma) premises.emplace_back(u, g);
  Evaluator goal(u, phi);
  for (TeamMask t = 0; t < u.team_count(); ++t) {
    bool all = true;
    for (Evaluator& ev : premises)
      if (!ev.satisfies(t)) { all = false; break; }
    if (all && !goal.satisfies(t)) {
      if (countermodel) *countermodel = t;
      return false;
    }
  }
  return true;
}

bool equivalent(const Formula& phi, const Formula& psi, const Universe& u) {
  return entails({phi}, psi, u) && entails({psi}, phi, u);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json parse_json(const std::string& text) {
  return nlohmann::json::parse(text);
}

Universe universe_of(const nlohmann::json& j, std::size_t cap) {
  if (!j.contains("vars") || !j["vars"].is_array())
    throw UniverseError("team JSON needs a \"vars\" array");
  return Universe(j["vars"].get<std::vector<std::string>>(), cap);
}

TeamMask team_of(const nlohmann::json& rows, const Universe& u) {
  TeamMask t = 0;
  for (const auto& row : rows) t |= TeamMask{1} << valuation_from_bits(u, row.get<std::string>());
  return t;
}

nlohmann::json team_rows(const Universe& u, TeamMask t) {
  auto rows = nlohmann::json::array();
  for (TeamMask m = t; m; m &= m - 1)
    rows.push_back(valuation_to_bits(u, static_cast<Valuation>(std::countr_zero(m))));
  return rows;
}

}  // namespace

std::pair<Universe, TeamMask> team_from_json(const std::string& text, std::size_t cap) {
  auto j = parse_json(text);
  Universe u = universe_of(j, cap);
  if (j.contains("team")) return {u, team_of(j["team"], u)};
  // accept a singleton "teams" list too
  if (j.contains("teams") && j["teams"].is_array() && j["teams"].size() == 1)
    return {u, team_of(j["teams"][0], u)};
  throw UniverseError("team JSON needs a \"team\" array (or a one-element \"teams\")");
}

TeamProperty property_from_json(const std::string& text, std::size_t cap) {
  auto j = parse_json(text);
  Universe u = universe_of(j, cap);
  if (!j.contains("teams") || !j["teams"].is_array())
    throw UniverseError("team-property JSON needs a \"teams\" array");
  TeamProperty p(u);
  for (const auto& team : j["teams"]) p.set(team_of(team, u));
  return p;
}

std::string team_to_json(const Universe& u, TeamMask t) {
  nlohmann::json j;
  j["vars"] = u.vars();
  j["team"] = team_rows(u, t);
  return j.dump();
}

std::string property_to_json(const TeamProperty& p) {
  nlohmann::json j;
  j["vars"] = p.universe().vars();
  auto teams = nlohmann::json::array();
  for (TeamMask t = 0; t < p.team_count(); ++t)
    if (p.contains(t)) teams.push_back(team_rows(p.universe(), t));
  j["teams"] = teams;
  return j.dump();
}

}  // namespace teamlog
