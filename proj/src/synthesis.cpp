#include "teamlog/synthesis.hpp"

#include <bit>

#include "teamlog/closure.hpp"

namespace teamlog {

namespace {

Formula fold_right(const std::vector<Formula>& parts, Conn op, const Formula& empty_value) {
  if (parts.empty()) return empty_value;
  Formula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) {
    switch (op) {
      case Conn::And: acc = Formula::conj(parts[i], acc); break;
      case Conn::LocalOr: acc = Formula::lor(parts[i], acc); break;
      default: acc = Formula::gor(parts[i], acc); break;
    }
  }
  return acc;
}

Formula fold_and(const std::vector<Formula>& parts) {
  return fold_right(parts, Conn::And, Formula::top());
}
Formula fold_lor(const std::vector<Formula>& parts) {
  return fold_right(parts, Conn::LocalOr, Formula::bottom());
}
Formula fold_gor(const std::vector<Formula>& parts) {
  return fold_right(parts, Conn::GlobalOr, Formula::bottom());
}

std::vector<Valuation> members_of(TeamMask t) {
  std::vector<Valuation> out;
  for (TeamMask m = t; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

}  // namespace

Formula chi_v(const Universe& u, Valuation v) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < u.size(); ++i) {
    Formula p = Formula::prop(u.vars()[i]);
    lits.push_back(v >> i & 1 ? p : Formula::neg(p));
  }
  return fold_and(lits);
}

Formula chi_t_disjunctive(const Universe& u, TeamMask t) {
  std::vector<Formula> parts;
  for (Valuation v : members_of(t)) parts.push_back(chi_v(u, v));
  return fold_lor(parts);
}

Formula chi_t_conjunctive(const Universe& u, TeamMask t) {
  std::vector<Formula> parts;
  for (Valuation v : members_of(u.full_team() & ~t)) parts.push_back(Formula::neg(chi_v(u, v)));
  return fold_and(parts);
}

Formula iota_v(const Universe& u, Valuation v) {
  if (u.size() == 0) throw SynthesisError("iota_v needs at least one variable");
  std::vector<Term> lhs, rhs;
  for (std::size_t i = 0; i < u.size(); ++i) {
    lhs.push_back(v >> i & 1 ? Term::top() : Term::bot());
    rhs.push_back(Term::variable(u.vars()[i]));
  }
  return Formula::inc(std::move(lhs), std::move(rhs));
}

Formula iota_t(const Universe& u, TeamMask t) {
  std::vector<Formula> parts;
  for (Valuation v : members_of(t)) parts.push_back(iota_v(u, v));
  return fold_and(parts);
}

Formula fix_team(const Universe& u, TeamMask t) {
  return Formula::conj(chi_t_disjunctive(u, t), iota_t(u, t));
}

Formula mu_k(const Universe& u, std::size_t k) {
  std::vector<Formula> consts;
  for (const auto& p : u.vars()) consts.push_back(Formula::dep({}, p));
  Formula block = fold_and(consts);
  std::vector<Formula> copies(k, block);
  return fold_lor(copies);
}

Formula rho_t(const Universe& u, TeamMask t) {
  if (t == 0) throw SynthesisError("rho_t requires a nonempty team");
  std::size_t k = static_cast<std::size_t>(std::popcount(t)) - 1;
  return Formula::lor(mu_k(u, k), chi_t_disjunctive(u, u.full_team() & ~t));
}

Formula sigma_t(const Universe& u, TeamMask t) {
  if (t == 0) throw SynthesisError("sigma_t requires a nonempty team");
  std::vector<Formula> parts;
  for (Valuation v : members_of(u.full_team() & ~t)) parts.push_back(iota_v(u, v));
  return fold_lor(parts);
}

Formula psi_t(const Universe& u, TeamMask t) {
  return Formula::lor(rho_t(u, t), sigma_t(u, t));
}

namespace {

std::string team_desc(const Universe& u, TeamMask t) {
  std::string s = "{";
  bool first = true;
  for (Valuation v : members_of(t)) {
    if (!first) s += ",";
    s += valuation_to_bits(u, v);
    first = false;
  }
  return s + "}";
}

[[noreturn]] void precondition_failure(const Universe& u, Fragment frag, const std::string& what,
                                       const ClosureWitness& w) {
  throw SynthesisError("property violates the " + to_string(frag) + " closure contract (" + what +
                       "): witness " + team_desc(u, w.a) + " / " + team_desc(u, w.b));
}

void require_empty(const TeamProperty& T, Fragment frag) {
  if (!has_empty(T))
    throw SynthesisError("property violates the " + to_string(frag) +
                         " closure contract: empty team missing");
}

void require_downward(const TeamProperty& T, Fragment frag) {
  std::optional<ClosureWitness> w;
  if (!is_downward_closed(T, &w)) precondition_failure(T.universe(), frag, "downward closure", *w);
  if (T.size() == 0)
    throw SynthesisError("property violates the " + to_string(frag) +
                         " closure contract: property is empty");
}

void require_union(const TeamProperty& T, Fragment frag) {
  std::optional<ClosureWitness> w;
  if (!is_union_closed(T, &w)) precondition_failure(T.universe(), frag, "union closure", *w);
}

std::vector<TeamMask> property_members(const TeamProperty& T) {
  std::vector<TeamMask> out;
  for (TeamMask t = 0; t < T.team_count(); ++t)
    if (T.contains(t)) out.push_back(t);
  return out;
}

std::vector<TeamMask> property_complement(const TeamProperty& T) {
  std::vector<TeamMask> out;
  for (TeamMask t = 0; t < T.team_count(); ++t)
    if (!T.contains(t)) out.push_back(t);
  return out;
}

}  // namespace

SynthesisResult synth(const TeamProperty& T, Fragment fragment) {
  const Universe& u = T.universe();
  bool needs_inc = fragment == Fragment::PLinc || fragment == Fragment::PLincV ||
                   fragment == Fragment::PLdepinc;
  if (needs_inc && u.size() == 0)
    throw SynthesisError("inclusion-atom constructions need at least one variable");

  Formula formula;
  switch (fragment) {
    case Fragment::PL: {
      // flat property: characteristic formula of the union of its teams
      std::optional<ClosureWitness> w;
      if (!is_flat(T, &w)) precondition_failure(u, fragment, "flatness", *w);
      TeamMask all = 0;
      for (TeamMask t : property_members(T)) all |= t;
      formula = chi_t_disjunctive(u, all);
      break;
    }
    case Fragment::PLv: {
      require_downward(T, fragment);
      std::vector<Formula> parts;
      for (TeamMask t : property_members(T)) parts.push_back(chi_t_disjunctive(u, t));
      formula = fold_gor(parts);
      break;
    }
    case Fragment::PLdep: {
      require_downward(T, fragment);
      std::vector<Formula> parts;
      for (TeamMask t : property_complement(T)) parts.push_back(rho_t(u, t));
      formula = fold_and(parts);
      break;
    }
    case Fragment::PLinc: {
      require_union(T, fragment);
      require_empty(T, fragment);
      std::vector<Formula> parts;
      for (TeamMask t : property_members(T)) parts.push_back(fix_team(u, t));
      formula = fold_lor(parts);
      break;
    }
    case Fragment::PLincV: {
      require_empty(T, fragment);
      std::vector<Formula> parts;
      for (TeamMask t : property_members(T)) parts.push_back(fix_team(u, t));
      formula = fold_gor(parts);
      break;
    }
    case Fragment::PLdepinc: {
      require_empty(T, fragment);
      std::vector<Formula> parts;
      for (TeamMask t : property_complement(T)) parts.push_back(psi_t(u, t));
      formula = fold_and(parts);
      break;
    }
    default:
      throw SynthesisError("no synthesis construction for fragment " + to_string(fragment));
  }

  SynthesisResult result{formula, fragment, false, T};
  result.verified = extension(formula, u) == T;
  return result;
}

}  // namespace teamlog
