#include "teamlog/normal_form.hpp"

#include <algorithm>

namespace teamlog {

namespace {

void push_unique(std::vector<Formula>& out, const Formula& f) {
  if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
}

void check_limit(const std::vector<Formula>& disjuncts, std::size_t limit) {
  if (disjuncts.size() > limit)
    throw NormalFormError("DNF exceeds the disjunct limit of " + std::to_string(limit));
}

std::vector<Formula> dnf(const Formula& phi, std::size_t limit) {
  switch (phi.kind()) {
    case Conn::Prop:
    case Conn::Bottom:
      return {phi};
    case Conn::DepAtom:
    case Conn::IncAtom:
      throw NormalFormError("no DNF for dependence/inclusion atoms: " + phi.str());
    case Conn::Neg: {
      // ~ \/ ai is equivalent to the conjunction of the ~ai
      std::vector<Formula> inner = dnf(phi.child(), limit);
      Formula acc = Formula::neg(inner.back());
      for (std::size_t i = inner.size() - 1; i-- > 0;)
        acc = Formula::conj(Formula::neg(inner[i]), acc);
      return {acc};
    }
    case Conn::And: {
      std::vector<Formula> ls = dnf(phi.left(), limit);
      std::vector<Formula> rs = dnf(phi.right(), limit);
      std::vector<Formula> out;
      for (const Formula& a : ls)
        for (const Formula& b : rs) {
          push_unique(out, Formula::conj(a, b));
          check_limit(out, limit);
        }
      return out;
    }
    case Conn::LocalOr: {
      std::vector<Formula> ls = dnf(phi.left(), limit);
      std::vector<Formula> rs = dnf(phi.right(), limit);
      std::vector<Formula> out;
      for (const Formula& a : ls)
        for (const Formula& b : rs) {
          push_unique(out, Formula::lor(a, b));
          check_limit(out, limit);
        }
      return out;
    }
    case Conn::GlobalOr: {
      std::vector<Formula> out = dnf(phi.left(), limit);
      for (const Formula& b : dnf(phi.right(), limit)) {
        push_unique(out, b);
        check_limit(out, limit);
      }
      return out;
    }
    case Conn::IntImpl: {
      // (\/ ai) -> chi  becomes the conjunction over i of ~ai | chi;
      // the rewrite removes one -> so the recursion terminates.
      std::vector<Formula> as = dnf(phi.left(), limit);
      Formula acc = Formula::lor(Formula::neg(as.back()), phi.right());
      for (std::size_t i = as.size() - 1; i-- > 0;)
        acc = Formula::conj(Formula::lor(Formula::neg(as[i]), phi.right()), acc);
      return dnf(acc, limit);
    }
  }
  throw NormalFormError("unreachable connective");
}

}  // namespace

std::vector<Formula> to_dnf(const Formula& phi, std::size_t max_disjuncts) {
  return dnf(phi, max_disjuncts);
}

Formula dnf_formula(const Formula& phi, std::size_t max_disjuncts) {
  std::vector<Formula> parts = to_dnf(phi, max_disjuncts);
  Formula acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Formula::gor(parts[i], acc);
  return acc;
}

namespace {

Formula flatten(const Formula& f) {
  switch (f.kind()) {
    case Conn::Prop:
    case Conn::Bottom:
      return f;
    case Conn::Neg:
      return Formula::neg(flatten(f.child()));
    case Conn::And:
      return Formula::conj(flatten(f.left()), flatten(f.right()));
    case Conn::LocalOr:
      return Formula::lor(flatten(f.left()), flatten(f.right()));
    case Conn::GlobalOr:
      return Formula::lor(flatten(f.left()), flatten(f.right()));
    default:
      throw NormalFormError("flattening is defined for ->-free, atom-free Harrop formulas");
  }
}

}  // namespace

Formula harrop_flatten(const Formula& delta) {
  if (!is_harrop(delta)) throw NormalFormError("not a Harrop formula: " + delta.str());
  return flatten(delta);
}

bool decide_entailment_dnf(const Formula& psi, const Formula& phi) {
  std::vector<Formula> as = to_dnf(psi);
  std::vector<Formula> bs = to_dnf(phi);
  Universe u = Universe::spanning({psi, phi});
  // a |= b classically iff no valuation satisfies a but not b
  auto classically_entails = [&](const Formula& a, const Formula& b) {
    for (Valuation v = 0; v < u.valuation_count(); ++v)
      if (single_valuation_sat(u, v, a) && !single_valuation_sat(u, v, b)) return false;
    return true;
  };
  for (const Formula& a : as) {
    bool covered = false;
    for (const Formula& b : bs)
      if (classically_entails(a, b)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

}  // namespace teamlog
