#include "teamlog/sweeps.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "teamlog/closure.hpp"
#include "teamlog/deduction.hpp"
#include "teamlog/synthesis.hpp"

namespace teamlog {

namespace {

std::vector<std::string> make_vars(std::size_t n) {
  std::vector<std::string> vars;
  for (std::size_t i = 1; i <= n; ++i) vars.push_back("p" + std::to_string(i));
  return vars;
}

std::string team_str(const Universe& u, TeamMask t) {
  std::string s = "{";
  bool first = true;
  for (TeamMask m = t; m; m &= m - 1) {
    if (!first) s += ",";
    s += valuation_to_bits(u, static_cast<Valuation>(std::countr_zero(m)));
    first = false;
  }
  return s + "}";
}

struct Sweep {
  SweepResult result;

  explicit Sweep(std::string id, std::string description) {
    result.id = std::move(id);
    result.description = std::move(description);
    result.passed = true;
  }

  // Records one case; on the first mismatch captures the witness.
  void record(bool ok, const std::function<std::string()>& witness) {
    ++result.cases;
    if (!ok && result.passed) {
      result.passed = false;
      result.detail = witness();
    }
  }

  SweepResult finish() {
    if (result.passed)
      result.detail = std::to_string(result.cases) + " cases, no counterexample";
    return result;
  }
};

// Property codes: bit t of the code marks team mask t as a member.  Only
// usable while the whole property space fits in a 64-bit code (n <= 2).
TeamProperty decode_property(const Universe& u, std::uint64_t code) {
  TeamProperty T(u);
  for (TeamMask t = 0; t < u.team_count(); ++t)
    if (code >> t & 1) T.set(t);
  return T;
}

// Random property already inside the fragment's closure class: seed teams
// are drawn at random and then closed (downward / under unions) as needed.
TeamProperty random_eligible_property(const Universe& u, Fragment frag, std::mt19937_64& rng) {
  const TeamMask full = u.full_team();
  auto random_team = [&] { return static_cast<TeamMask>(rng()) & full; };
  TeamProperty T(u);
  T.set(0);
  switch (frag) {
    case Fragment::PL:
      return powerset_property(u, random_team());
    case Fragment::PLv:
    case Fragment::PLdep: {
      std::size_t k = 1 + rng() % 3;
      for (std::size_t i = 0; i < k; ++i) {
        TeamMask t = random_team();
        for (TeamMask s = t;; s = (s - 1) & t) {
          T.set(s);
          if (s == 0) break;
        }
      }
      return T;
    }
    case Fragment::PLinc: {
      std::size_t k = 1 + rng() % 3;
      std::vector<TeamMask> members{0};
      for (std::size_t i = 0; i < k; ++i) members.push_back(random_team());
      // close under binary unions
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j) {
          TeamMask un = members[i] | members[j];
          if (std::find(members.begin(), members.end(), un) == members.end())
            members.push_back(un);
        }
      for (TeamMask t : members) T.set(t);
      return T;
    }
    default: {
      std::size_t k = rng() % 8;
      for (std::size_t i = 0; i < k; ++i) T.set(random_team());
      return T;
    }
  }
}

std::vector<TeamProperty> eligible_properties(const Universe& u, Fragment frag,
                                              std::optional<std::size_t> sample,
                                              std::uint64_t seed,
                                              const std::function<bool(const TeamProperty&)>& keep) {
  std::vector<TeamProperty> out;
  if (!sample) {
    if (u.team_count() >= 64)
      throw std::invalid_argument(
          "property space too large for an exhaustive sweep; use --sample");
    std::uint64_t limit = std::uint64_t{1} << u.team_count();
    for (std::uint64_t c = 0; c < limit; ++c) {
      TeamProperty T = decode_property(u, c);
      if (keep(T)) out.push_back(std::move(T));
    }
  } else {
    std::mt19937_64 rng(seed);
    while (out.size() < *sample) {
      TeamProperty T = random_eligible_property(u, frag, rng);
      if (keep(T)) out.push_back(std::move(T));
    }
  }
  return out;
}

SweepResult sweep_classical_extensions(const Universe& u, std::size_t count,
                                       std::uint64_t seed) {
  Sweep s("1", "classical extensions are powersets of the truth-set team");
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  for (std::size_t i = 0; i < count; ++i) {
    Formula alpha = random_formula(rng, Fragment::PL, u.vars(), 3);
    TeamMask truth = 0;
    for (Valuation v = 0; v < u.valuation_count(); ++v)
      if (single_valuation_sat(u, v, alpha)) truth |= TeamMask{1} << v;
    bool ok = extension(alpha, u) == powerset_property(u, truth);
    s.record(ok, [&] { return "formula " + alpha.str(); });
  }
  return s.finish();
}

SweepResult sweep_round_trips(const std::string& id, const Universe& u,
                              const std::vector<Fragment>& fragments,
                              std::optional<std::size_t> sample, std::uint64_t seed) {
  Sweep s(id, "synthesis round-trips for " + [&] {
            std::string names;
            for (Fragment f : fragments) names += (names.empty() ? "" : ", ") + to_string(f);
            return names;
          }());
  for (Fragment frag : fragments) {
    auto eligible = [&](const TeamProperty& T) {
      switch (frag) {
        case Fragment::PL: return is_flat(T);
        case Fragment::PLv:
        case Fragment::PLdep: return T.size() > 0 && has_empty(T) && is_downward_closed(T);
        case Fragment::PLinc: return has_empty(T) && is_union_closed(T);
        default: return has_empty(T);
      }
    };
    for (const TeamProperty& T : eligible_properties(u, frag, sample, seed, eligible)) {
      SynthesisResult r = synth(T, frag);
      bool ok = r.verified && in_fragment(r.formula, frag);
      s.record(ok, [&] {
        std::string teams;
        for (TeamMask t = 0; t < T.team_count(); ++t)
          if (T.contains(t)) teams += (teams.empty() ? "" : " ") + team_str(u, t);
        return to_string(frag) + " property [" + teams + "]";
      });
    }
  }
  return s.finish();
}

}  // namespace

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {"1",   "2",   "3",    "5",    "6",
                                               "eq3", "eq7", "eq8",  "eq9",  "mu",
                                               "thm2", "thm3", "thm4"};
  return ids;
}

SweepResult run_lemma(const std::string& id, std::size_t n,
                      std::optional<std::size_t> sample, std::uint64_t seed) {
  Universe u(make_vars(n));
  const TeamMask full = u.full_team();
  auto witness_ts = [&](TeamMask t, TeamMask s2) {
    return "t=" + team_str(u, t) + " s=" + team_str(u, s2);
  };

  if (id == "1") return sweep_classical_extensions(u, sample.value_or(200), seed);
  if (id == "2") {
    Sweep s("2", "chi_t extension equals the powerset of t");
    for (TeamMask t = 0; t <= full; ++t) {
      Evaluator dis(u, chi_t_disjunctive(u, t));
      Evaluator con(u, chi_t_conjunctive(u, t));
      for (TeamMask s2 = 0; s2 <= full; ++s2) {
        bool want = (s2 & ~t) == 0;
        s.record(dis.satisfies(s2) == want && con.satisfies(s2) == want,
                 [&] { return witness_ts(t, s2); });
      }
    }
    return s.finish();
  }
  if (id == "3") {
    Sweep s("3", "rho_t holds exactly when t is not a subteam");
    for (TeamMask t = 1; t <= full; ++t) {
      Evaluator e(u, rho_t(u, t));
      for (TeamMask s2 = 0; s2 <= full; ++s2)
        s.record(e.satisfies(s2) == ((t & ~s2) != 0), [&] { return witness_ts(t, s2); });
    }
    return s.finish();
  }
  if (id == "5") {
    Sweep s("5", "sigma_t holds exactly off subteams of t, empty aside");
    for (TeamMask t = 1; t <= full; ++t) {
      Evaluator e(u, sigma_t(u, t));
      for (TeamMask s2 = 0; s2 <= full; ++s2)
        s.record(e.satisfies(s2) == ((s2 & ~t) != 0 || s2 == 0),
                 [&] { return witness_ts(t, s2); });
    }
    return s.finish();
  }
  if (id == "6") {
    Sweep s("6", "psi_t holds exactly on teams different from t");
    for (TeamMask t = 1; t <= full; ++t) {
      Evaluator e(u, psi_t(u, t));
      for (TeamMask s2 = 0; s2 <= full; ++s2)
        s.record(e.satisfies(s2) == (s2 != t), [&] { return witness_ts(t, s2); });
    }
    return s.finish();
  }
  if (id == "eq3") {
    Sweep s("eq3", "chi_v singles out its valuation");
    for (Valuation v = 0; v < u.valuation_count(); ++v) {
      Formula f = chi_v(u, v);
      for (Valuation w = 0; w < u.valuation_count(); ++w)
        s.record(single_valuation_sat(u, w, f) == (w == v), [&] {
          return "v=" + valuation_to_bits(u, v) + " w=" + valuation_to_bits(u, w);
        });
    }
    return s.finish();
  }
  if (id == "eq7") {
    Sweep s("eq7", "iota_v membership on nonempty teams");
    for (Valuation v = 0; v < u.valuation_count(); ++v) {
      Evaluator e(u, iota_v(u, v));
      for (TeamMask s2 = 0; s2 <= full; ++s2)
        s.record(e.satisfies(s2) == (s2 == 0 || (s2 >> v & 1)), [&] {
          return "v=" + valuation_to_bits(u, v) + " s=" + team_str(u, s2);
        });
    }
    return s.finish();
  }
  if (id == "eq8") {
    Sweep s("eq8", "iota_t pins superteams");
    for (TeamMask t = 0; t <= full; ++t) {
      Evaluator e(u, iota_t(u, t));
      for (TeamMask s2 = 0; s2 <= full; ++s2)
        s.record(e.satisfies(s2) == ((t & ~s2) == 0 || s2 == 0),
                 [&] { return witness_ts(t, s2); });
    }
    return s.finish();
  }
  if (id == "eq9") {
    Sweep s("eq9", "fix_team extension is the team plus empty");
    for (TeamMask t = 0; t <= full; ++t) {
      Evaluator e(u, fix_team(u, t));
      for (TeamMask s2 = 0; s2 <= full; ++s2)
        s.record(e.satisfies(s2) == (s2 == t || s2 == 0),
                 [&] { return witness_ts(t, s2); });
    }
    return s.finish();
  }
  if (id == "mu") {
    Sweep s("mu", "mu_k bounds team cardinality");
    for (std::size_t k = 0; k <= u.valuation_count(); ++k) {
      Evaluator e(u, mu_k(u, k));
      for (TeamMask s2 = 0; s2 <= full; ++s2)
        s.record(e.satisfies(s2) == (static_cast<std::size_t>(std::popcount(s2)) <= k),
                 [&] { return "k=" + std::to_string(k) + " s=" + team_str(u, s2); });
    }
    return s.finish();
  }
  if (id == "thm2")
    return sweep_round_trips("thm2", u, {Fragment::PL, Fragment::PLv, Fragment::PLdep},
                             sample, seed);
  if (id == "thm3")
    return sweep_round_trips("thm3", u, {Fragment::PLinc, Fragment::PLincV}, sample, seed);
  if (id == "thm4")
    return sweep_round_trips("thm4", u, {Fragment::PLdepinc}, sample, seed);

  throw std::invalid_argument("unknown lemma id: " + id);
}

const std::vector<std::string>& mutation_names() {
  static const std::vector<std::string> names = {"sigma-complement", "iota-drop",
                                                 "raa-weaken"};
  return names;
}

SweepResult run_mutation(const std::string& name, std::size_t n) {
  Universe u(make_vars(n));
  const TeamMask full = u.full_team();

  if (name == "sigma-complement") {
    SweepResult r{name, "sigma_t built from members instead of the complement", 0, false,
                  "no counterexample found"};
    for (TeamMask t = 1; t <= full && !r.passed; ++t) {
      // corrupted construction: disjoin iota_v over t itself
      std::vector<Formula> parts;
      for (TeamMask m = t; m; m &= m - 1)
        parts.push_back(iota_v(u, static_cast<Valuation>(std::countr_zero(m))));
      Formula bad = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;) bad = Formula::lor(parts[i], bad);
      Evaluator e(u, bad);
      for (TeamMask s = 0; s <= full; ++s) {
        ++r.cases;
        if (e.satisfies(s) != ((s & ~t) != 0 || s == 0)) {
          r.passed = true;
          r.detail = "t=" + team_str(u, t) + " s=" + team_str(u, s);
          break;
        }
      }
    }
    return r;
  }

  if (name == "iota-drop") {
    SweepResult r{name, "fix_team missing one inclusion-atom conjunct", 0, false,
                  "no counterexample found"};
    for (TeamMask t = 1; t <= full && !r.passed; ++t) {
      // corrupted construction: pin every member of t except the last
      TeamMask dropped = t & (t - 1) ? t & ~(TeamMask{1} << (63 - std::countl_zero(t))) : t;
      Formula bad = Formula::conj(chi_t_disjunctive(u, t), iota_t(u, dropped));
      TeamProperty want(u);
      want.set(0);
      want.set(t);
      ++r.cases;
      if (!(extension(bad, u) == want)) {
        r.passed = true;
        r.detail = "t=" + team_str(u, t);
      }
    }
    return r;
  }

  if (name == "raa-weaken") {
    SweepResult r{name, "checker accepting RAA on a non-classical conclusion", 0, false,
                  "no counterexample found"};
    // With unrestricted RAA one can "prove" the global excluded middle,
    // which team semantics refutes on any mixed team.
    Formula p = Formula::prop(u.vars().front());
    Formula gem = Formula::gor(p, Formula::neg(p));
    Formula ngem = Formula::neg(gem);
    auto mk = [](RuleId rule, Formula c, std::vector<Derivation> prem,
                 std::vector<std::vector<std::string>> dis = {}) {
      Derivation d;
      d.rule = rule;
      d.conclusion = std::move(c);
      d.premises = std::move(prem);
      d.discharge = std::move(dis);
      return d;
    };
    auto hyp = [](const Formula& f, std::string l) {
      Derivation d;
      d.conclusion = f;
      d.label = std::move(l);
      return d;
    };
    Derivation not_p = mk(
        RuleId::NegI, Formula::neg(p),
        {mk(RuleId::NegE, Formula::bottom(),
            {mk(RuleId::GOrI_L, gem, {hyp(p, "a")}), hyp(ngem, "em")})},
        {{"a"}});
    Derivation not_not_p = mk(
        RuleId::NegI, Formula::neg(Formula::neg(p)),
        {mk(RuleId::NegE, Formula::bottom(),
            {mk(RuleId::GOrI_R, gem, {hyp(Formula::neg(p), "b")}), hyp(ngem, "em")})},
        {{"b"}});
    Derivation contradiction =
        mk(RuleId::NegE, Formula::bottom(), {not_p, not_not_p});
    Derivation raa = mk(RuleId::RAA, gem, {contradiction}, {{"em"}});

    CheckOptions strict, weak;
    weak.weaken_raa = true;
    bool strict_rejects = false;
    try {
      check(raa, strict);
    } catch (const ProofError&) {
      strict_rejects = true;
    }
    Sequent s = check(raa, weak);  // accepted once the side condition is dropped
    TeamMask counter = 0;
    if (strict_rejects && s.hypotheses.empty()) {
      for (TeamMask t = 0; t <= full; ++t) {
        ++r.cases;
        if (!satisfies(u, t, gem)) {
          counter = t;
          r.passed = true;
          break;
        }
      }
    }
    if (r.passed)
      r.detail = "derived " + gem.str() + " without hypotheses; refuted by team " +
                 team_str(u, counter);
    return r;
  }

  throw std::invalid_argument("unknown mutation name: " + name);
}

Formula random_formula(std::mt19937& rng, Fragment fragment,
                       const std::vector<std::string>& vars, int depth) {
  FragmentSpec spec = fragment_spec(fragment);
  auto var = [&] { return vars[rng() % vars.size()]; };

  if (depth <= 0) {
    switch (rng() % 8) {
      case 0: return Formula::bottom();
      case 1:
        if (spec.allows_dep) return Formula::dep({}, var());
        return Formula::prop(var());
      case 2:
        if (spec.allows_dep && vars.size() > 1) return Formula::dep({var()}, var());
        return Formula::prop(var());
      case 3:
        if (spec.allows_inc)
          return Formula::inc({Term::variable(var())}, {Term::variable(var())});
        return Formula::prop(var());
      case 4:
        if (spec.allows_inc) return Formula::inc({Term::top()}, {Term::variable(var())});
        return Formula::prop(var());
      default: return Formula::prop(var());
    }
  }
  int choices = 4 + (spec.allows_gor ? 1 : 0) + (spec.allows_impl ? 1 : 0);
  switch (rng() % choices) {
    case 0: return random_formula(rng, fragment, vars, 0);
    case 1: return Formula::neg(random_formula(rng, fragment, vars, depth - 1));
    case 2:
      return Formula::conj(random_formula(rng, fragment, vars, depth - 1),
                           random_formula(rng, fragment, vars, depth - 1));
    case 3:
      return Formula::lor(random_formula(rng, fragment, vars, depth - 1),
                          random_formula(rng, fragment, vars, depth - 1));
    case 4:
      if (spec.allows_gor)
        return Formula::gor(random_formula(rng, fragment, vars, depth - 1),
                            random_formula(rng, fragment, vars, depth - 1));
      [[fallthrough]];
    default:
      return Formula::impl(random_formula(rng, fragment, vars, depth - 1),
                           random_formula(rng, fragment, vars, depth - 1));
  }
}

}  // namespace teamlog
