#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "teamlog/deduction.hpp"
#include "teamlog/normal_form.hpp"

using namespace teamlog;

namespace {

Derivation hyp(const std::string& text, const std::string& label) {
  Derivation d;
  d.rule = RuleId::Hypothesis;
  d.conclusion = parse(text);
  d.label = label;
  return d;
}

// Checked-derivation soundness: the proved sequent must be a semantic
// entailment over the spanning universe.
void check_sound(const Derivation& d, const CheckOptions& opts = {}) {
  Sequent s = check(d, opts);
  std::vector<Formula> all = s.hypotheses;
  all.push_back(s.conclusion);
  Universe u = Universe::spanning(all);
  CHECK_MESSAGE(entails(s.hypotheses, s.conclusion, u),
                "unsound sequent for conclusion ", s.conclusion.str());
}

Formula random_plv(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  switch (pick(rng)) {
    case 0: return Formula::prop(rng() % 2 ? "p" : "q");
    case 1: return rng() % 4 ? Formula::prop("p") : Formula::bottom();
    case 2: return Formula::neg(random_plv(rng, depth - 1));
    case 3: return Formula::conj(random_plv(rng, depth - 1), random_plv(rng, depth - 1));
    case 4: return Formula::lor(random_plv(rng, depth - 1), random_plv(rng, depth - 1));
    default: return Formula::gor(random_plv(rng, depth - 1), random_plv(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("check: basic schemas") {
  // ~E concludes anything from phi and ~phi
  Derivation nege;
  nege.rule = RuleId::NegE;
  nege.conclusion = parse("q");
  nege.premises = {hyp("p", "1"), hyp("~p", "2")};
  Sequent s = check(nege);
  CHECK(s.conclusion == parse("q"));
  REQUIRE(s.hypotheses.size() == 2);
  CHECK(s.hypotheses[0] == parse("p"));
  CHECK(s.hypotheses[1] == parse("~p"));

  // |Com
  Derivation com;
  com.rule = RuleId::LOrCom;
  com.conclusion = parse("q | p");
  com.premises = {hyp("p | q", "1")};
  CHECK(check(com).conclusion == parse("q | p"));

  // broken &E
  Derivation bad;
  bad.rule = RuleId::AndE_L;
  bad.conclusion = parse("q");
  bad.premises = {hyp("p & r", "1")};
  CHECK_THROWS_AS(check(bad), ProofError);
}

TEST_CASE("check: discharge bookkeeping and side conditions") {
  // ~I discharging its assumption
  Derivation inner;
  inner.rule = RuleId::NegE;
  inner.conclusion = Formula::bottom();
  inner.premises = {hyp("p", "a"), hyp("~p", "b")};
  Derivation negi;
  negi.rule = RuleId::NegI;
  negi.conclusion = parse("~p");
  negi.premises = {inner};
  negi.discharge = {{"a"}};
  Sequent s = check(negi);
  CHECK(s.hypotheses == std::vector<Formula>{parse("~p")});

  // wrong formula under the discharged label
  Derivation badneg = negi;
  badneg.conclusion = parse("~q");
  CHECK_THROWS_AS(check(badneg), ProofError);

  // RAA on a non-classical conclusion is rejected...
  Derivation raa;
  raa.rule = RuleId::RAA;
  raa.conclusion = parse("~(p \\/ ~p)");
  Derivation clash;
  clash.rule = RuleId::NegE;
  clash.conclusion = Formula::bottom();
  clash.premises = {hyp("q", "x"), hyp("~q", "y")};
  raa.premises = {clash};
  raa.discharge = {{"z"}};
  CHECK_THROWS_AS(check(raa), ProofError);
  // ...but accepted as a Harrop formula under the widened side condition
  CheckOptions harrop;
  harrop.harrop_side_condition = true;
  CHECK_NOTHROW(check(raa, harrop));

  // same label bound to two different formulas
  Derivation conflict;
  conflict.rule = RuleId::AndI;
  conflict.conclusion = parse("p & q");
  conflict.premises = {hyp("p", "1"), hyp("q", "1")};
  CHECK_THROWS_AS(check(conflict), ProofError);
}

TEST_CASE("derivation JSON round-trip") {
  Derivation d = derived_rule(DerivedRule::DisjSyl1, {parse("p"), parse("q \\/ r")});
  std::string text = derivation_to_json(d);
  Derivation back = derivation_from_json(text);
  Sequent s1 = check(d), s2 = check(back);
  CHECK(s1.conclusion == s2.conclusion);
  CHECK(s1.hypotheses == s2.hypotheses);
  CHECK_THROWS_AS(derivation_from_json("{"), ProofError);
  CHECK_THROWS_AS(derivation_from_json("{\"rule\":\"NopE\",\"conclusion\":\"p\"}"),
                  ProofError);
}

TEST_CASE("classical_derivation: excluded-middle kernel") {
  for (auto [delta, alpha] : std::vector<std::pair<std::vector<std::string>, std::string>>{
           {{}, "p | ~p"},
           {{"p & q"}, "p"},
           {{"p | q", "~p"}, "q"},
           {{"~(p & q)", "p"}, "~q"},
           {{"p", "~p"}, "r"},
       }) {
    std::vector<Formula> gs;
    for (const auto& t : delta) gs.push_back(parse(t));
    Derivation d = classical_derivation(gs, parse(alpha));
    Sequent s = check(d);
    CHECK(s.conclusion == parse(alpha));
    check_sound(d);
  }
  CHECK_THROWS_AS(classical_derivation({}, parse("p")), ProofError);       // not valid
  CHECK_THROWS_AS(classical_derivation({}, parse("p \\/ ~p")), ProofError);  // not classical
}

TEST_CASE("derive_dnf produces checked equivalence derivations") {
  for (const char* text : {"p & ~q", "p \\/ ~p", "~(p \\/ ~p)", "(p \\/ q) | r",
                           "(p \\/ q) & (r \\/ p)", "~(p | (q \\/ r))",
                           "(p \\/ q) -> r", "p -> (q \\/ r)"}) {
    Formula phi = parse(text);
    DnfDerivations d = derive_dnf(phi);
    CHECK(d.disjuncts == to_dnf(phi));
    Sequent fwd = check(d.forward);
    CHECK(fwd.hypotheses == std::vector<Formula>{phi});
    Sequent bwd = check(d.backward);
    CHECK(bwd.conclusion == phi);
    check_sound(d.forward);
    check_sound(d.backward);
  }
  CHECK_THROWS_AS(derive_dnf(parse("=(p)")), ProofError);
}

TEST_CASE("derive_dnf on random formulas stays checked and sound") {
  std::mt19937 rng(4242);
  for (int i = 0; i < 40; ++i) {
    Formula phi = random_plv(rng, 3);
    DnfDerivations d = derive_dnf(phi);
    check_sound(d.forward);
    check_sound(d.backward);
  }
}

TEST_CASE("derived rules") {
  auto expect = [](const Derivation& d, std::vector<const char*> hyps, const char* concl) {
    Sequent s = check(d);
    CHECK(s.conclusion == parse(concl));
    std::vector<Formula> want;
    for (const char* h : hyps) want.push_back(parse(h));
    for (const Formula& w : want)
      CHECK(std::count(s.hypotheses.begin(), s.hypotheses.end(), w) == 1);
    CHECK(s.hypotheses.size() == want.size());
    check_sound(d);
  };

  expect(derived_rule(DerivedRule::LOrAss, {parse("p"), parse("q \\/ r"), parse("~r")}),
         {"(p | (q \\/ r)) | ~r"}, "p | ((q \\/ r) | ~r)");
  expect(derived_rule(DerivedRule::LOrBotElim, {parse("p \\/ q")}), {"(p \\/ q) | _|_"},
         "p \\/ q");
  expect(derived_rule(DerivedRule::DisjSyl1, {parse("p"), parse("q")}), {"p | q", "~p"},
         "q");
  expect(derived_rule(DerivedRule::DisjSyl2, {parse("p"), parse("q"), parse("r \\/ q")}),
         {"p | q", "~p | (r \\/ q)"}, "q | (r \\/ q)");
  expect(derived_rule(DerivedRule::ImplDef_LR, {parse("p"), parse("q \\/ r")}),
         {"p -> (q \\/ r)"}, "~p | (q \\/ r)");
  expect(derived_rule(DerivedRule::ImplDef_RL, {parse("p"), parse("q \\/ r")}),
         {"~p | (q \\/ r)"}, "p -> (q \\/ r)");
  expect(derived_rule(DerivedRule::SplitDerived, {parse("p"), parse("q"), parse("r")}),
         {"p -> (q \\/ r)"}, "(p -> q) \\/ (p -> r)");
  expect(derived_rule(DerivedRule::NegAntonExpand, {parse("p \\/ q"), parse("r")}),
         {"~(p \\/ q)"}, "~((p \\/ q) & r)");

  CHECK_THROWS_AS(derived_rule(DerivedRule::DisjSyl1, {parse("p \\/ q"), parse("r")}),
                  ProofError);  // non-classical alpha
  CHECK_THROWS_AS(derived_rule(DerivedRule::DisjSyl1, {parse("p")}), ProofError);
}

TEST_CASE("prove: examples") {
  // via \/I
  ProveResult r = prove({parse("p")}, parse("p \\/ q"));
  REQUIRE(r.derivation.has_value());
  Sequent s = check(*r.derivation);
  CHECK(s.conclusion == parse("p \\/ q"));
  CHECK(s.hypotheses == std::vector<Formula>{parse("p")});

  // invalid: countermodel expected
  ProveResult fail = prove({parse("p \\/ ~p")}, parse("p"));
  CHECK_FALSE(fail.derivation.has_value());
  REQUIRE(fail.countermodel.has_value());
  CHECK(satisfies(fail.universe, *fail.countermodel, parse("p \\/ ~p")));
  CHECK_FALSE(satisfies(fail.universe, *fail.countermodel, parse("p")));

  // disjunctive syllogism instance through the prover
  ProveResult ds = prove({parse("p | q"), parse("~p | (r \\/ r)")}, parse("q | (r \\/ r)"));
  REQUIRE(ds.derivation.has_value());
  check_sound(*ds.derivation);

  // the global excluded middle is not valid in team semantics
  ProveResult gem = prove({}, parse("p \\/ ~p"));
  CHECK_FALSE(gem.derivation.has_value());
  CHECK(gem.countermodel.has_value());

  // empty premise set, local excluded middle
  ProveResult taut = prove({}, parse("p | ~p"));
  REQUIRE(taut.derivation.has_value());
  CHECK(check(*taut.derivation).hypotheses.empty());
}

TEST_CASE("prove: completeness sweep on random valid entailments") {
  std::mt19937 rng(515151);
  Universe u({"p", "q"});
  int proved = 0, refuted = 0;
  while (proved < 25 || refuted < 25) {
    Formula psi = random_plv(rng, 2);
    Formula phi = random_plv(rng, 2);
    bool valid = entails({psi}, phi, u);
    ProveResult r = prove({psi}, phi);
    CHECK(r.derivation.has_value() == valid);
    if (valid && proved < 25) {
      Sequent s = check(*r.derivation);
      CHECK(s.conclusion == phi);
      for (const Formula& h : s.hypotheses) CHECK(h == psi);
      ++proved;
    }
    if (!valid && refuted < 25) {
      REQUIRE(r.countermodel.has_value());
      CHECK(satisfies(r.universe, *r.countermodel, psi));
      CHECK_FALSE(satisfies(r.universe, *r.countermodel, phi));
      ++refuted;
    }
  }
}

TEST_CASE("replacement rewrites equivalent subformulas in context") {
  struct Case {
    const char *phi, *chi, *chi2;
    std::size_t occ;
  } cases[] = {
      {"~x", "p \\/ q", "q \\/ p", 0},
      {"x & (x \\/ r)", "p | q", "q | p", 1},
      {"x -> r", "p \\/ q", "q \\/ p", 0},
      {"~(x | r)", "p & q", "q & p", 0},
  };
  for (const Case& c : cases) {
    Formula chi = parse(c.chi), chi2 = parse(c.chi2);
    ProveResult lr = prove({chi}, chi2), rl = prove({chi2}, chi);
    REQUIRE(lr.derivation.has_value());
    REQUIRE(rl.derivation.has_value());
    Formula phi = parse(c.phi);
    Derivation d = replacement(phi, "x", c.occ, *lr.derivation, *rl.derivation);
    Sequent s = check(d);
    CHECK(s.conclusion == substitute(phi, "x", chi2, c.occ));
    CHECK(s.hypotheses == std::vector<Formula>{substitute(phi, "x", chi, c.occ)});
    check_sound(d);
  }
}
