#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "teamlog/team.hpp"

using namespace teamlog;

namespace {

Universe up() { return Universe({"p"}); }
Universe upq() { return Universe({"p", "q"}); }

// {v0, v1} with v0(p)=0, v1(p)=1 over {p}
constexpr TeamMask kBoth = 0b11;

// Slow reference evaluator for the local-disjunction clause: enumerate all
// cover pairs r, s with r|s == t directly.  Independent of the SOS path in
// the engine.
bool cover_oracle(const Universe& u, TeamMask t, const Formula& l, const Formula& r) {
  std::vector<TeamMask> subs;
  for (TeamMask s = t;; s = (s - 1) & t) {
    subs.push_back(s);
    if (s == 0) break;
  }
  for (TeamMask a : subs)
    for (TeamMask b : subs)
      if ((a | b) == t && satisfies(u, a, l) && satisfies(u, b, r)) return true;
  return false;
}

Formula random_plv(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 5);
  std::uniform_int_distribution<int> var(0, 1);
  switch (pick(rng)) {
    case 0: return Formula::prop(var(rng) ? "q" : "p");
    case 1: return Formula::bottom();
    case 2: return Formula::neg(random_plv(rng, depth - 1));
    case 3: return Formula::conj(random_plv(rng, depth - 1), random_plv(rng, depth - 1));
    case 4: return Formula::lor(random_plv(rng, depth - 1), random_plv(rng, depth - 1));
    default: return Formula::gor(random_plv(rng, depth - 1), random_plv(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("excluded middle fails for global disjunction") {
  Formula f = parse("p \\/ ~p");
  CHECK_FALSE(satisfies(up(), kBoth, f));
  CHECK(satisfies(up(), 0b01, f));
  CHECK(satisfies(up(), 0b10, f));
}

TEST_CASE("empty team satisfies everything") {
  for (const char* s :
       {"p", "_|_", "~p", "p & q", "p | q", "p \\/ q", "p -> q", "=(p, q)", "p <= q"})
    CHECK(satisfies(upq(), 0, parse(s)));
}

TEST_CASE("negated constancy atom is bottom-equivalent") {
  Formula f = parse("~=(p)");
  CHECK_FALSE(satisfies(up(), kBoth, f));
  CHECK_FALSE(satisfies(up(), 0b01, f));  // singletons satisfy =(p)
  CHECK(equivalent(parse("~~=(p)"), parse("~_|_"), up()));
}

TEST_CASE("excluded middle over excluded middle, brute force") {
  // (p\/~p) | ~(p\/~p) is invalid: witness over {p,q} found by sweep
  Formula f = parse("(p \\/ ~p) | ~(p \\/ ~p)");
  CHECK_FALSE(entails({}, f, upq()));
  // ... and the cover search agrees with the pairwise oracle on it
  Formula l = parse("p \\/ ~p"), r = parse("~(p \\/ ~p)");
  Universe u = upq();
  for (TeamMask t = 0; t < u.team_count(); ++t)
    CHECK(satisfies(u, t, Formula::lor(l, r)) == cover_oracle(u, t, l, r));
}

TEST_CASE("local disjunction cover search matches pairwise oracle") {
  std::mt19937 rng(7);
  Universe u = upq();
  for (int i = 0; i < 60; ++i) {
    Formula l = random_plv(rng, 3), r = random_plv(rng, 3);
    Formula f = Formula::lor(l, r);
    for (TeamMask t = 0; t < u.team_count(); ++t)
      CHECK(satisfies(u, t, f) == cover_oracle(u, t, l, r));
  }
}

TEST_CASE("dependence atom semantics") {
  Universe u({"p", "q"});
  // valuation index = p + 2q: v0=(0,0), v1=(1,0), v2=(0,1), v3=(1,1)
  Formula d = parse("=(p, q)");
  CHECK(satisfies(u, 0b0011, d));        // {v0,v1}: p differs, fine
  CHECK(satisfies(u, 0b1001, d));        // {v0,v3}
  CHECK_FALSE(satisfies(u, 0b0101, d));  // {v0,v2}: same p, different q
  CHECK(satisfies(u, 0b1111, parse("=(q, q)")));
  CHECK_FALSE(satisfies(u, 0b0101, parse("=(q)")));
  CHECK(satisfies(u, 0b0011, parse("=(q)")));
}

TEST_CASE("inclusion atom semantics, constants on either side") {
  Universe u({"p", "q"});
  Formula i = parse("p <= q");
  CHECK(satisfies(u, 0b1001, i));        // {v0,v3}: p-values {0,1} = q-values
  CHECK_FALSE(satisfies(u, 0b0010, i));  // {v1}: p=1 but no row with q=1
  // primitive atom: the row p=1,q=0 must be present
  Formula prim = parse("T B <= p q");
  CHECK(satisfies(u, 0b0010, prim));
  CHECK_FALSE(satisfies(u, 0b1101, prim));
  // constants on the right: every row's p-value must equal 1
  Formula right = parse("p <= T");
  CHECK(satisfies(u, 0b1010, right));
  CHECK_FALSE(satisfies(u, 0b0111, right));
}

TEST_CASE("intuitionistic implication quantifies over subteams") {
  Universe u = up();
  // p -> _|_ is the negation
  for (TeamMask t = 0; t < u.team_count(); ++t)
    CHECK(satisfies(u, t, parse("p -> _|_")) == satisfies(u, t, parse("~p")));
  CHECK(satisfies(u, kBoth, parse("p -> p")));
  CHECK_FALSE(satisfies(u, kBoth, parse("(p \\/ ~p) -> p")));
}

TEST_CASE("single-valuation sat agrees with singleton teams") {
  Universe u = upq();
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    // classical only
    Formula f = random_plv(rng, 3);
    while (!is_classical(f)) f = random_plv(rng, 3);
    for (Valuation v = 0; v < u.valuation_count(); ++v)
      CHECK(single_valuation_sat(u, v, f) == satisfies(u, TeamMask{1} << v, f));
  }
  CHECK(single_valuation_sat(up(), 1, parse("p")));
  CHECK(single_valuation_sat(up(), 0, parse("~p")));
  CHECK_FALSE(single_valuation_sat(up(), 0, parse("_|_")));
  CHECK_THROWS_AS(single_valuation_sat(up(), 0, parse("p \\/ ~p")), std::invalid_argument);
}

TEST_CASE("negated formulas are flat") {
  std::mt19937 rng(13);
  Universe u = upq();
  for (int i = 0; i < 50; ++i) {
    Formula f = Formula::neg(random_plv(rng, 3));
    Evaluator ev(u, f);
    for (TeamMask t = 0; t < u.team_count(); ++t) {
      bool pointwise = true;
      for (TeamMask m = t; m; m &= m - 1)
        if (!satisfies(u, m & ~(m - 1), f)) { pointwise = false; break; }
      CHECK(ev.satisfies(t) == pointwise);
    }
  }
}

TEST_CASE("extension") {
  Universe u = up();
  CHECK(extension(parse("_|_"), u) == [&] {
    TeamProperty p(u);
    p.set(0);
    return p;
  }());
  // =(p) over {p}: all teams where p is constant
  TeamProperty dep = extension(parse("=(p)"), u);
  CHECK(dep.contains(0b00));
  CHECK(dep.contains(0b01));
  CHECK(dep.contains(0b10));
  CHECK_FALSE(dep.contains(0b11));
  // classical alpha: extension is the powerset of its truth set
  Universe u2 = upq();
  Formula alpha = parse("p | ~q");
  TeamMask truth = 0;
  for (Valuation v = 0; v < u2.valuation_count(); ++v)
    if (single_valuation_sat(u2, v, alpha)) truth |= TeamMask{1} << v;
  CHECK(extension(alpha, u2) == powerset_property(u2, truth));
}

TEST_CASE("entailment over a universe") {
  Universe u = upq();
  CHECK(entails({parse("p | q"), parse("~p")}, parse("q"), u));
  TeamMask cm = ~TeamMask{0};
  CHECK_FALSE(entails({parse("p \\/ ~p")}, parse("p"), up(), &cm));
  CHECK(satisfies(up(), cm, parse("p \\/ ~p")));
  CHECK_FALSE(satisfies(up(), cm, parse("p")));
  // over union closed formulas, excluded middle with local disjunction is valid
  for (const char* s : {"p <= q", "T <= p", "p & (q <= p)"}) {
    Formula phi = parse(s);
    CHECK(entails({}, Formula::lor(phi, Formula::neg(phi)), u));
  }
}

TEST_CASE("equivalences from the implication discussion") {
  Universe u = upq();
  Formula alpha = parse("p | ~q");
  Formula phi = parse("p \\/ q");
  CHECK(equivalent(Formula::impl(alpha, phi), Formula::lor(Formula::neg(alpha), phi), u));
}

TEST_CASE("universe cap and unknown variables") {
  CHECK_THROWS_AS(Universe({"a", "b", "c", "d", "e"}), UniverseError);
  CHECK_NOTHROW(Universe({"a", "b", "c", "d", "e"}, 5));
  CHECK_THROWS_AS(Universe({"p", "p"}), UniverseError);
  CHECK_THROWS_AS(satisfies(up(), 0, parse("q")), UniverseError);
}

TEST_CASE("team JSON round-trip") {
  auto [u, t] = team_from_json(R"({"vars":["p","q"],"team":["01","10"]})");
  CHECK(u.vars() == std::vector<std::string>{"p", "q"});
  CHECK(t == ((TeamMask{1} << 0b10) | (TeamMask{1} << 0b01)));
  auto [u2, t2] = team_from_json(team_to_json(u, t));
  CHECK(t2 == t);
  TeamProperty p = property_from_json(R"({"vars":["p"],"teams":[[],["0"],["1"]]})");
  CHECK(p.size() == 3);
  CHECK(p == property_from_json(property_to_json(p)));
}
