#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "teamlog/normal_form.hpp"

using namespace teamlog;

namespace {

// Random generator for formulas in the \/-fragment (optionally with ->)
// over a fixed small variable pool.
Formula random_plv(std::mt19937& rng, int depth, bool with_impl) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : (with_impl ? 6 : 5));
  switch (pick(rng)) {
    case 0: return Formula::prop(rng() % 2 ? "p" : "q");
    case 1: return rng() % 4 ? Formula::prop("r") : Formula::bottom();
    case 2: return Formula::neg(random_plv(rng, depth - 1, with_impl));
    case 3:
      return Formula::conj(random_plv(rng, depth - 1, with_impl),
                           random_plv(rng, depth - 1, with_impl));
    case 4:
      return Formula::lor(random_plv(rng, depth - 1, with_impl),
                          random_plv(rng, depth - 1, with_impl));
    case 5:
      return Formula::gor(random_plv(rng, depth - 1, with_impl),
                          random_plv(rng, depth - 1, with_impl));
    default:
      return Formula::impl(random_plv(rng, depth - 1, with_impl),
                           random_plv(rng, depth - 1, with_impl));
  }
}

}  // namespace

TEST_CASE("to_dnf base and structural cases") {
  CHECK(to_dnf(parse("p & ~q")) == std::vector<Formula>{parse("p & ~q")});
  CHECK(to_dnf(parse("p \\/ ~p")) == std::vector<Formula>{parse("p"), parse("~p")});
  CHECK(to_dnf(parse("~(p \\/ ~p)")) == std::vector<Formula>{parse("~p & ~~p")});
  CHECK(to_dnf(parse("(p \\/ q) | r")) == std::vector<Formula>{parse("p | r"), parse("q | r")});
  CHECK(to_dnf(parse("(p \\/ q) & (r \\/ p)")) ==
        std::vector<Formula>{parse("p & r"), parse("p & p"), parse("q & r"), parse("q & p")});
  // concatenation deduplicates
  CHECK(to_dnf(parse("(p \\/ q) \\/ p")) == std::vector<Formula>{parse("p"), parse("q")});
}

TEST_CASE("to_dnf sanity on the negation example") {
  // extension of ~(p \/ ~p) is {empty team}
  Universe u({"p"});
  TeamProperty only_empty(u);
  only_empty.set(0);
  CHECK(extension(dnf_formula(parse("~(p \\/ ~p)")), u) == only_empty);
}

TEST_CASE("to_dnf rejects dependence/inclusion atoms and oversize output") {
  CHECK_THROWS_AS(to_dnf(parse("=(p)")), NormalFormError);
  CHECK_THROWS_AS(to_dnf(parse("p & (q <= p)")), NormalFormError);
  CHECK_THROWS_AS(to_dnf(parse("(p \\/ q) & (p \\/ r)"), 2), NormalFormError);
}

TEST_CASE("to_dnf preserves meaning and yields classical disjuncts") {
  std::mt19937 rng(20260823);
  for (int with_impl = 0; with_impl < 2; ++with_impl) {
    for (int i = 0; i < 120; ++i) {
      Formula phi = random_plv(rng, 3, with_impl != 0);
      std::vector<Formula> parts;
      try {
        parts = to_dnf(phi);
      } catch (const NormalFormError&) {
        continue;  // hit the size guardrail on a pathological draw
      }
      REQUIRE(!parts.empty());
      for (const Formula& a : parts) CHECK(is_classical(a));
      Universe u({"p", "q", "r"});
      CHECK(equivalent(phi, dnf_formula(phi), u));
    }
  }
}

TEST_CASE("harrop_flatten") {
  CHECK(harrop_flatten(parse("~(p \\/ ~p)")) == parse("~(p | ~p)"));
  CHECK(harrop_flatten(parse("p & ~q")) == parse("p & ~q"));
  CHECK(harrop_flatten(parse("~(p \\/ q) | (q & r)")) == parse("~(p | q) | (q & r)"));
  CHECK_THROWS_AS(harrop_flatten(parse("p \\/ q")), NormalFormError);
  CHECK_THROWS_AS(harrop_flatten(parse("=(p)")), NormalFormError);

  std::mt19937 rng(7);
  Universe u({"p", "q", "r"});
  int done = 0;
  while (done < 60) {
    Formula phi = random_plv(rng, 3, false);
    if (!is_harrop(phi)) continue;
    Formula flat = harrop_flatten(phi);
    CHECK(is_classical(flat));
    CHECK(equivalent(phi, flat, u));
    ++done;
  }
}

TEST_CASE("decide_entailment_dnf matches the semantic judgment") {
  CHECK(decide_entailment_dnf(parse("p & q"), parse("p \\/ q")));
  CHECK_FALSE(decide_entailment_dnf(parse("p \\/ ~p"), parse("p")));
  CHECK(decide_entailment_dnf(parse("p \\/ q"), parse("p \\/ q")));

  std::mt19937 rng(99);
  Universe u({"p", "q", "r"});
  for (int i = 0; i < 150; ++i) {
    Formula psi = random_plv(rng, 2, false);
    Formula phi = random_plv(rng, 2, false);
    CHECK(decide_entailment_dnf(psi, phi) == entails({psi}, phi, u));
  }
}
