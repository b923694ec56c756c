#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "teamlog/formula.hpp"

using namespace teamlog;

TEST_CASE("parsing the connective inventory") {
  Formula f = parse("p \\/ ~p");
  CHECK(f == Formula::gor(Formula::prop("p"), Formula::neg(Formula::prop("p"))));

  Formula d = parse("=(p1 p2, q)");
  CHECK(d == Formula::dep({"p1", "p2"}, "q"));

  Formula i = parse("T B <= p q");
  CHECK(i == Formula::inc({Term::top(), Term::bot()}, {Term::variable("p"), Term::variable("q")}));

  CHECK(parse("=(p)") == Formula::dep({}, "p"));
  CHECK(parse("T") == Formula::neg(Formula::bottom()));
  CHECK(parse("_|_") == Formula::bottom());
}

TEST_CASE("precedence: ~, &, |, \\/, ->, right-associative") {
  CHECK(parse("~p & q") == Formula::conj(Formula::neg(Formula::prop("p")), Formula::prop("q")));
  CHECK(parse("p & q | r") ==
        Formula::lor(Formula::conj(Formula::prop("p"), Formula::prop("q")), Formula::prop("r")));
  CHECK(parse("p | q \\/ r") ==
        Formula::gor(Formula::lor(Formula::prop("p"), Formula::prop("q")), Formula::prop("r")));
  CHECK(parse("p \\/ q -> r") ==
        Formula::impl(Formula::gor(Formula::prop("p"), Formula::prop("q")), Formula::prop("r")));
  CHECK(parse("p & q & r") ==
        Formula::conj(Formula::prop("p"), Formula::conj(Formula::prop("q"), Formula::prop("r"))));
  CHECK(parse("(p & q) & r") ==
        Formula::conj(Formula::conj(Formula::prop("p"), Formula::prop("q")), Formula::prop("r")));
}

TEST_CASE("defined implications desugar") {
  CHECK(parse("p ->. q") == Formula::lor(Formula::neg(Formula::prop("p")), Formula::prop("q")));
  CHECK(parse("p ->: q") == Formula::gor(Formula::neg(Formula::prop("p")), Formula::prop("q")));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("p &"), ParseError);
  CHECK_THROWS_AS(parse("p q"), ParseError);
  CHECK_THROWS_AS(parse("p q <= r"), ParseError);  // arity mismatch
  CHECK_THROWS_AS(parse("=(p q)"), ParseError);
  CHECK_THROWS_AS(parse(")"), ParseError);
  CHECK_THROWS_AS(parse("p @ q"), ParseError);
}

TEST_CASE("classify") {
  auto all = std::set<Fragment>(all_fragments().begin(), all_fragments().end());
  CHECK(classify(parse("p & ~q")) == all);
  CHECK(classify(parse("=(p) | ~=(p)")) ==
        std::set<Fragment>{Fragment::PLdep, Fragment::PLdepinc, Fragment::PLfull});
  CHECK(classify(parse("p \\/ ~p")) ==
        std::set<Fragment>{Fragment::PLv, Fragment::PLincV, Fragment::PLfull});
  CHECK(classify(parse("p -> q")) == std::set<Fragment>{Fragment::PLfull});
  CHECK(classify(parse("T B <= p q")) ==
        std::set<Fragment>{Fragment::PLinc, Fragment::PLincV, Fragment::PLdepinc, Fragment::PLfull});
}

TEST_CASE("classify is monotone on the fragment lattice") {
  auto covers = [](Fragment f, Fragment g) {
    auto a = fragment_spec(f), b = fragment_spec(g);
    return (!a.allows_gor || b.allows_gor) && (!a.allows_impl || b.allows_impl) &&
           (!a.allows_dep || b.allows_dep) && (!a.allows_inc || b.allows_inc);
  };
  std::vector<Formula> corpus = {
      parse("p"), parse("p \\/ q"), parse("=(p)"), parse("p <= q"), parse("p -> q"),
      parse("~(p \\/ q) & (p <= q)"), parse("=(p, q) | r")};
  for (const Formula& f : corpus) {
    auto cls = classify(f);
    for (Fragment a : cls)
      for (Fragment b : all_fragments())
        if (covers(a, b)) CHECK(cls.count(b) == 1);
  }
}

TEST_CASE("harrop") {
  CHECK(is_harrop(parse("~(p \\/ ~p)")));
  CHECK_FALSE(is_harrop(parse("p \\/ ~p")));
  CHECK(is_harrop(parse("~((p \\/ q) & r) | (q & r)")));
  // every classical formula is Harrop
  for (const char* s : {"p", "_|_", "~p & q", "p | q | ~r", "~(p & ~q)"})
    CHECK(is_harrop(parse(s)));
}

TEST_CASE("substitute single occurrence") {
  Formula pq = parse("p & p");
  CHECK(substitute(pq, "p", parse("q"), 0) == parse("q & p"));
  CHECK(substitute(pq, "p", parse("q"), 1) == parse("p & q"));
  CHECK(substitute(parse("~p"), "p", Formula::bottom(), 0) == parse("~_|_"));
  CHECK_THROWS_AS(substitute(parse("q"), "p", parse("r"), 0), std::out_of_range);
  CHECK_THROWS_AS(substitute(pq, "p", parse("q"), 2), std::out_of_range);
  // atom argument positions are not formula occurrences
  CHECK(count_occurrences(parse("=(p, q) & p"), "p") == 1);
}

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 9);
  std::uniform_int_distribution<int> var(1, 3);
  auto leaf_name = [&] { return "p" + std::to_string(var(rng)); };
  switch (pick(rng)) {
    case 0: return Formula::prop(leaf_name());
    case 1: return Formula::bottom();
    case 2: return Formula::neg(random_formula(rng, depth - 1));
    case 3: return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return Formula::lor(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return Formula::gor(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 6: return Formula::impl(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 7: return Formula::dep({leaf_name()}, leaf_name());
    case 8: return Formula::dep({}, leaf_name());
    default:
      return Formula::inc({Term::variable(leaf_name()), Term::top()},
                          {Term::variable(leaf_name()), Term::bot()});
  }
}

}  // namespace

TEST_CASE("print/parse round-trip identity") {
  std::mt19937 rng(20240811);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 4);
    CHECK(parse(f.str()) == f);
  }
}
