#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "teamlog/closure.hpp"

using namespace teamlog;

namespace {

Universe up() { return Universe({"p"}); }

TeamProperty full(const Universe& u) {
  TeamProperty p(u);
  for (TeamMask t = 0; t < p.team_count(); ++t) p.set(t);
  return p;
}

}  // namespace

TEST_CASE("has_empty") {
  Universe u = up();
  CHECK(has_empty(extension(parse("_|_"), u)));
  TeamProperty single(u);
  single.set(0b01);
  CHECK_FALSE(has_empty(single));
  CHECK(has_empty(extension(parse("p"), u)));
}

TEST_CASE("downward closure") {
  Universe u = up();
  CHECK(is_downward_closed(extension(parse("=(p)"), u)));
  CHECK(is_downward_closed(full(u)));

  std::optional<ClosureWitness> w;
  TeamProperty inc = extension(parse("T <= p"), u);
  CHECK_FALSE(is_downward_closed(inc, &w));
  REQUIRE(w.has_value());
  CHECK(inc.contains(w->a));
  CHECK((w->b & ~w->a) == 0);
  CHECK_FALSE(inc.contains(w->b));
}

TEST_CASE("union closure") {
  Universe u = up();
  CHECK(is_union_closed(extension(parse("T <= p"), u)));

  std::optional<ClosureWitness> w;
  TeamProperty dep = extension(parse("=(p)"), u);
  CHECK_FALSE(is_union_closed(dep, &w));
  REQUIRE(w.has_value());
  CHECK(dep.contains(w->a));
  CHECK(dep.contains(w->b));
  CHECK_FALSE(dep.contains(w->a | w->b));

  TeamProperty only_empty(u);
  only_empty.set(0);
  CHECK(is_union_closed(only_empty));
}

TEST_CASE("flatness") {
  CHECK(is_flat(extension(parse("~(p \\/ ~p)"), up())));
  CHECK_FALSE(is_flat(extension(parse("p \\/ ~p"), up())));
  for (const char* alpha : {"p", "~p", "p | ~p", "_|_", "~~p & p"})
    CHECK(is_flat(extension(parse(alpha), up())));
}

TEST_CASE("flat iff empty + downward + union, exhaustively at n<=2") {
  for (auto vars : {std::vector<std::string>{"p"}, std::vector<std::string>{"p", "q"}}) {
    Universe u(vars);
    std::uint64_t limit = std::uint64_t{1} << u.team_count();
    // all team properties over one variable; sampled stride over two
    std::uint64_t stride = u.size() == 1 ? 1 : 257;
    for (std::uint64_t code = 0; code < limit; code += stride) {
      TeamProperty T(u);
      for (TeamMask t = 0; t < u.team_count(); ++t)
        if (code >> t & 1) T.set(t);
      bool triple = has_empty(T) && is_downward_closed(T) && is_union_closed(T);
      CHECK(is_flat(T) == triple);
    }
  }
}
