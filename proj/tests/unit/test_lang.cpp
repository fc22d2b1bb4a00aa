#include <doctest.h>

#include "generators.hpp"

#include "ctms/lang.hpp"
#include "ctms/syntax.hpp"

using namespace ctms;

TEST_SUITE("lang") {
  TEST_CASE("parse a traversal") {
    auto p = parse_program("requires array(a,s); for i in [0 : s-1] do !a[i] := 0");
    REQUIRE(p.body->kind == CmdKind::For);
    CHECK(p.body->c1->kind == CmdKind::Write);
    REQUIRE(p.param("s"));
    CHECK(p.param("s")->domain == ParamDomain::Nat);
    CHECK(p.param("a")->domain == ParamDomain::Obj);
  }

  TEST_CASE("expression body") {
    auto p = parse_program("requires true; 1 + 2");
    REQUIRE(p.body->kind == CmdKind::Expr);
    CHECK(to_string(p.body->e1) == "1 + 2");
  }

  TEST_CASE("parse error at end of input") {
    try {
      parse_program("for i in [0 :");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line == 1);
      CHECK(e.col > 1);
      CHECK_FALSE(e.expected.empty());
    }
  }

  TEST_CASE("unbound variable") { CHECK_THROWS_AS(parse_program("requires true; !a[k]"), UnboundVariable); }

  TEST_CASE("pretty print round-trips") {
    for (auto p : {instantiate_trav(0, 2, 2), instantiate_sum(1, 3, -2), instantiate_comp(0, 1, 0),
                   parse_program("requires array(a, s); let x = (if s < 3 then 1 else 2) in (if x = 1 then !a[0] else ())"),
                   parse_program("1 + 2")}) {
      auto q = parse_program(pretty_print(p));
      CHECK(equal(p, q));
    }
    CHECK(pretty_print(parse_program("1 + 2")).rfind("requires true;", 0) == 0);
  }

  TEST_CASE("round-trip over generated programs") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
      auto p = parse_program(testing::random_program_text(rng));
      CHECK(equal(p, parse_program(pretty_print(p))));
    }
  }

  TEST_CASE("closed expressions") {
    CHECK(eval_closed_expr(parse_expr("1 + 2")) == int_value(3));
    CHECK(eval_closed_expr(parse_expr("5 = 5")) == Value{true});
    CHECK_FALSE(eval_closed_expr(parse_expr("x + 1")));
    CHECK_FALSE(eval_closed_expr(parse_expr("1 + true")));
  }

  TEST_CASE("command substitution") {
    auto c1 = substitute(parse_cmd("let x = 1 in x + y"), "y", lit_int(2));
    CHECK(equal(c1, parse_cmd("let x = 1 in x + 2")));
    auto c2 = substitute(parse_cmd("let x = y in x"), "x", lit_int(5));
    CHECK(equal(c2, parse_cmd("let x = y in x")));
    auto c3 = substitute(parse_cmd("for i in [0 : s] do !a[i]"), "s", lit_int(3));
    CHECK(equal(c3, parse_cmd("for i in [0 : 3] do !a[i]")));
  }

  TEST_CASE("free variables") {
    CHECK(free_vars(parse_cmd("for i in [0 : s-1] do !a[i]")) == std::set<std::string>{"a", "s"});
    CHECK(free_vars(parse_cmd("let x = 1 in x")).empty());
    CHECK(free_vars(parse_assertion("array(a,s) * n |-> _")) == std::set<std::string>{"a", "n", "s"});
  }

  TEST_CASE("substituting a closed value removes the variable") {
    auto c = parse_cmd("for i in [0 : s - 2] do !a[i + s]");
    auto fv = free_vars(substitute(c, "s", lit_int(4)));
    CHECK(fv == std::set<std::string>{"a"});
  }

  TEST_CASE("sequencing binds a variable the second command never sees") {
    auto c = parse_cmd("!a[0]; !a[1]");
    REQUIRE(is_seq(*c));
    CHECK_FALSE(free_vars(c->c2).count(c->var));
  }

  TEST_CASE("builders") {
    auto t = instantiate_trav(0, 2, 2);
    CHECK(free_vars(t.body).size() <= 2);
    std::set<std::string> names;
    for (const auto& q : t.params) names.insert(q.name);
    CHECK(names == std::set<std::string>{"a", "s"});
    auto s = instantiate_sum(0, 0, 0);
    CHECK(to_string(s.pre) == "array(a, s) * n |-> _");
    names.clear();
    for (const auto& q : s.params) names.insert(q.name);
    CHECK(names == std::set<std::string>{"a", "n", "s"});
  }
}
