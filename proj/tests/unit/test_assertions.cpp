#include <doctest.h>

#include "generators.hpp"

#include "ctms/assertions.hpp"
#include "ctms/errors.hpp"
#include "ctms/syntax.hpp"

using namespace ctms;

namespace {
HeapLoc at(const char* o, long long i) { return HeapLoc{ObjId{o}, i}; }
ExprPtr loc(const char* o, long long i) { return lit(Value{at(o, i)}); }
ExprPtr obj(const char* o) { return lit(Value{ObjId{o}}); }
}  // namespace

TEST_SUITE("assertions") {
  TEST_CASE("models examples") {
    PhysHeap one{{at("a", 0), int_value(3)}};
    CHECK(models(one, a_pts(loc("a", 0), lit_int(3)), {}));
    CHECK_FALSE(models(one, a_pts(loc("a", 0), lit_int(4)), {}));
    CHECK(models({}, a_array(obj("a"), lit_int(0)), {}));
    CHECK(models(one, a_array(obj("a"), lit_int(1)), {}));
    CHECK_FALSE(models({}, a_array(obj("a"), lit_int(1)), {}));
  }

  TEST_CASE("affine reading") {
    PhysHeap h{{at("a", 0), int_value(3)}, {at("a", 1), int_value(4)}};
    CHECK(models(h, a_true(), {}));
    CHECK(models(h, a_pts(loc("a", 0), lit_int(3)), {}));
    CHECK(models(h, a_star(a_pts_any(loc("a", 0)), a_pts_any(loc("a", 1))), {}));
    CHECK_FALSE(models(h, a_star(a_pts_any(loc("a", 0)), a_pts_any(loc("a", 0))), {}));
  }

  TEST_CASE("wand with a finite footprint") {
    auto w = a_wand(a_pts_any(loc("a", 0)), a_pts_any(loc("a", 0)));
    CHECK(models({}, w, {}));
    auto w2 = a_wand(a_pts_any(loc("a", 0)), a_pts_any(loc("a", 1)));
    CHECK_FALSE(models({}, w2, {}));
    CHECK(models({{at("a", 1), int_value(0)}}, w2, {}));
  }

  TEST_CASE("wand with an unbounded left side") {
    auto w = a_wand(a_exists("x", Domain::locs(), a_pts_any(var("x"))), a_true());
    CHECK_THROWS_AS(models({}, w, {}), UnsupportedAssertion);
  }

  TEST_CASE("valid_bounded examples") {
    CHECK(valid_bounded(parse_assertion("0 <= s"), {{"s", int_range(0, 5)}}));
    CHECK_FALSE(valid_bounded(parse_assertion("forall i in [0..4]. 0 <= i + 2 && i + 2 < 2"), {}));
    CHECK(valid_bounded(parse_assertion("array(a, s) -* array(a, s)"),
                        {{"a", {Value{ObjId{"a"}}}}, {"s", int_range(0, 3)}}));
  }

  TEST_CASE("valid_bounded reports a counterexample") {
    Counterexample cex;
    CHECK_FALSE(valid_bounded(parse_assertion("s < 3"), {{"s", int_range(0, 5)}}, {}, &cex));
    CHECK(*as_int(cex.env.at("s")) >= 3);
  }

  TEST_CASE("expand_array examples") {
    auto two = expand_array(parse_assertion("array(a, 2)"), {{"a", Value{ObjId{"a"}}}});
    CHECK(to_string(two) == "a[0] |-> _ * a[1] |-> _");
    CHECK(models({{at("a", 0), int_value(1)}, {at("a", 1), int_value(2)}}, two, {{"a", Value{ObjId{"a"}}}}));
    CHECK(equal(expand_array(parse_assertion("array(a, 0)"), {{"a", Value{ObjId{"a"}}}}), a_true()));
    auto one = expand_array(parse_assertion("array(a, s)"), {{"a", Value{ObjId{"a"}}}, {"s", int_value(1)}});
    CHECK(to_string(one) == "a[0] |-> _");
    CHECK_THROWS_AS(expand_array(parse_assertion("array(a, s)"), {{"a", Value{ObjId{"a"}}}, {"s", int_value(-1)}}),
                    NegativeSize);
  }

  TEST_CASE("expand_array preserves models") {
    std::mt19937_64 rng(11);
    auto u = testing::small_universe();
    for (int k = 0; k < 200; ++k) {
      auto h = testing::random_heap(rng, u, 6);
      for (long long s = 0; s <= 4; ++s) {
        Env env{{"a", Value{ObjId{"a"}}}, {"s", int_value(s)}};
        auto a = parse_assertion("array(a, s)");
        CHECK(models(h, a, env) == models(h, expand_array(a, env), env));
      }
    }
  }

  TEST_CASE("star agrees with brute force") {
    std::mt19937_64 rng(3);
    auto u = testing::small_universe();
    for (int k = 0; k < 300; ++k) {
      auto h = testing::random_heap(rng, u, 6);
      auto a = testing::random_assertion(rng, u, 2);
      auto b = testing::random_assertion(rng, u, 2);
      CHECK(models(h, a_star(a, b), {}) == models_star_bruteforce(h, a, b, {}));
    }
  }

  TEST_CASE("box is heap independent") {
    std::mt19937_64 rng(5);
    auto u = testing::small_universe();
    for (int k = 0; k < 200; ++k) {
      auto a = a_box(testing::random_assertion(rng, u, 2));
      auto h = testing::random_heap(rng, u, 6);
      CHECK(models(h, a, {}) == models({}, a, {}));
    }
  }

  TEST_CASE("persistent wands hold on every heap") {
    std::mt19937_64 rng(9);
    auto u = testing::small_universe();
    std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
    std::size_t boxed_true = 0;
    for (int k = 0; k < 200; ++k) {
      // wands need monotone sides and a finite left footprint
      auto p = a_pts_any(lit(Value{u[pick(rng)]}));
      if (k % 2) p = a_star(p, a_pts_any(lit(Value{u[pick(rng)]})));
      auto q = testing::random_assertion(rng, u, 1);
      if (!monotone(q)) continue;
      auto w = a_wand(p, q);
      auto h = testing::random_heap(rng, u, 4);
      if (!models(h, a_box(w), {})) continue;
      ++boxed_true;
      for (int j = 0; j < 10; ++j) CHECK(models(testing::random_heap(rng, u, 4), w, {}));
    }
    CHECK(boxed_true > 0);
  }

  TEST_CASE("syntactic classes") {
    CHECK(heap_independent(parse_assertion("0 <= s && s < 3")));
    CHECK(heap_independent(a_box(a_pts_any(loc("a", 0)))));
    CHECK_FALSE(heap_independent(parse_assertion("array(a, s)")));
    CHECK(monotone(parse_assertion("array(a, s) * n |-> _")));
  }
}
