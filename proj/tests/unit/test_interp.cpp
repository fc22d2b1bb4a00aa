#include <doctest.h>

#include "ctms/interp.hpp"
#include "ctms/syntax.hpp"

#include <sstream>

using namespace ctms;

namespace {
HeapLoc at(const char* o, long long i) { return HeapLoc{ObjId{o}, i}; }
ExprPtr loc(const char* o, long long i) { return lit(Value{at(o, i)}); }
}  // namespace

TEST_SUITE("interp") {
  TEST_CASE("step on reads") {
    PhysHeap h{{at("a", 0), int_value(7)}};
    auto d = step(h, c_read(loc("a", 0)));
    REQUIRE(d.kind == StepOutcome::Kind::Done);
    CHECK(d.value == int_value(7));
    CHECK(d.heap == h);

    auto e = step({}, c_read(loc("a", 0)));
    REQUIRE(e.kind == StepOutcome::Kind::MemError);
    CHECK(e.loc == at("a", 0));
    CHECK(e.access == AccessKind::Read);
  }

  TEST_CASE("writes update the bound cell only") {
    PhysHeap h{{at("a", 0), int_value(7)}};
    auto d = step(h, c_write(loc("a", 0), lit_int(5)));
    REQUIRE(d.kind == StepOutcome::Kind::Done);
    CHECK(d.heap.at(at("a", 0)) == int_value(5));
    auto e = step(h, c_write(loc("a", 1), lit_int(5)));
    REQUIRE(e.kind == StepOutcome::Kind::MemError);
    CHECK(e.access == AccessKind::Write);
  }

  TEST_CASE("empty for range finishes with unit") {
    auto r = step({}, c_for("i", lit_int(3), lit_int(2), c_read(loc("a", 0))));
    REQUIRE(r.kind == StepOutcome::Kind::Done);
    CHECK(r.value == unit_value());
  }

  TEST_CASE("nonempty for range unfolds") {
    auto r = step({}, c_for("i", lit_int(0), lit_int(2), c_read(loc("a", 0))));
    CHECK(r.kind == StepOutcome::Kind::Next);
  }

  TEST_CASE("run examples") {
    auto body = substitute(substitute(instantiate_trav(0, 2, 2).body, "s", lit_int(2)), "a", lit(Value{ObjId{"a"}}));
    auto v = run(heap_from_array_pred(ObjId{"a"}, 2, int_value(0)), body, kDefaultFuel).verdict;
    CHECK(v.kind == Verdict::Kind::Unsafe);
    CHECK(v.loc == at("a", 2));

    auto body0 = substitute(substitute(instantiate_trav(0, 2, 2).body, "s", lit_int(0)), "a", lit(Value{ObjId{"a"}}));
    CHECK(run({}, body0, kDefaultFuel).verdict.kind == Verdict::Kind::Safe);

    auto w = run({}, c_while(loc("a", 0), c_expr(lit(unit_value()))), 100).verdict;
    CHECK(w.kind == Verdict::Kind::Unsafe);
    CHECK(w.loc == at("a", 0));
    CHECK(w.access == AccessKind::Read);
  }

  TEST_CASE("fuel and stuck") {
    PhysHeap h{{at("n", 0), Value{true}}};
    auto loop = c_while(loc("n", 0), c_expr(lit(unit_value())));
    auto v = run(h, loop, 50).verdict;
    CHECK(v.kind == Verdict::Kind::Unknown);
    CHECK(v.reason == UnknownReason::FuelExhausted);
    auto s = run({}, parse_cmd("if 1 then () else ()"), 10).verdict;
    CHECK(s.kind == Verdict::Kind::Unknown);
    CHECK(s.reason == UnknownReason::Stuck);
  }

  TEST_CASE("heap from array predicate") {
    CHECK(heap_from_array_pred(ObjId{"a"}, 0, int_value(0)).empty());
    auto h = heap_from_array_pred(ObjId{"a"}, 2, int_value(0));
    CHECK(h == PhysHeap{{at("a", 0), int_value(0)}, {at("a", 1), int_value(0)}});
    auto h3 = heap_from_array_pred(ObjId{"a"}, 3, int_value(7));
    CHECK(h3.size() == 3);
    for (const auto& [l, v] : h3) CHECK(v == int_value(7));
  }

  TEST_CASE("memsafe_concrete examples") {
    auto t = instantiate_trav(0, 2, 2);
    CHECK(memsafe_concrete(t, {{"s", int_value(1)}}).kind == Verdict::Kind::Safe);
    auto u = memsafe_concrete(t, {{"s", int_value(2)}});
    CHECK(u.kind == Verdict::Kind::Unsafe);
    CHECK(u.loc == at("a", 2));
    CHECK(memsafe_concrete(instantiate_sum(0, 1, 0), {{"s", int_value(1)}}).kind == Verdict::Kind::Safe);
    auto u0 = memsafe_concrete(instantiate_sum(0, 0, 0), {{"s", int_value(1)}});
    CHECK(u0.kind == Verdict::Kind::Unsafe);
    CHECK(u0.loc == at("a", 1));
    CHECK(memsafe_concrete(t, {}).kind == Verdict::Kind::Unknown);
  }

  TEST_CASE("unsupported precondition") {
    auto p = parse_program("requires array(a, s) || n |-> _; !n");
    CHECK(memsafe_concrete(p, {{"s", int_value(1)}}).kind == Verdict::Kind::Unknown);
  }

  TEST_CASE("empty range equals unit") {
    auto h = heap_from_array_pred(ObjId{"a"}, 3, int_value(1));
    auto r1 = run(h, c_for("i", lit_int(5), lit_int(4), c_write(offset(lit(Value{ObjId{"a"}}), var("i")), lit_int(0))), 100);
    auto r2 = run(h, c_expr(lit(unit_value())), 100);
    CHECK(r1.verdict.kind == r2.verdict.kind);
    CHECK(r1.heap == r2.heap);
  }

  TEST_CASE("fill value does not change verdicts on the grid") {
    for (long long L = 0; L <= 3; ++L)
      for (long long Z = -3; Z <= 3; ++Z)
        for (long long s = 0; s <= 10; ++s) {
          auto p = instantiate_sum(L, 1, Z);
          auto v0 = memsafe_concrete(p, {{"s", int_value(s)}}, kDefaultFuel, int_value(0));
          auto v1 = memsafe_concrete(p, {{"s", int_value(s)}}, kDefaultFuel, int_value(9));
          CHECK(v0.same_witness(v1));
        }
  }

  TEST_CASE("fuel monotonicity") {
    auto p = instantiate_trav(0, 1, 1);
    auto base = memsafe_concrete(p, {{"s", int_value(6)}}, 1000);
    REQUIRE(base.kind != Verdict::Kind::Unknown);
    for (std::uint64_t f : {2000u, 100000u}) CHECK(memsafe_concrete(p, {{"s", int_value(6)}}, f).same_witness(base));
  }

  TEST_CASE("trace output") {
    std::ostringstream tr;
    memsafe_concrete(instantiate_trav(0, 2, 2), {{"s", int_value(2)}}, kDefaultFuel, int_value(0), &tr);
    CHECK(tr.str().find("memory error") != std::string::npos);
  }
}
