#include <doctest.h>

#include "generators.hpp"

#include "ctms/assertions.hpp"
#include "ctms/syntax.hpp"
#include "ctms/vc.hpp"

using namespace ctms;
using testing::grid;

TEST_SUITE("properties") {
  TEST_CASE("grid programs round-trip through the printer") {
    for (const auto& c : grid())
      for (auto p : {instantiate_trav(c.L, c.R, c.Z), instantiate_sum(c.L, c.R, c.Z)}) {
        auto text = pretty_print(p);
        auto q = parse_program(text);
        CHECK(equal(p, q));
        CHECK(pretty_print(q) == text);
      }
  }

  TEST_CASE("simplify keeps validity on the grid") {
    for (const std::string fam : {"trav", "sum"})
      for (const auto& c : grid()) {
        auto p = fam == "trav" ? instantiate_trav(c.L, c.R, c.Z) : instantiate_sum(c.L, c.R, c.Z);
        auto vc = vc_for_spec(p);
        auto simp = simplify(vc.matrix, {"s"});
        for (long long s = 0; s <= 12; ++s) {
          Domains d{{"a", {Value{ObjId{"a"}}}}, {"s", {int_value(s)}}};
          if (p.param("n")) d["n"] = {Value{HeapLoc{ObjId{"n"}, 0}}};
          ModelOptions mo;
          long long b = std::abs(c.L) + std::abs(c.R) + std::abs(c.Z) + 2;
          mo.int_clip = [s, b](const Env&) { return std::make_optional(std::make_pair(Int(-b), Int(s + b))); };
          CHECK(valid_bounded(vc.matrix, d, mo) == valid_bounded(simp, d, mo));
        }
      }
  }

  TEST_CASE("to_pure equivalence on the grid") {
    for (const auto& c : grid()) {
      auto p = instantiate_trav(c.L, c.R, c.Z);
      auto vc = vc_for_spec(p);
      auto pf = to_pure(vc);
      REQUIRE(pf);
      for (long long s = 0; s <= 12; ++s) {
        long long lo = std::min(c.L, -std::abs(c.Z)) - 2;
        long long hi = s + std::abs(c.Z) + 2;
        auto clip = std::make_pair(Int(lo), Int(hi));
        bool pure = eval_pure(pf->formula, {{"s", int_value(s)}}, clip);
        Domains d{{"a", {Value{ObjId{"a"}}}}, {"s", {int_value(s)}}};
        ModelOptions mo;
        mo.int_clip = [clip](const Env&) { return std::make_optional(clip); };
        CHECK(pure == valid_bounded(vc.matrix, d, mo));
      }
    }
  }

  TEST_CASE("valid VC implies safe runs for generated programs") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 40; ++k) {
      auto p = parse_program(testing::random_program_text(rng));
      auto vc = vc_for_spec(p);
      for (long long s = 0; s <= 6; ++s) {
        Domains d{{"a", {Value{ObjId{"a"}}}}, {"s", {int_value(s)}}};
        if (p.param("n")) d["n"] = {Value{HeapLoc{ObjId{"n"}, 0}}};
        ModelOptions mo;
        mo.int_clip = [s](const Env&) { return std::make_optional(std::make_pair(Int(-12), Int(s + 12))); };
        if (valid_bounded(vc.matrix, d, mo))
          CHECK(memsafe_concrete(p, {{"s", int_value(s)}}).kind == Verdict::Kind::Safe);
      }
    }
  }
}
