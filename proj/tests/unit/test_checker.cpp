#include <doctest.h>

#include "generators.hpp"
#include "oracle.hpp"

#include "ctms/checker.hpp"
#include "ctms/syntax.hpp"

using namespace ctms;
using testing::grid;

namespace {
long long size_of(const Verdict& v) { return static_cast<long long>(*as_int(v.binding.at("s"))); }
}  // namespace

TEST_SUITE("checker") {
  TEST_CASE("bmc examples") {
    auto p = instantiate_trav(0, 2, 2);
    CheckOptions o;
    o.sizes = {0, 1};
    auto r = check(p, Mode::BMC, o);
    CHECK(r.outcome == Outcome::BoundedSafeOnly);
    CHECK(r.per_size.size() == 2);

    o.sizes = {0, 1, 2};
    auto u = check(p, Mode::BMC, o);
    REQUIRE(u.outcome == Outcome::Unsafe);
    CHECK(size_of(u.witnesses.front()) == 2);
    CHECK(u.witnesses.front().loc == HeapLoc{ObjId{"a"}, 2});

    o.sizes = {};
    auto e = check(p, Mode::BMC, o);
    CHECK(e.outcome == Outcome::BoundedSafeOnly);
    CHECK(e.per_size.empty());
  }

  TEST_CASE("bmc never claims all sizes") {
    CheckOptions o;
    o.sizes = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    for (const auto& c : grid()) {
      auto r = check(instantiate_sum(c.L, c.R, c.Z), Mode::BMC, o);
      CHECK(r.outcome != Outcome::SafeForAllSizes);
    }
  }

  TEST_CASE("ct examples") {
    auto r = check(instantiate_trav(0, 2, 2), Mode::CT, {});
    REQUIRE(r.outcome == Outcome::Unsafe);
    CHECK(size_of(r.witnesses.front()) == 2);
    CHECK(r.witnesses.front().loc == HeapLoc{ObjId{"a"}, 2});
    CHECK(r.witnesses.front().step > 0);

    auto s = check(instantiate_trav(0, 1, 0), Mode::CT, {});
    CHECK(s.outcome == Outcome::SafeForAllSizes);
    REQUIRE(s.per_size.size() == 1);
    CHECK(s.per_size[0].size == 1);

    auto t = check(instantiate_trav(5, 3, -6), Mode::CT, {});
    REQUIRE(t.outcome == Outcome::Unsafe);
    CHECK(size_of(t.witnesses.front()) == 8);
    CHECK(t.witnesses.front().loc == HeapLoc{ObjId{"a"}, -1});
  }

  TEST_CASE("ct on an unsupported program is Unknown") {
    auto p = parse_program("requires n |-> true; while !n do !n := false");
    auto r = check(p, Mode::CT, {});
    CHECK(r.outcome == Outcome::Unknown);
    CHECK_FALSE(r.detail.empty());
    auto c = check(p, Mode::Compare, {});
    CHECK(c.outcome == Outcome::Inconclusive);
  }

  TEST_CASE("oracle examples") {
    CheckOptions o;
    auto r = check(instantiate_trav(0, 2, 2), Mode::Oracle, o);
    REQUIRE(r.per_size.size() == 31);
    for (const auto& ps : r.per_size)
      CHECK((ps.verdict.kind == Verdict::Kind::Unsafe) == (ps.size >= 2));
    CHECK(r.outcome == Outcome::Unsafe);

    auto s = check(instantiate_trav(0, 1, 0), Mode::Oracle, o);
    CHECK(s.outcome == Outcome::BoundedSafeOnly);
  }

  TEST_CASE("oracle agrees with the frozen table") {
    for (const std::string fam : {"trav", "sum"})
      for (const auto& c : grid()) {
        if (c.L != c.R) continue;
        auto p = fam == "trav" ? instantiate_trav(c.L, c.R, c.Z) : instantiate_sum(c.L, c.R, c.Z);
        auto r = check(p, Mode::Oracle, {});
        const auto& row = testing::grid_row(fam, c.L, c.R, c.Z);
        for (const auto& ps : r.per_size) {
          char got = ps.verdict.kind == Verdict::Kind::Unsafe ? 'U' : 'S';
          CHECK(row.table[static_cast<std::size_t>(ps.size)] == got);
        }
        if (row.least_unsafe >= 0) {
          REQUIRE(r.outcome == Outcome::Unsafe);
          CHECK(size_of(r.witnesses.front()) == row.least_unsafe);
          CHECK(r.witnesses.front().loc.index == row.bad_index);
        }
      }
  }

  TEST_CASE("compare examples") {
    CHECK(check(instantiate_trav(0, 2, 2), Mode::Compare, {}).outcome == Outcome::Agrees);
    CHECK(check(instantiate_trav(0, 1, 0), Mode::Compare, {}).outcome == Outcome::Agrees);
  }

  TEST_CASE("an off-by-one extractor is caught") {
    CheckOptions o;
    o.extract.threshold_bias = -1;
    std::size_t disagreements = 0;
    for (const auto& c : grid()) {
      auto r = check(instantiate_trav(c.L, c.R, c.Z), Mode::Compare, o);
      if (r.outcome == Outcome::Disagrees) ++disagreements;
    }
    CHECK(disagreements > 0);
    CHECK(check(instantiate_trav(0, 2, 2), Mode::Compare, o).outcome == Outcome::Disagrees);
  }

  TEST_CASE("witnesses replay") {
    for (const auto& c : grid()) {
      auto p = instantiate_sum(c.L, c.R, c.Z);
      auto r = check(p, Mode::CT, {});
      for (const auto& w : r.witnesses) CHECK(replays(p, w, kDefaultFuel));
    }
  }

  TEST_CASE("Nat parameters besides the size are enumerated") {
    auto p = parse_program(
        "requires array(a, s) * array(y, k); for i in [0 : s - 2] do (let x = !a[i + 2] in for j in [0 : k - 1] do !y[j] := x)");
    auto ct = check(p, Mode::CT, {});
    CHECK(ct.outcome == Outcome::Unsafe);
    CHECK(check(p, Mode::Compare, {}).outcome == Outcome::Agrees);
  }

  TEST_CASE("bad size variable is a usage error") {
    CheckOptions o;
    o.size_var = "q";
    CHECK_THROWS_AS(check(instantiate_trav(0, 2, 2), Mode::CT, o), UsageError);
  }

  TEST_CASE("modes and exit codes") {
    CHECK(parse_mode("compare") == Mode::Compare);
    CHECK_FALSE(parse_mode("fast"));
    CHECK(exit_code(Outcome::SafeForAllSizes) == 0);
    CHECK(exit_code(Outcome::Agrees) == 0);
    CHECK(exit_code(Outcome::Unsafe) == 1);
    CHECK(exit_code(Outcome::Disagrees) == 1);
    CHECK(exit_code(Outcome::BoundedSafeOnly) == 2);
    CHECK(exit_code(Outcome::Unknown) == 2);
    CHECK(exit_code(Outcome::Inconclusive) == 2);
  }
}
