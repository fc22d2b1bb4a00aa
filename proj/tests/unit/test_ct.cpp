#include <doctest.h>

#include "generators.hpp"

#include "ctms/checker.hpp"
#include "ctms/ct.hpp"
#include "ctms/syntax.hpp"
#include "ctms/vc.hpp"

using namespace ctms;
using testing::grid;

namespace {
PureFormula pure_trav(long long L, long long R, long long Z) {
  auto pf = to_pure(vc_for_spec(instantiate_trav(L, R, Z)));
  REQUIRE(pf);
  return *pf;
}

Constraint at_least(long long lo) {
  return {IntervalSet::at_least(lo), "s >= " + std::to_string(lo), "test"};
}

ConstraintSet cs(std::vector<Constraint> k) { return {"s", std::move(k)}; }

std::vector<Int> ints(std::initializer_list<long long> xs) { return {xs.begin(), xs.end()}; }
}  // namespace

TEST_SUITE("ct") {
  TEST_CASE("interval sets") {
    CHECK(IntervalSet::at_least(2).to_string("s") == "s >= 2");
    CHECK(IntervalSet::range(2, Int(4)).to_string("s") == "2 <= s <= 4");
    CHECK(IntervalSet::range(3, Int(3)).to_string("s") == "s = 3");
    CHECK(IntervalSet::naturals().to_string("s") == "true");
    CHECK(IntervalSet().to_string("s") == "false");
    auto a = IntervalSet::range(0, Int(4)).unite(IntervalSet::at_least(7));
    CHECK(a.complement() == IntervalSet::range(5, Int(6)));
    CHECK(a.intersect(IntervalSet::range(3, Int(8))) == IntervalSet::range(3, Int(4)).unite(IntervalSet::range(7, Int(8))));
    CHECK(IntervalSet::at_least(5).subset_of(IntervalSet::at_least(2)));
    CHECK(*IntervalSet::at_least(5).min() == 5);
  }

  TEST_CASE("extract for (0,2,2)") {
    auto r = extract_ct_size(pure_trav(0, 2, 2), "s");
    CHECK(r.flag == SupportFlag::Exact);
    REQUIRE(r.set.constraints.size() == 1);
    CHECK(r.set.constraints[0].region == IntervalSet::at_least(2));
    CHECK(r.witnesses == ints({2}));
    CHECK_FALSE(r.provenance.empty());
  }

  TEST_CASE("extract for (0,1,0) and validity at the witness") {
    auto pf = pure_trav(0, 1, 0);
    auto r = extract_ct_size(pf, "s");
    REQUIRE(r.set.constraints.size() == 1);
    CHECK(r.set.constraints[0].region == IntervalSet::at_least(1));
    CHECK(r.witnesses == ints({1}));
    for (long long s = 0; s <= 30; ++s) CHECK(eval_pure(pf.formula, {{"s", int_value(s)}}));
  }

  TEST_CASE("a formula without the size variable has no constraints") {
    auto r = extract_ct(a_true(), "s");
    CHECK(r.flag == SupportFlag::Exact);
    CHECK(r.set.constraints.empty());
    CHECK(r.witnesses.empty());
  }

  TEST_CASE("thresholds are L + R on the grid") {
    for (const auto& c : grid()) {
      auto r = extract_ct_size(pure_trav(c.L, c.R, c.Z), "s");
      REQUIRE(r.flag == SupportFlag::Exact);
      REQUIRE_FALSE(r.witnesses.empty());
      CHECK(r.witnesses.front() <= c.L + c.R);
      CHECK(models_constraints({r.witnesses.begin(), r.witnesses.end()}, r.set));
    }
  }

  TEST_CASE("threshold constancy and below-threshold truth") {
    for (const auto& c : grid()) {
      auto f = pure_trav(c.L, c.R, c.Z).formula;
      long long t = c.L + c.R;
      for (long long s = 0; s < t; ++s) CHECK(eval_pure(f, {{"s", int_value(s)}}));
      bool base = eval_pure(f, {{"s", int_value(t)}});
      for (long long s = t; s <= t + 20; ++s) CHECK(eval_pure(f, {{"s", int_value(s)}}) == base);
    }
  }

  TEST_CASE("unsupported shapes fall back") {
    auto r = extract_ct(parse_assertion("array(a, s)"), "s");
    CHECK(r.flag == SupportFlag::Fallback);
    CHECK(r.set.constraints.empty());
    CHECK_FALSE(r.fallback_reason.empty());
  }

  TEST_CASE("slicing drops size-free factors") {
    auto f = pure_trav(0, 2, 2).formula;
    auto framed = a_star(f, parse_assertion("n |-> _ -> true"));
    auto r = slice_vc(framed, "s");
    CHECK(r.separable);
    CHECK(equal(r.result, f));
    CHECK(r.dropped.size() == 1);

    auto comp = a_star(f, parse_assertion("array(y, k) -> array(y, k)"));
    auto rc = slice_vc(comp, "s");
    CHECK(rc.separable);
    CHECK(equal(rc.result, f));

    auto both = a_star(parse_assertion("array(a, s)"), parse_assertion("0 <= s"));
    auto rb = slice_vc(both, "s");
    CHECK_FALSE(rb.separable);
    CHECK(equal(rb.result, both));
  }

  TEST_CASE("subdomain reduction examples") {
    std::set<Int> d{0, 1, 2, 3, 4, 5};
    auto r = subdomain_reduce(d, [](const Int& x) { return x >= 2; });
    CHECK(r.points == std::set<Int>{0, 2});
    auto all = subdomain_reduce(d, [](const Int&) { return true; });
    CHECK(all.points.size() == 1);
    auto one = subdomain_reduce({7}, [](const Int&) { return false; });
    CHECK(one.points == std::set<Int>{7});
  }

  TEST_CASE("subdomain reduction against brute force") {
    std::mt19937_64 rng(42);
    for (int k = 0; k < 100; ++k) {
      std::set<Int> d;
      std::map<Int, bool> t;
      int n = std::uniform_int_distribution<int>(1, 8)(rng);
      for (int x = 0; x < n; ++x) {
        d.insert(x);
        t[x] = std::bernoulli_distribution(0.6)(rng);
      }
      auto valid = [&](const Int& x) { return t.at(x); };
      auto r = subdomain_reduce(d, valid);
      CHECK(std::all_of(d.begin(), d.end(), valid) == std::all_of(r.points.begin(), r.points.end(), valid));
    }
  }

  TEST_CASE("combine_seq") {
    auto u = combine_seq(cs({at_least(2)}), cs({at_least(3)}));
    CHECK(u.constraints.size() == 2);
    CHECK(minimal_witnesses(u, 100).witnesses == ints({2, 3}));
    auto k = cs({at_least(2)});
    CHECK(combine_seq(k, cs({})).same_regions(k));
  }

  TEST_CASE("combine_seq matches the oracle on a sequenced program") {
    auto p = parse_program(
        "requires array(a, s); for i in [0 : s - 2] do !a[i + 2]; for i in [1 : s] do !a[i]");
    CheckOptions o;
    auto r = check(p, Mode::Compare, o);
    CHECK(r.outcome == Outcome::Agrees);
    auto ct = check(p, Mode::CT, o);
    REQUIRE(ct.outcome == Outcome::Unsafe);
    CHECK(*as_int(ct.witnesses.front().binding.at("s")) == 1);
  }

  TEST_CASE("combine_if") {
    auto guard = IntervalSet::range(0, Int(4));
    auto k = combine_if(guard, "s < 5", cs({at_least(2)}), cs({at_least(7)}));
    REQUIRE(k.constraints.size() == 2);
    CHECK(k.constraints[0].region == IntervalSet::range(2, Int(4)));
    CHECK(k.constraints[1].region == IntervalSet::at_least(7));
    CHECK(minimal_witnesses(k, 100).witnesses == ints({2, 7}));

    auto kf = combine_if(IntervalSet(), "false", cs({at_least(2)}), cs({at_least(7)}));
    CHECK_FALSE(kf.constraints[0].satisfiable());
    CHECK(kf.constraints[1].satisfiable());

    auto kt = combine_if(IntervalSet::naturals(), "0 <= s", cs({at_least(2)}), cs({at_least(7)}));
    CHECK(kt.constraints[0].satisfiable());
    CHECK_FALSE(kt.constraints[1].satisfiable());
  }

  TEST_CASE("combine_if through the checker") {
    auto p = parse_program(
        "requires array(a, s); if s < 5 then for i in [0 : s - 2] do !a[i + 1] else for i in [0 : s - 1] do !a[i + 1]");
    auto pc = program_ct(p, {});
    REQUIRE(pc.supported);
    REQUIRE(pc.per_var.size() == 1);
    CHECK(pc.per_var[0].flag == SupportFlag::Exact);
    CHECK(check(p, Mode::Compare, {}).outcome == Outcome::Agrees);
  }

  TEST_CASE("models_constraints") {
    CHECK(models_constraints({3}, cs({at_least(2)})));
    Constraint unsat{IntervalSet::at_least(2).intersect(IntervalSet::range(0, Int(1))), "s >= 2 && s < 2", "test"};
    CHECK(models_constraints({}, cs({unsat})));
    CHECK_FALSE(models_constraints({1}, cs({at_least(2)})));
  }

  TEST_CASE("minimal_witnesses") {
    CHECK(minimal_witnesses(cs({at_least(2)}), 100).witnesses == ints({2}));
    Constraint band{IntervalSet::range(4, Int(4)), "s < 5 && s >= 4", "test"};
    CHECK(minimal_witnesses(cs({at_least(2), band}), 100).witnesses == ints({2, 4}));
    auto far = minimal_witnesses(cs({at_least(1000000)}), 100);
    CHECK(far.witnesses.empty());
    CHECK(far.unreached.size() == 1);
  }

  TEST_CASE("region_of") {
    auto r = region_of(parse_assertion("2 <= s && s < 5"), "s");
    REQUIRE(r);
    CHECK(*r == IntervalSet::range(2, Int(4)));
    CHECK_FALSE(region_of(parse_assertion("array(a, s)"), "s"));
  }

  TEST_CASE("existential formulas are settled by one checked witness") {
    auto f = parse_assertion("3 <= s && s < 6");
    auto w = exists_witness(f, "s", {0, 1, 2, 3, 4});
    REQUIRE(w);
    CHECK(*w == 3);
    CHECK_FALSE(exists_witness(f, "s", {0, 1, 2}));
    bool some = false;
    for (long long s = 0; s <= 30; ++s) some = some || eval_pure(f, {{"s", int_value(s)}});
    CHECK(some);
  }
}
