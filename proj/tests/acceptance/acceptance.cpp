// One PASS/FAIL line per acceptance criterion, with wall-clock time against its limit.
#include "generators.hpp"
#include "oracle.hpp"

#include "ctms/assertions.hpp"
#include "ctms/checker.hpp"
#include "ctms/ct.hpp"
#include "ctms/syntax.hpp"
#include "ctms/vc.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace ctms;
using namespace ctms::testing;

namespace {

struct Result {
  bool ok = true;
  std::string note;
  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
  }
};

struct Replay {
  Program program;
  Verdict witness;
};
std::vector<Replay> g_replays;

Result criterion1() {
  Result r;
  auto p = instantiate_trav(0, 2, 2);
  CheckOptions opt;
  opt.sizes = {0, 1};
  auto b = check(p, Mode::BMC, opt);
  if (b.outcome != Outcome::BoundedSafeOnly) r.fail(std::string("bmc gave ") + to_string(b.outcome));
  auto c = check(p, Mode::CT, opt);
  if (c.outcome != Outcome::Unsafe || c.witnesses.empty()) {
    r.fail(std::string("ct gave ") + to_string(c.outcome));
    return r;
  }
  const auto& w = c.witnesses.front();
  if (w.binding.at("s") != int_value(2) || w.loc != HeapLoc{ObjId{"a"}, 2})
    r.fail("ct witness is " + describe(w));
  g_replays.push_back({p, w});
  r.note = "bmc {0,1}: " + std::string(to_string(b.outcome)) + "; ct: " + describe(w);
  return r;
}

AssertionPtr pure_of(const Program& p) {
  auto pf = to_pure(vc_for_spec(p));
  return pf ? pf->formula : nullptr;
}

Result criterion2() {
  Result r;
  std::size_t checked = 0;
  for (const auto& c : grid()) {
    auto f = pure_of(instantiate_trav(c.L, c.R, c.Z));
    if (!f) {
      r.fail("no pure formula for trav(" + std::to_string(c.L) + "," + std::to_string(c.R) + "," + std::to_string(c.Z) + ")");
      continue;
    }
    long long t = c.L + c.R;
    auto at = [&](long long s) {
      // wide clip: the quantifier is guard-bounded, the clip only backs it up
      long long b = std::abs(c.L) + std::abs(c.R) + std::abs(c.Z) + 2;
      return eval_pure(f, {{"s", int_value(s)}}, std::make_pair(Int(-b), Int(s + b)));
    };
    for (long long s = 0; s < t; ++s)
      if (!at(s)) r.fail("formula false below threshold at s=" + std::to_string(s));
    bool base = at(t);
    for (long long s = t; s <= t + 20; ++s, ++checked)
      if (at(s) != base) r.fail("formula changes above threshold at s=" + std::to_string(s));
  }
  if (r.ok) r.note = "112 cells, " + std::to_string(checked) + " sizes above threshold";
  return r;
}

Result criterion3() {
  Result r;
  std::size_t agrees = 0;
  CheckOptions opt;
  opt.max_size = 30;
  for (const std::string fam : {"trav", "sum"})
    for (const auto& c : grid()) {
      auto p = fam == "trav" ? instantiate_trav(c.L, c.R, c.Z) : instantiate_sum(c.L, c.R, c.Z);
      auto rep = check(p, Mode::Compare, opt);
      std::string cell = fam + "(" + std::to_string(c.L) + "," + std::to_string(c.R) + "," + std::to_string(c.Z) + ")";
      if (rep.outcome != Outcome::Agrees) {
        r.fail(cell + ": " + to_string(rep.outcome) + " " + rep.detail);
        continue;
      }
      // and the frozen independent table agrees with the oracle run
      const auto& row = grid_row(fam, c.L, c.R, c.Z);
      for (const auto& ps : rep.per_size) {
        char want = row.table[static_cast<std::size_t>(ps.size)];
        char got = ps.verdict.kind == Verdict::Kind::Unsafe ? 'U' : 'S';
        if (want != got) r.fail(cell + " oracle differs from the frozen table at s=" + to_string(ps.size));
      }
      for (const auto& w : rep.witnesses) g_replays.push_back({p, w});
      ++agrees;
    }
  if (r.ok) r.note = std::to_string(agrees) + " programs agree";
  return r;
}

Result criterion4() {
  Result r;
  CheckOptions opt;
  for (const auto& c : grid()) {
    auto t = program_ct(instantiate_trav(c.L, c.R, c.Z), opt);
    auto s = program_ct(instantiate_sum(c.L, c.R, c.Z), opt);
    const CTResult* kt = nullptr;
    const CTResult* ks = nullptr;
    for (const auto& x : t.per_var)
      if (x.set.var == "s") kt = &x;
    for (const auto& x : s.per_var)
      if (x.set.var == "s") ks = &x;
    if (!kt || !ks || kt->flag != SupportFlag::Exact || ks->flag != SupportFlag::Exact) {
      r.fail("extraction unsupported");
      continue;
    }
    bool same = kt->set.constraints.size() == ks->set.constraints.size();
    for (std::size_t k = 0; same && k < kt->set.constraints.size(); ++k)
      same = kt->set.constraints[k].region == ks->set.constraints[k].region &&
             kt->set.constraints[k].text == ks->set.constraints[k].text;
    if (!same) r.fail("constraint sets differ at (" + std::to_string(c.L) + "," + std::to_string(c.R) + "," + std::to_string(c.Z) + ")");
  }
  if (r.ok) r.note = "112 cells, constraint-for-constraint";
  return r;
}

Result criterion5() {
  Result r;
  std::ifstream in(std::string(CTMS_TEST_DATA) + "/golden/trav_0_2_2.vc.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  auto printed = print_vc(vc_for_spec(instantiate_trav(0, 2, 2)));
  if (printed.empty() || printed.back() != '\n') printed += '\n';
  if (!in || printed != ss.str()) r.fail("golden mismatch:\n" + printed);

  std::mt19937_64 rng(20261015);
  std::size_t valid_cases = 0, runs = 0;
  for (int k = 0; k < 200; ++k) {
    auto text = random_program_text(rng);
    Program p;
    try {
      p = parse_program(text);
    } catch (const std::exception& e) {
      r.fail("generator produced an unparsable program: " + text);
      continue;
    }
    auto vc = vc_for_spec(p);
    for (long long s = 0; s <= 8; ++s) {
      Domains d;
      d["a"] = {Value{ObjId{"a"}}};
      d["s"] = {int_value(s)};
      if (p.param("n")) d["n"] = {Value{HeapLoc{ObjId{"n"}, 0}}};
      ModelOptions mo;
      mo.int_clip = [s](const Env&) { return std::make_optional(std::make_pair(Int(-12), Int(s + 12))); };
      bool valid = false;
      try {
        valid = valid_bounded(vc.matrix, d, mo);
      } catch (const std::exception& e) {
        r.fail("bounded validity failed on " + text + ": " + e.what());
        break;
      }
      ++runs;
      if (!valid) continue;
      ++valid_cases;
      auto v = memsafe_concrete(p, {{"s", int_value(s)}});
      if (v.kind != Verdict::Kind::Safe) r.fail("VC valid but run is " + describe(v) + " for\n" + text);
    }
  }
  if (r.ok)
    r.note = "golden ok; " + std::to_string(runs) + " (program, size) pairs, " + std::to_string(valid_cases) +
             " with a valid VC, all safe";
  return r;
}

Result criterion6() {
  Result r;
  std::mt19937_64 rng(6);
  for (int k = 0; k < 100; ++k) {
    int n = std::uniform_int_distribution<int>(1, 8)(rng);
    std::set<Int> d;
    std::map<Int, bool> table;
    for (int x = 0; x < n; ++x) {
      // a sparse domain of naturals with a random validity bit each
      Int v = x * 3 + std::uniform_int_distribution<int>(0, 2)(rng);
      d.insert(v);
      table[v] = std::bernoulli_distribution(0.7)(rng);
    }
    auto valid = [&](const Int& x) { return table.at(x); };
    auto sub = subdomain_reduce(d, valid);
    bool full = std::all_of(d.begin(), d.end(), valid);
    bool reduced = std::all_of(sub.points.begin(), sub.points.end(), valid);
    bool inside = std::all_of(sub.points.begin(), sub.points.end(), [&](const Int& x) { return d.count(x) > 0; });
    if (full != reduced || !inside) r.fail("table " + std::to_string(k) + " disagrees");
  }
  if (r.ok) r.note = "100 tables";
  return r;
}

Result criterion7() {
  Result r;
  std::mt19937_64 rng(7);
  auto u = small_universe();
  std::size_t truths = 0;
  for (int k = 0; k < 500; ++k) {
    auto h = random_heap(rng, u, 6);
    auto a = random_assertion(rng, u, 2);
    auto b = random_assertion(rng, u, 2);
    bool fast = models(h, a_star(a, b), {});
    bool brute = models_star_bruteforce(h, a, b, {});
    truths += fast;
    if (fast != brute) r.fail("disagree on " + to_string(a_star(a, b)));
  }
  if (r.ok) r.note = "500 triples, " + std::to_string(truths) + " true";
  return r;
}

Result criterion8() {
  Result r;
  for (const auto& rp : g_replays) {
    auto first = memsafe_concrete(rp.program, rp.witness.binding);
    auto second = memsafe_concrete(rp.program, rp.witness.binding);
    if (!first.same_witness(rp.witness) || !second.same_witness(rp.witness))
      r.fail("witness " + describe(rp.witness) + " did not replay");
  }
  if (g_replays.empty()) r.fail("no witnesses collected");
  if (r.ok) r.note = std::to_string(g_replays.size()) + " witnesses replayed twice";
  return r;
}

}  // namespace

int main() {
  struct Item {
    int id;
    std::function<Result()> fn;
    double limit_s;  // 0: no limit
  };
  std::vector<Item> items = {{1, criterion1, 1}, {2, criterion2, 10}, {3, criterion3, 60}, {4, criterion4, 5},
                             {5, criterion5, 0}, {6, criterion6, 0},  {7, criterion7, 0},  {8, criterion8, 0}};
  int failures = 0;
  for (const auto& it : items) {
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = it.fn();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (it.limit_s > 0 && secs >= it.limit_s) r.fail("took " + std::to_string(secs) + " s");
    std::ostringstream timing;
    timing << std::fixed << std::setprecision(3) << secs << " s";
    if (it.limit_s > 0) timing << " (limit " << it.limit_s << " s)";
    std::cout << (r.ok ? "PASS" : "FAIL") << " criterion " << it.id << ": " << r.note << " [" << timing.str() << "]\n";
    if (!r.ok) ++failures;
  }
  return failures ? 1 : 0;
}
