#include "ctms/assertions.hpp"
#include "ctms/syntax.hpp"

#include <algorithm>
#include <unordered_map>

namespace ctms {

bool heap_independent(const AssertionPtr& a) {
  switch (a->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Pure:
    case AKind::Box: return true;
    case AKind::Not:
    case AKind::Forall:
    case AKind::Exists: return heap_independent(a->a1);
    case AKind::And:
    case AKind::Or:
    case AKind::Imp:
    case AKind::Star: return heap_independent(a->a1) && heap_independent(a->a2);
    default: return false;
  }
}

bool monotone(const AssertionPtr& a) {
  switch (a->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Pure:
    case AKind::PointsTo:
    case AKind::PointsToAny:
    case AKind::Array:
    case AKind::Box: return true;
    case AKind::And:
    case AKind::Or:
    case AKind::Star: return monotone(a->a1) && monotone(a->a2);
    case AKind::Forall:
    case AKind::Exists: return monotone(a->a1);
    case AKind::Wand: return monotone(a->a2);
    case AKind::Imp: return heap_independent(a->a1) && monotone(a->a2);
    case AKind::Not: return heap_independent(a->a1);
  }
  return false;
}

namespace {

// ---- value insensitivity ----
//
// A Val-quantified variable is harmless when it is read by at most one
// points-to atom (as the whole value) and otherwise only flows into values
// written on the left of wands.

bool disjoint_fv(const ExprPtr& e, const std::set<std::string>& w) {
  if (!e) return true;
  for (const auto& x : free_vars(e))
    if (w.count(x)) return false;
  return true;
}

bool dom_ok(const Domain& d, const std::set<std::string>& w) {
  if (!disjoint_fv(d.lo, w) || !disjoint_fv(d.hi, w)) return false;
  for (const auto& e : d.elems)
    if (!disjoint_fv(e, w)) return false;
  return true;
}

int reader_count(const AssertionPtr& a, const std::string& v) {
  if (!a) return 0;
  switch (a->kind) {
    case AKind::PointsTo:
      return a->e2->kind == Expr::Kind::Var && a->e2->name == v ? 1 : 0;
    case AKind::Wand: return reader_count(a->a2, v);
    case AKind::Forall:
    case AKind::Exists:
      if (a->var == v) return 0;
      return reader_count(a->a1, v) * (a->kind == AKind::Forall ? 2 : 1);
    default: return reader_count(a->a1, v) + reader_count(a->a2, v);
  }
}

bool vi(const AssertionPtr& a, const std::set<std::string>& w);

bool lhs_ok(const AssertionPtr& a, const std::set<std::string>& w) {
  switch (a->kind) {
    case AKind::PointsTo: return disjoint_fv(a->e1, w);
    case AKind::PointsToAny:
    case AKind::Array: return disjoint_fv(a->e1, w) && disjoint_fv(a->e2, w);
    case AKind::Star:
    case AKind::And: return lhs_ok(a->a1, w) && lhs_ok(a->a2, w);
    default: return vi(a, w);
  }
}

bool vi(const AssertionPtr& a, const std::set<std::string>& w) {
  switch (a->kind) {
    case AKind::True:
    case AKind::False: return true;
    case AKind::Pure: return disjoint_fv(a->e1, w);
    case AKind::PointsToAny:
    case AKind::Array: return disjoint_fv(a->e1, w) && disjoint_fv(a->e2, w);
    case AKind::PointsTo:
      return disjoint_fv(a->e1, w) && a->e2->kind == Expr::Kind::Var && w.count(a->e2->name);
    case AKind::Wand: return lhs_ok(a->a1, w) && vi(a->a2, w);
    case AKind::Box:
    case AKind::Not: return vi(a->a1, w);
    case AKind::And:
    case AKind::Or:
    case AKind::Imp:
    case AKind::Star: return vi(a->a1, w) && vi(a->a2, w);
    case AKind::Forall:
    case AKind::Exists: {
      if (a->dom.kind == Domain::Kind::Val) {
        if (a->kind == AKind::Forall) return false;
        if (reader_count(a->a1, a->var) > 1) return false;
        auto w2 = w;
        w2.insert(a->var);
        return vi(a->a1, w2);
      }
      if (!dom_ok(a->dom, w)) return false;
      auto w2 = w;
      w2.erase(a->var);
      return vi(a->a1, w2);
    }
  }
  return false;
}

// ---- guards ----

void guard_atoms(const AssertionPtr& g, std::vector<ExprPtr>& out);

void split_expr(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == Expr::Kind::App && e->op == Op::And) {
    split_expr(e->args[0], out);
    split_expr(e->args[1], out);
  } else {
    out.push_back(e);
  }
}

void guard_atoms(const AssertionPtr& g, std::vector<ExprPtr>& out) {
  if (g->kind == AKind::And || g->kind == AKind::Star) {
    guard_atoms(g->a1, out);
    guard_atoms(g->a2, out);
  } else if (g->kind == AKind::Pure) {
    split_expr(g->e1, out);
  }
}

bool is_var(const ExprPtr& e, const std::string& x) { return e->kind == Expr::Kind::Var && e->name == x; }

std::optional<Int> eval_int(const ExprPtr& e, const Env& env) {
  auto v = eval_expr(e, env);
  if (!v || !as_int(*v)) return std::nullopt;
  return *as_int(*v);
}

AssertionPtr guard_of(const AssertionPtr& body) {
  switch (body->kind) {
    case AKind::Imp:
    case AKind::Wand:
    case AKind::And:
    case AKind::Star: return body->a1;
    case AKind::Box: return guard_of(body->a1);
    default: return nullptr;
  }
}

}  // namespace

bool value_insensitive(const AssertionPtr& a) { return vi(a, {}); }

std::optional<std::pair<Int, Int>> implied_range(const AssertionPtr& body, const std::string& x, const Env& env) {
  auto g = guard_of(body);
  if (!g) return std::nullopt;
  std::vector<ExprPtr> atoms;
  guard_atoms(g, atoms);
  // for And/Star bodies the guard may also sit on the right
  if (body->kind == AKind::And || body->kind == AKind::Star) guard_atoms(body->a2, atoms);
  std::optional<Int> lo, hi;
  auto lower = [&](const Int& v) { if (!lo || v > *lo) lo = v; };
  auto upper = [&](const Int& v) { if (!hi || v < *hi) hi = v; };
  for (const auto& e : atoms) {
    if (e->kind != Expr::Kind::App) continue;
    if (e->op != Op::Le && e->op != Op::Lt && e->op != Op::Eq) continue;
    const auto& l = e->args[0];
    const auto& r = e->args[1];
    Int adj = e->op == Op::Lt ? 1 : 0;
    if (is_var(l, x) && !mentions(r, x)) {
      if (auto v = eval_int(r, env)) {
        upper(*v - adj);
        if (e->op == Op::Eq) lower(*v);
      }
    } else if (is_var(r, x) && !mentions(l, x)) {
      if (auto v = eval_int(l, env)) {
        lower(*v + adj);
        if (e->op == Op::Eq) upper(*v);
      }
    }
  }
  if (!lo || !hi) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

std::vector<Value> int_range(long long lo, long long hi) {
  std::vector<Value> out;
  for (long long i = lo; i <= hi; ++i) out.push_back(int_value(i));
  return out;
}

namespace {

void collect_literals(const ExprPtr& e, std::set<Value>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Lit) {
    if (as_int(e->lit) || as_bool(e->lit)) out.insert(e->lit);
    return;
  }
  for (const auto& x : e->args) collect_literals(x, out);
}

void collect_literals(const AssertionPtr& a, std::set<Value>& out) {
  if (!a) return;
  collect_literals(a->e1, out);
  collect_literals(a->e2, out);
  collect_literals(a->dom.lo, out);
  collect_literals(a->dom.hi, out);
  for (const auto& e : a->dom.elems) collect_literals(e, out);
  collect_literals(a->a1, out);
  collect_literals(a->a2, out);
}

bool disjoint(const PhysHeap& a, const PhysHeap& b) {
  const PhysHeap& small = a.size() < b.size() ? a : b;
  const PhysHeap& big = a.size() < b.size() ? b : a;
  for (const auto& [l, v] : small)
    if (big.count(l)) return false;
  return true;
}

// union that tolerates overlap as long as shared cells agree
std::optional<PhysHeap> merge(const PhysHeap& a, const PhysHeap& b) {
  PhysHeap out = a;
  for (const auto& [l, v] : b) {
    auto [it, fresh] = out.emplace(l, v);
    if (!fresh && !(it->second == v)) return std::nullopt;
  }
  return out;
}

void dedupe(std::vector<PhysHeap>& hs) {
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
}

struct Evaluator {
  const ModelOptions& opt;
  ModelStats* stats;
  std::vector<Value> universe;  // range of Val quantifiers
  std::vector<Value> probes;
  std::unordered_map<const Assertion*, bool> mono_cache, hi_cache, vi_cache;

  Evaluator(const ModelOptions& o, ModelStats* s) : opt(o), stats(s) {}

  void init(const AssertionPtr& root, const PhysHeap* h, const Env& env) {
    std::set<Value> lits;
    collect_literals(root, lits);
    std::set<Value> p(opt.probes.begin(), opt.probes.end());
    probes.assign(p.begin(), p.end());
    std::set<Value> u = lits;
    u.insert(p.begin(), p.end());
    u.insert(Value{true});
    u.insert(Value{false});
    if (h)
      for (const auto& [l, v] : *h) u.insert(v);
    for (const auto& [k, v] : env) u.insert(v);
    universe.assign(u.begin(), u.end());
  }

  bool is_mono(const AssertionPtr& a) {
    auto [it, fresh] = mono_cache.emplace(a.get(), false);
    if (fresh) it->second = monotone(a);
    return it->second;
  }
  bool is_hi(const AssertionPtr& a) {
    auto [it, fresh] = hi_cache.emplace(a.get(), false);
    if (fresh) it->second = heap_independent(a);
    return it->second;
  }
  bool is_vi(const AssertionPtr& a) {
    auto [it, fresh] = vi_cache.emplace(a.get(), false);
    if (fresh) it->second = value_insensitive(a);
    return it->second;
  }

  std::vector<Value> quant_values(const AssertionPtr& q, Env& env) {
    const Domain& d = q->dom;
    switch (d.kind) {
      case Domain::Kind::Val: return universe;
      case Domain::Kind::Obj:
      case Domain::Kind::Loc:
        throw UnsupportedAssertion("quantifier over " + to_string(d) + " cannot be enumerated");
      case Domain::Kind::Set: {
        std::vector<Value> out;
        for (const auto& e : d.elems) {
          auto v = eval_expr(e, env);
          if (!v) throw UnsupportedAssertion("set element " + to_string(e) + " has no value");
          out.push_back(*v);
        }
        return out;
      }
      case Domain::Kind::Interval: {
        auto lo = eval_int(d.lo, env);
        auto hi = eval_int(d.hi, env);
        if (!lo || !hi) throw UnsupportedAssertion("interval bounds of " + q->var + " have no value");
        return range(*lo, *hi);
      }
      case Domain::Kind::Nat:
      case Domain::Kind::Int: {
        auto r = implied_range(q->a1, q->var, env);
        if (!r && opt.int_clip) {
          r = opt.int_clip(env);
          if (r && stats) ++stats->clipped_quantifiers;
        }
        if (!r) throw UnsupportedAssertion("quantifier over " + q->var + " has no finite range");
        Int lo = r->first;
        if (d.kind == Domain::Kind::Nat && lo < 0) lo = 0;
        return range(lo, r->second);
      }
    }
    return {};
  }

  std::vector<Value> range(const Int& lo, const Int& hi) {
    if (hi < lo) return {};
    if (hi - lo > opt.max_quant_range) throw UnsupportedAssertion("quantifier range too large");
    std::vector<Value> out;
    for (Int i = lo; i <= hi; ++i) out.push_back(Value{i});
    return out;
  }

  // ---- the model relation ----

  bool sat(const PhysHeap& h, const AssertionPtr& a, Env& env) {
    switch (a->kind) {
      case AKind::True: return true;
      case AKind::False: return false;
      case AKind::Pure: {
        auto v = eval_expr(a->e1, env);
        return v && as_bool(*v) && *as_bool(*v);
      }
      case AKind::Not: return !sat(h, a->a1, env);
      case AKind::And: return sat(h, a->a1, env) && sat(h, a->a2, env);
      case AKind::Or: return sat(h, a->a1, env) || sat(h, a->a2, env);
      case AKind::Imp: return !sat(h, a->a1, env) || sat(h, a->a2, env);
      case AKind::PointsTo: {
        auto l = eval_expr(a->e1, env);
        auto v = eval_expr(a->e2, env);
        if (!l || !v || !as_loc(*l)) return false;
        auto it = h.find(*as_loc(*l));
        return it != h.end() && it->second == *v;
      }
      case AKind::PointsToAny: {
        auto l = eval_expr(a->e1, env);
        return l && as_loc(*l) && h.count(*as_loc(*l));
      }
      case AKind::Array: {
        auto o = eval_expr(a->e1, env);
        auto n = eval_int(a->e2, env);
        if (!o || !as_obj(*o) || !n || *n < 0) return false;
        if (*n > static_cast<long long>(h.size())) return false;
        for (Int i = 0; i < *n; ++i)
          if (!h.count(HeapLoc{*as_obj(*o), i})) return false;
        return true;
      }
      case AKind::Box: {
        static const PhysHeap empty;
        return sat(empty, a->a1, env);
      }
      case AKind::Star: return sat_star(h, a->a1, a->a2, env);
      case AKind::Wand: return sat_wand(h, a->a1, a->a2, env);
      case AKind::Forall:
      case AKind::Exists: return sat_quant(h, a, env);
    }
    return false;
  }

  struct Bind {
    Env& env;
    std::string x;
    std::optional<Value> saved;
    Bind(Env& e, const std::string& name) : env(e), x(name) {
      auto it = env.find(x);
      if (it != env.end()) saved = it->second;
    }
    void set(const Value& v) { env[x] = v; }
    ~Bind() {
      if (saved) env[x] = *saved;
      else env.erase(x);
    }
  };

  static const Assertion* find_reader(const AssertionPtr& a, const std::string& v) {
    if (a->kind == AKind::PointsTo && is_var(a->e2, v) && !mentions(a->e1, v)) return a.get();
    if (a->kind == AKind::And || a->kind == AKind::Star) {
      if (auto r = find_reader(a->a1, v)) return r;
      return find_reader(a->a2, v);
    }
    return nullptr;
  }

  bool sat_quant(const PhysHeap& h, const AssertionPtr& a, Env& env) {
    bool forall = a->kind == AKind::Forall;
    Bind b(env, a->var);
    if (!forall && a->dom.kind == Domain::Kind::Val) {
      if (const Assertion* r = find_reader(a->a1, a->var)) {
        auto l = eval_expr(r->e1, env);
        if (!l || !as_loc(*l)) return false;
        auto it = h.find(*as_loc(*l));
        if (it == h.end()) return false;
        b.set(it->second);
        return sat(h, a->a1, env);
      }
    }
    for (const auto& v : quant_values(a, env)) {
      b.set(v);
      bool r = sat(h, a->a1, env);
      if (forall && !r) return false;
      if (!forall && r) return true;
    }
    return forall;
  }

  bool sat_star(const PhysHeap& h, const AssertionPtr& x, const AssertionPtr& y, Env& env) {
    static const PhysHeap empty;
    bool mx = is_mono(x), my = is_mono(y);
    if (is_hi(x) && my) return sat(empty, x, env) && sat(h, y, env);
    if (is_hi(y) && mx) return sat(empty, y, env) && sat(h, x, env);
    if (mx && my) {
      auto cx = within(h, x, env);
      if (cx) return any_rest(h, *cx, y, env);
      auto cy = within(h, y, env);
      if (cy) return any_rest(h, *cy, x, env);
    }
    return brute_star(h, x, y, env);
  }

  bool any_rest(const PhysHeap& h, const std::vector<PhysHeap>& cands, const AssertionPtr& other, Env& env) {
    for (const auto& c : cands) {
      PhysHeap rest = h;
      for (const auto& [l, v] : c) rest.erase(l);
      if (sat(rest, other, env)) return true;
    }
    return false;
  }

  bool brute_star(const PhysHeap& h, const AssertionPtr& x, const AssertionPtr& y, Env& env) {
    if (h.size() > opt.max_brute_chunks)
      throw UnsupportedAssertion("separating conjunction over " + std::to_string(h.size()) + " chunks");
    std::vector<std::pair<HeapLoc, Value>> cells(h.begin(), h.end());
    std::uint64_t n = cells.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (stats) ++stats->brute_splits;
      PhysHeap h1, h2;
      for (std::uint64_t i = 0; i < n; ++i) ((mask >> i) & 1 ? h1 : h2).insert(cells[i]);
      if (sat(h1, x, env) && sat(h2, y, env)) return true;
    }
    return false;
  }

  // Sub-heaps of h that are models of `a` and generate every model of `a`
  // inside h (for monotone a).  nullopt when no cheap enumeration exists.
  std::optional<std::vector<PhysHeap>> within(const PhysHeap& h, const AssertionPtr& a, Env& env) {
    static const PhysHeap empty;
    if (is_hi(a)) {
      if (sat(empty, a, env)) return std::vector<PhysHeap>{PhysHeap{}};
      return std::vector<PhysHeap>{};
    }
    switch (a->kind) {
      case AKind::PointsTo:
      case AKind::PointsToAny: {
        if (!sat(h, a, env)) return std::vector<PhysHeap>{};
        auto l = *as_loc(*eval_expr(a->e1, env));
        return std::vector<PhysHeap>{PhysHeap{{l, h.at(l)}}};
      }
      case AKind::Array: {
        if (!sat(h, a, env)) return std::vector<PhysHeap>{};
        auto o = *as_obj(*eval_expr(a->e1, env));
        auto n = *eval_int(a->e2, env);
        PhysHeap c;
        for (Int i = 0; i < n; ++i) c.emplace(HeapLoc{o, i}, h.at(HeapLoc{o, i}));
        return std::vector<PhysHeap>{c};
      }
      case AKind::Star:
      case AKind::And: {
        auto c1 = within(h, a->a1, env);
        if (!c1) return std::nullopt;
        if (c1->empty()) return c1;
        auto c2 = within(h, a->a2, env);
        if (!c2) return std::nullopt;
        std::vector<PhysHeap> out;
        for (const auto& p : *c1)
          for (const auto& q : *c2) {
            if (a->kind == AKind::Star) {
              if (!disjoint(p, q)) continue;
              PhysHeap u = p;
              u.insert(q.begin(), q.end());
              out.push_back(std::move(u));
            } else if (auto u = merge(p, q)) {
              out.push_back(std::move(*u));
            }
            if (out.size() > opt.max_models) return std::nullopt;
          }
        dedupe(out);
        return out;
      }
      case AKind::Or: {
        auto c1 = within(h, a->a1, env);
        if (!c1) return std::nullopt;
        auto c2 = within(h, a->a2, env);
        if (!c2) return std::nullopt;
        c1->insert(c1->end(), c2->begin(), c2->end());
        dedupe(*c1);
        return c1;
      }
      case AKind::Imp: {
        if (!is_hi(a->a1)) return std::nullopt;
        if (!sat(empty, a->a1, env)) return std::vector<PhysHeap>{PhysHeap{}};
        return within(h, a->a2, env);
      }
      case AKind::Forall:
      case AKind::Exists: {
        if (a->dom.kind == Domain::Kind::Val) return std::nullopt;
        std::vector<Value> vals;
        try {
          vals = quant_values(a, env);
        } catch (const UnsupportedAssertion&) {
          return std::nullopt;
        }
        Bind b(env, a->var);
        std::vector<PhysHeap> acc;
        bool forall = a->kind == AKind::Forall;
        if (forall) acc.push_back({});
        for (const auto& v : vals) {
          b.set(v);
          auto c = within(h, a->a1, env);
          if (!c) return std::nullopt;
          if (forall) {
            std::vector<PhysHeap> next;
            for (const auto& p : acc)
              for (const auto& q : *c)
                if (auto u = merge(p, q)) next.push_back(std::move(*u));
            dedupe(next);
            acc = std::move(next);
            if (acc.empty()) break;
          } else {
            acc.insert(acc.end(), c->begin(), c->end());
          }
          if (acc.size() > opt.max_models) return std::nullopt;
        }
        dedupe(acc);
        return acc;
      }
      default: return std::nullopt;
    }
  }

  // generating set of models of `a` over all heaps
  std::vector<PhysHeap> gen(const AssertionPtr& a, Env& env, const std::vector<Value>& fill) {
    static const PhysHeap empty;
    if (is_hi(a)) {
      if (sat(empty, a, env)) return {PhysHeap{}};
      return {};
    }
    auto loc_of = [&](const ExprPtr& e) {
      auto l = eval_expr(e, env);
      if (!l || !as_loc(*l)) throw UnsupportedAssertion("location " + to_string(e) + " has no value");
      return *as_loc(*l);
    };
    switch (a->kind) {
      case AKind::PointsTo: {
        auto v = eval_expr(a->e2, env);
        if (!v) throw UnsupportedAssertion("value " + to_string(a->e2) + " has no value");
        return {PhysHeap{{loc_of(a->e1), *v}}};
      }
      case AKind::PointsToAny: {
        auto l = loc_of(a->e1);
        std::vector<PhysHeap> out;
        for (const auto& v : fill) out.push_back(PhysHeap{{l, v}});
        return out;
      }
      case AKind::Array: {
        auto o = eval_expr(a->e1, env);
        auto n = eval_int(a->e2, env);
        if (!o || !as_obj(*o) || !n) throw UnsupportedAssertion("array " + to_string(a) + " is not closed");
        if (*n < 0) return {};
        auto k = to_small(*n);
        if (!k || *k > 100000) throw UnsupportedAssertion("array too large to enumerate");
        double combos = 1;
        for (long long i = 0; i < *k && combos <= static_cast<double>(opt.max_models); ++i) combos *= fill.size();
        std::vector<PhysHeap> out;
        if (combos > static_cast<double>(opt.max_models)) {
          if (stats) ++stats->uniform_fill_fallbacks;
          for (const auto& v : fill) {
            PhysHeap c;
            for (long long i = 0; i < *k; ++i) c.emplace(HeapLoc{*as_obj(*o), Int(i)}, v);
            out.push_back(std::move(c));
          }
          return out;
        }
        out.push_back({});
        for (long long i = 0; i < *k; ++i) {
          std::vector<PhysHeap> next;
          for (const auto& p : out)
            for (const auto& v : fill) {
              PhysHeap c = p;
              c.emplace(HeapLoc{*as_obj(*o), Int(i)}, v);
              next.push_back(std::move(c));
            }
          out = std::move(next);
        }
        return out;
      }
      case AKind::Star:
      case AKind::And: {
        auto c1 = gen(a->a1, env, fill);
        if (c1.empty()) return c1;
        auto c2 = gen(a->a2, env, fill);
        std::vector<PhysHeap> out;
        for (const auto& p : c1)
          for (const auto& q : c2) {
            if (a->kind == AKind::Star) {
              if (!disjoint(p, q)) continue;
              PhysHeap u = p;
              u.insert(q.begin(), q.end());
              out.push_back(std::move(u));
            } else if (auto u = merge(p, q)) {
              out.push_back(std::move(*u));
            }
            if (out.size() > opt.max_models) throw UnsupportedAssertion("too many models to enumerate");
          }
        dedupe(out);
        return out;
      }
      case AKind::Or: {
        auto c1 = gen(a->a1, env, fill);
        auto c2 = gen(a->a2, env, fill);
        c1.insert(c1.end(), c2.begin(), c2.end());
        dedupe(c1);
        return c1;
      }
      case AKind::Imp: {
        if (!is_hi(a->a1)) break;
        if (!sat(empty, a->a1, env)) return {PhysHeap{}};
        return gen(a->a2, env, fill);
      }
      case AKind::Forall:
      case AKind::Exists: {
        auto vals = quant_values(a, env);
        Bind b(env, a->var);
        bool forall = a->kind == AKind::Forall;
        std::vector<PhysHeap> acc;
        if (forall) acc.push_back({});
        for (const auto& v : vals) {
          b.set(v);
          auto c = gen(a->a1, env, fill);
          if (forall) {
            std::vector<PhysHeap> next;
            for (const auto& p : acc)
              for (const auto& q : c)
                if (auto u = merge(p, q)) next.push_back(std::move(*u));
            dedupe(next);
            acc = std::move(next);
            if (acc.empty()) break;
          } else {
            acc.insert(acc.end(), c.begin(), c.end());
          }
          if (acc.size() > opt.max_models) throw UnsupportedAssertion("too many models to enumerate");
        }
        dedupe(acc);
        return acc;
      }
      default: break;
    }
    throw UnsupportedAssertion("no finite footprint for " + to_string(a));
  }

  std::vector<Value> fill_for(const AssertionPtr& consumer) {
    if (is_vi(consumer)) return {int_value(0)};
    return probes;
  }

  bool sat_wand(const PhysHeap& h, const AssertionPtr& l, const AssertionPtr& r, Env& env) {
    if (!is_mono(l)) throw UnsupportedAssertion("wand with a non-monotone left side");
    if (!is_mono(r)) throw UnsupportedAssertion("wand with a non-monotone right side");
    for (const auto& m : gen(l, env, fill_for(r))) {
      if (!disjoint(m, h)) continue;
      PhysHeap u = h;
      u.insert(m.begin(), m.end());
      if (!sat(u, r, env)) return false;
    }
    return true;
  }
};

}  // namespace

bool models(const PhysHeap& h, const AssertionPtr& a, const Env& env, const ModelOptions& opts, ModelStats* stats) {
  Evaluator ev(opts, stats);
  ev.init(a, &h, env);
  Env e = env;
  return ev.sat(h, a, e);
}

bool models_star_bruteforce(const PhysHeap& h, const AssertionPtr& a, const AssertionPtr& b, const Env& env,
                            const ModelOptions& opts) {
  // the combined assertion fixes the Val universe the same way `models` would
  auto both = a_star(a, b);
  std::vector<std::pair<HeapLoc, Value>> cells(h.begin(), h.end());
  std::uint64_t n = cells.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    PhysHeap h1, h2;
    for (std::uint64_t i = 0; i < n; ++i) ((mask >> i) & 1 ? h1 : h2).insert(cells[i]);
    Evaluator ev(opts, nullptr);
    ev.init(both, &h, env);
    Env e = env;
    if (ev.sat(h1, a, e) && ev.sat(h2, b, e)) return true;
  }
  return false;
}

std::vector<PhysHeap> enumerate_minimal(const AssertionPtr& a, const Env& env, const ModelOptions& opts) {
  Evaluator ev(opts, nullptr);
  ev.init(a, nullptr, env);
  Env e = env;
  if (!monotone(a)) throw UnsupportedAssertion("minimal models of a non-monotone assertion");
  return ev.gen(a, e, ev.probes);
}

AssertionPtr expand_array(const AssertionPtr& a, const Env& env) {
  if (!a) return a;
  if (a->kind == AKind::Array) {
    auto n = eval_expr(a->e2, env);
    if (!n || !as_int(*n)) return a;
    if (*as_int(*n) < 0) throw NegativeSize("array(" + to_string(a->e1) + ", " + to_string(a->e2) + ") has size " +
                                            to_string(*n));
    auto k = to_small(*as_int(*n));
    if (!k || *k > 100000) throw UnsupportedAssertion("array too large to expand");
    std::vector<AssertionPtr> cells;
    for (long long i = 0; i < *k; ++i) cells.push_back(a_pts_any(offset(a->e1, lit_int(i))));
    if (cells.empty()) return a_true();
    AssertionPtr out = cells[0];
    for (std::size_t i = 1; i < cells.size(); ++i) out = a_star(out, cells[i]);
    return out;
  }
  auto out = std::make_shared<Assertion>(*a);
  if (a->kind == AKind::Forall || a->kind == AKind::Exists) {
    Env inner = env;
    inner.erase(a->var);
    out->a1 = expand_array(a->a1, inner);
    return out;
  }
  out->a1 = expand_array(a->a1, env);
  out->a2 = expand_array(a->a2, env);
  return out;
}

namespace {

void footprint_locs(const AssertionPtr& a, const Env& env, std::set<HeapLoc>& out) {
  if (!a) return;
  switch (a->kind) {
    case AKind::Array: {
      auto o = eval_expr(a->e1, env);
      auto n = eval_int(a->e2, env);
      if (o && as_obj(*o) && n)
        for (Int i = 0; i < *n; ++i) out.insert(HeapLoc{*as_obj(*o), i});
      return;
    }
    case AKind::PointsTo:
    case AKind::PointsToAny: {
      auto l = eval_expr(a->e1, env);
      if (l && as_loc(*l)) out.insert(*as_loc(*l));
      return;
    }
    case AKind::Forall:
    case AKind::Exists: {
      Env inner = env;
      inner.erase(a->var);
      footprint_locs(a->a1, inner, out);
      return;
    }
    default:
      footprint_locs(a->a1, env, out);
      footprint_locs(a->a2, env, out);
  }
}

struct Validator {
  const ModelOptions& opt;
  ModelStats* stats;
  Counterexample* cex;

  bool fail(const Env& env, const PhysHeap& h) {
    if (cex) {
      cex->env = env;
      cex->heap = h;
    }
    return false;
  }

  bool check(const AssertionPtr& a, Env& env) {
    Evaluator ev(opt, stats);
    ev.init(a, nullptr, env);
    static const PhysHeap empty;
    if (a->kind == AKind::And) return check(a->a1, env) && check(a->a2, env);
    if (a->kind == AKind::Forall) {
      auto vals = ev.quant_values(a, env);
      Evaluator::Bind b(env, a->var);
      for (const auto& v : vals) {
        b.set(v);
        if (!check(a->a1, env)) return false;
      }
      return true;
    }
    if (ev.is_hi(a)) return ev.sat(empty, a, env) || fail(env, empty);
    if (a->kind == AKind::Imp && ev.is_mono(a->a2)) {
      if (ev.is_hi(a->a1)) {
        if (!ev.sat(empty, a->a1, env)) return true;
        return check(a->a2, env);
      }
      if (ev.is_mono(a->a1)) {
        for (const auto& m : ev.gen(a->a1, env, ev.fill_for(a))) {
          Evaluator inner(opt, stats);
          inner.init(a, &m, env);
          if (!inner.sat(m, a->a2, env)) return fail(env, m);
        }
        return true;
      }
    }
    // general case: every heap over the mentioned locations
    std::set<HeapLoc> locs;
    footprint_locs(a, env, locs);
    std::vector<HeapLoc> ls(locs.begin(), locs.end());
    auto vals = ev.fill_for(a);
    double total = 1;
    for (std::size_t i = 0; i < ls.size(); ++i) total *= static_cast<double>(vals.size() + 1);
    if (total > 1e6) throw UnsupportedAssertion("bounded heap universe too large");
    std::vector<std::size_t> digit(ls.size(), 0);
    for (;;) {
      PhysHeap h;
      for (std::size_t i = 0; i < ls.size(); ++i)
        if (digit[i] > 0) h.emplace(ls[i], vals[digit[i] - 1]);
      Evaluator inner(opt, stats);
      inner.init(a, &h, env);
      if (!inner.sat(h, a, env)) return fail(env, h);
      std::size_t i = 0;
      while (i < ls.size() && ++digit[i] == vals.size() + 1) digit[i++] = 0;
      if (i == ls.size()) break;
    }
    return true;
  }
};

}  // namespace

bool valid_bounded(const AssertionPtr& a, const Domains& domains, const ModelOptions& opts, Counterexample* cex,
                   ModelStats* stats) {
  std::vector<std::string> vars;
  for (const auto& x : free_vars(a)) {
    if (!domains.count(x)) throw UnsupportedAssertion("no finite domain for " + x);
    vars.push_back(x);
  }
  Validator v{opts, stats, cex};
  Env env;
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == vars.size()) return v.check(a, env);
    for (const auto& val : domains.at(vars[k])) {
      env[vars[k]] = val;
      if (!rec(k + 1)) return false;
    }
    env.erase(vars[k]);
    return true;
  };
  return rec(0);
}

}  // namespace ctms
