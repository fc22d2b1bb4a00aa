#include "ctms/ct.hpp"
#include "ctms/lang.hpp"
#include "ctms/linear.hpp"
#include "ctms/syntax.hpp"

#include <algorithm>

namespace ctms {

// ---- IntervalSet ----

IntervalSet IntervalSet::naturals() { return at_least(0); }

IntervalSet IntervalSet::at_least(Int lo) { return range(std::move(lo), std::nullopt); }

IntervalSet IntervalSet::range(Int lo, std::optional<Int> hi) {
  IntervalSet r;
  if (lo < 0) lo = 0;
  if (hi && *hi < lo) return r;
  r.parts_.push_back({lo, hi});
  return r;
}

bool IntervalSet::contains(const Int& x) const {
  for (const auto& p : parts_)
    if (x >= p.lo && (!p.hi || x <= *p.hi)) return true;
  return false;
}

std::optional<Int> IntervalSet::min() const {
  if (parts_.empty()) return std::nullopt;
  return parts_.front().lo;
}

void IntervalSet::add(Interval iv) {
  if (iv.lo < 0) iv.lo = 0;
  if (iv.hi && *iv.hi < iv.lo) return;
  parts_.push_back(iv);
  std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& p : parts_) {
    if (!merged.empty()) {
      auto& last = merged.back();
      if (!last.hi || p.lo <= *last.hi + 1) {
        if (last.hi && (!p.hi || *p.hi > *last.hi)) last.hi = p.hi;
        continue;
      }
    }
    merged.push_back(p);
  }
  parts_ = std::move(merged);
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  IntervalSet r;
  for (const auto& a : parts_)
    for (const auto& b : o.parts_) {
      Int lo = std::max(a.lo, b.lo);
      std::optional<Int> hi = !a.hi ? b.hi : !b.hi ? a.hi : std::optional<Int>(std::min(*a.hi, *b.hi));
      if (!hi || lo <= *hi) r.add({lo, hi});
    }
  return r;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  IntervalSet r = *this;
  for (const auto& p : o.parts_) r.add(p);
  return r;
}

IntervalSet IntervalSet::complement() const {
  IntervalSet r;
  Int next = 0;
  for (const auto& p : parts_) {
    if (p.lo > next) r.add({next, Int(p.lo - 1)});
    if (!p.hi) return r;
    next = *p.hi + 1;
  }
  r.add({next, std::nullopt});
  return r;
}

bool IntervalSet::subset_of(const IntervalSet& o) const { return intersect(o) == *this; }

bool IntervalSet::operator==(const IntervalSet& o) const {
  if (parts_.size() != o.parts_.size()) return false;
  for (std::size_t k = 0; k < parts_.size(); ++k)
    if (parts_[k].lo != o.parts_[k].lo || parts_[k].hi != o.parts_[k].hi) return false;
  return true;
}

std::string IntervalSet::to_string(const std::string& v) const {
  if (parts_.empty()) return "false";
  std::string out;
  for (const auto& p : parts_) {
    if (!out.empty()) out += " || ";
    if (!p.hi) out += p.lo == 0 ? "true" : v + " >= " + p.lo.str();
    else if (*p.hi == p.lo) out += v + " = " + p.lo.str();
    else if (p.lo == 0) out += v + " <= " + p.hi->str();
    else out += p.lo.str() + " <= " + v + " <= " + p.hi->str();
  }
  return out;
}

bool ConstraintSet::same_regions(const ConstraintSet& o) const {
  auto covered = [](const std::vector<Constraint>& a, const std::vector<Constraint>& b) {
    for (const auto& x : a) {
      bool found = false;
      for (const auto& y : b) found = found || x.region == y.region;
      if (!found) return false;
    }
    return true;
  };
  return var == o.var && covered(constraints, o.constraints) && covered(o.constraints, constraints);
}

// ---- regions of formulas over x alone ----

namespace {

bool is_cmp(Op op) { return op == Op::Le || op == Op::Lt || op == Op::Eq; }

// Collects cell boundaries from the comparisons that mention x.  Fails when x
// occurs anywhere other than in a comparison that is linear in x alone.
bool x_breakpoints(const ExprPtr& e, const std::string& x, std::set<Int>& out) {
  if (!mentions(e, x)) return true;
  if (e->kind == Expr::Kind::Var) return false;
  if (e->kind != Expr::Kind::App) return true;
  if (is_cmp(e->op)) {
    auto l = linearize(e->args[0]);
    auto r = linearize(e->args[1]);
    if (!l || !r) return false;
    Lin d = *r - *l;
    if (!d.only({x})) return false;
    Int a = d.at(x);
    if (a == 0) return true;
    Int root = -d.c / a;
    for (int k = -1; k <= 2; ++k) out.insert(root + k);
    return true;
  }
  for (const auto& arg : e->args)
    if (!x_breakpoints(arg, x, out)) return false;
  return true;
}

bool x_breakpoints(const AssertionPtr& a, const std::string& x, std::set<Int>& out) {
  if (!a) return true;
  if (a->kind == AKind::Forall || a->kind == AKind::Exists) {
    if (a->var == x) return true;
  }
  if (a->e1 && !x_breakpoints(a->e1, x, out)) return false;
  if (a->e2 && !x_breakpoints(a->e2, x, out)) return false;
  return x_breakpoints(a->a1, x, out) && x_breakpoints(a->a2, x, out);
}

// cells of ℕ on which every x-comparison keeps its truth value
std::optional<std::vector<IntervalSet>> cells(const AssertionPtr& f, const std::string& x) {
  std::set<Int> bp;
  if (!x_breakpoints(f, x, bp)) return std::nullopt;
  bp.insert(0);
  std::vector<Int> starts;
  for (const auto& b : bp)
    if (b >= 0) starts.push_back(b);
  std::vector<IntervalSet> out;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    if (k + 1 < starts.size()) out.push_back(IntervalSet::range(starts[k], Int(starts[k + 1] - 1)));
    else out.push_back(IntervalSet::at_least(starts[k]));
  }
  return out;
}

}  // namespace

std::optional<IntervalSet> region_of(const AssertionPtr& g, const std::string& x) {
  for (const auto& v : free_vars(g))
    if (v != x) return std::nullopt;
  auto cs = cells(g, x);
  if (!cs) return std::nullopt;
  IntervalSet r;
  for (const auto& c : *cs)
    if (eval_pure(g, {{x, Value{*c.min()}}})) r = r.unite(c);
  return r;
}

// ---- extraction ----

namespace {

struct Extractor {
  std::string x;
  ExtractOptions opts;
  std::vector<Constraint> out;
  std::vector<std::string> provenance;
  std::vector<IntervalSet> free_regions;  // x-free parts that need one witness somewhere here
  std::string failure;

  bool fail(const std::string& why) {
    if (failure.empty()) failure = why;
    return false;
  }

  void emit(const IntervalSet& region, const std::string& text, const std::string& prov) {
    out.push_back({region, text, prov});
    provenance.push_back(prov + ": " + text);
  }

  bool guarded(const AssertionPtr& f, const IntervalSet& region) {
    const std::string& i = f->var;
    auto g = read_index_guard(f->a1->a1, i, x);
    if (!g) return fail("guard is not of the form lo <= " + i + " <= " + x + " + c: " + to_string(f->a1->a1));
    std::vector<ExprPtr> atoms;
    std::vector<AssertionPtr> rest;
    conjuncts(f->a1->a2, atoms, rest);
    for (const auto& r : rest)
      if (mentions(r, i) || mentions(r, x)) return fail("access condition is not linear: " + to_string(r));
    for (const auto& e : atoms) {
      if (!mentions(e, i) && !mentions(e, x)) continue;
      if (access_class(e, i, x) == AccessClass::Unsupported)
        return fail("access condition does not stay fixed along the guard: " + to_string(e));
    }
    Int threshold = g->lo - g->c + opts.threshold_bias;
    auto c = region.intersect(IntervalSet::at_least(threshold));
    emit(c, c.to_string(x), "guarded-access");
    return true;
  }

  bool run(const AssertionPtr& f, const IntervalSet& region) {
    if (region.empty()) return true;
    if (!mentions(f, x)) {
      if (f->kind != AKind::True) free_regions.push_back(region);
      return true;
    }
    switch (f->kind) {
      case AKind::And: return run(f->a1, region) && run(f->a2, region);
      case AKind::Imp:
        if (auto g = region_of(f->a1, x)) {
          provenance.push_back("size-guard: " + to_string(f->a1));
          return run(f->a2, region.intersect(*g));
        }
        break;
      case AKind::Forall:
        if (f->dom.kind != Domain::Kind::Int) break;
        if (!mentions(f->a1, f->var)) return run(f->a1, region);
        if (f->a1->kind == AKind::Imp) {
          const auto& guard = f->a1->a1;
          const auto& body = f->a1->a2;
          if (mentions(guard, x)) return guarded(f, region);
          if (!mentions(body, f->var)) return run(body, region);
        }
        break;
      default: break;
    }
    // x only inside comparisons on x itself: truth is fixed on each cell
    if (auto cs = cells(f, x)) {
      for (const auto& c : *cs) {
        auto r = c.intersect(region);
        if (!r.empty()) emit(r, r.to_string(x), "size-cell");
      }
      return true;
    }
    return fail("unsupported shape for " + x + ": " + to_string(f));
  }
};

}  // namespace

MinimalWitnesses minimal_witnesses(const ConstraintSet& k, const Int& bound) {
  MinimalWitnesses r;
  std::set<Int> ws;
  for (const auto& c : k.constraints) {
    auto m = c.least_model();
    if (!m) continue;
    if (*m > bound) r.unreached.push_back(c.text);
    else ws.insert(*m);
  }
  r.witnesses.assign(ws.begin(), ws.end());
  return r;
}

bool models_constraints(const std::set<Int>& q, const ConstraintSet& k) {
  for (const auto& c : k.constraints) {
    if (!c.satisfiable()) continue;
    bool hit = false;
    for (const auto& v : q) hit = hit || c.region.contains(v);
    if (!hit) return false;
  }
  return true;
}

CTResult extract_ct(const AssertionPtr& f, const std::string& x, const ExtractOptions& opts) {
  CTResult r;
  r.set.var = x;
  Extractor ex{x, opts, {}, {}, {}, {}};
  if (!ex.run(f, IntervalSet::naturals())) {
    r.flag = SupportFlag::Fallback;
    r.fallback_reason = ex.failure;
    r.provenance = ex.provenance;
    r.provenance.push_back("fallback: " + ex.failure);
    return r;
  }
  r.set.constraints = ex.out;
  r.provenance = ex.provenance;
  // size-independent parts only need some checked size in their region
  for (const auto& region : ex.free_regions) {
    auto w = minimal_witnesses(r.set, opts.bound).witnesses;
    bool covered = std::any_of(w.begin(), w.end(), [&](const Int& v) { return region.contains(v); });
    if (!covered) {
      r.set.constraints.push_back({region, region.to_string(x), "size-independent"});
      r.provenance.push_back("size-independent: " + region.to_string(x));
    }
  }
  auto mw = minimal_witnesses(r.set, opts.bound);
  r.witnesses = mw.witnesses;
  r.unreached = mw.unreached;
  return r;
}

CTResult extract_ct_size(const PureFormula& f, const std::string& x, const ExtractOptions& opts) {
  auto r = extract_ct(f.formula, x, opts);
  std::vector<std::string> prov;
  for (const auto& s : f.steps) prov.push_back("rewrite: " + s.rule);
  prov.insert(prov.end(), r.provenance.begin(), r.provenance.end());
  r.provenance = std::move(prov);
  return r;
}

SliceResult slice_vc(const AssertionPtr& a, const std::string& x) {
  SliceResult r;
  AKind k = a->kind == AKind::Star ? AKind::Star : AKind::And;
  std::vector<AssertionPtr> parts, kept;
  flatten(a, k, parts);
  for (const auto& p : parts) {
    if (mentions(p, x)) kept.push_back(p);
    else r.dropped.push_back(p);
  }
  r.separable = !r.dropped.empty();
  if (!r.separable) {
    r.result = a;
    return r;
  }
  r.result = k == AKind::Star ? a_star_all(kept) : a_and_all(kept);
  return r;
}

Subdomain subdomain_reduce(const std::set<Int>& d, const std::function<bool(const Int&)>& valid) {
  Subdomain r;
  std::optional<Int> rep_true, rep_false;
  for (const auto& v : d) {
    auto& rep = valid(v) ? rep_true : rep_false;
    if (!rep) rep = v;
  }
  if (rep_true) r.points.insert(*rep_true);
  if (rep_false) r.points.insert(*rep_false);
  return r;
}

ConstraintSet combine_seq(const ConstraintSet& k1, const ConstraintSet& k2) {
  ConstraintSet r = k1;
  if (r.var.empty()) r.var = k2.var;
  r.constraints.insert(r.constraints.end(), k2.constraints.begin(), k2.constraints.end());
  return r;
}

ConstraintSet combine_if(const IntervalSet& guard, const std::string& guard_text, const ConstraintSet& k1,
                         const ConstraintSet& k2) {
  ConstraintSet r;
  r.var = k1.var.empty() ? k2.var : k1.var;
  for (const auto& c : k1.constraints)
    r.constraints.push_back({c.region.intersect(guard), "(" + guard_text + ") && (" + c.text + ")", c.provenance});
  auto neg = guard.complement();
  for (const auto& c : k2.constraints)
    r.constraints.push_back({c.region.intersect(neg), "~(" + guard_text + ") && (" + c.text + ")", c.provenance});
  return r;
}

std::optional<Int> exists_witness(const AssertionPtr& f, const std::string& x, const std::vector<Int>& candidates) {
  for (const auto& c : candidates)
    if (eval_pure(f, {{x, Value{c}}})) return c;
  return std::nullopt;
}

}  // namespace ctms
