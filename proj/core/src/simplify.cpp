#include "ctms/assertions.hpp"
#include "ctms/syntax.hpp"
#include "ctms/vc.hpp"

#include <algorithm>
#include <functional>

namespace ctms {

namespace {

bool is(const AssertionPtr& a, AKind k) { return a && a->kind == k; }

AssertionPtr s_and(const AssertionPtr& x, const AssertionPtr& y) {
  if (is(x, AKind::True)) return y;
  if (is(y, AKind::True)) return x;
  if (is(x, AKind::False) || is(y, AKind::False)) return a_false();
  return a_and(x, y);
}

AssertionPtr s_imp(const AssertionPtr& g, const AssertionPtr& x) {
  if (is(g, AKind::True)) return x;
  if (is(x, AKind::True) || is(g, AKind::False)) return a_true();
  return a_imp(g, x);
}

AssertionPtr and_list(const std::vector<AssertionPtr>& xs) {
  AssertionPtr r = a_true();
  for (const auto& x : xs) r = s_and(r, x);
  return r;
}

std::vector<AssertionPtr> chain(const AssertionPtr& a, AKind k) {
  std::vector<AssertionPtr> out;
  flatten(a, k, out);
  return out;
}

// ---- layouts ----

bool layout_atom(const AssertionPtr& a) {
  return is(a, AKind::Array) || is(a, AKind::PointsToAny) || is(a, AKind::PointsTo);
}

struct Layout {
  std::vector<AssertionPtr> guards;  // pure conjuncts
  std::vector<AssertionPtr> atoms;
};

bool collect_layout(const AssertionPtr& a, Layout& l) {
  switch (a->kind) {
    case AKind::True: return true;
    case AKind::Pure: l.guards.push_back(a); return true;
    case AKind::Star:
    case AKind::And: return collect_layout(a->a1, l) && collect_layout(a->a2, l);
    default:
      if (!layout_atom(a)) return false;
      l.atoms.push_back(a);
      return true;
  }
}

std::optional<Layout> as_layout(const AssertionPtr& a) {
  Layout l;
  if (!collect_layout(a, l)) return std::nullopt;
  return l;
}

bool same_atoms(const std::vector<AssertionPtr>& x, const std::vector<AssertionPtr>& y) {
  if (x.size() != y.size()) return false;
  std::vector<bool> used(y.size(), false);
  for (const auto& a : x) {
    bool found = false;
    for (std::size_t j = 0; j < y.size() && !found; ++j)
      if (!used[j] && equal(a, y[j])) used[j] = found = true;
    if (!found) return false;
  }
  return true;
}

bool sub_atoms(const std::vector<AssertionPtr>& x, const std::vector<AssertionPtr>& y) {
  for (const auto& a : x) {
    bool found = false;
    for (const auto& b : y) found = found || equal(a, b);
    if (!found) return false;
  }
  return true;
}

// object variables must be distinct for the layout to be satisfiable at every size
bool distinct_objects(const Layout& l) {
  for (std::size_t i = 0; i < l.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < l.atoms.size(); ++j) {
      const auto& x = l.atoms[i]->e1;
      const auto& y = l.atoms[j]->e1;
      auto base = [](const ExprPtr& e) {
        return e->kind == Expr::Kind::App && e->op == Op::Offset ? e->args[0] : e;
      };
      if (equal(base(x), base(y))) return false;
    }
  return true;
}

std::set<std::string> object_vars(const Layout& l) {
  std::set<std::string> out;
  for (const auto& a : l.atoms)
    for (const auto& x : free_vars(a->e1)) out.insert(x);
  return out;
}

// ---- footprint conditions ----

struct Cell {
  ExprPtr base;
  ExprPtr idx;
};

std::optional<Cell> decompose(const ExprPtr& e) {
  if (e->kind == Expr::Kind::App && e->op == Op::Offset) return Cell{e->args[0], e->args[1]};
  if (e->kind == Expr::Kind::Lit)
    if (auto* l = as_loc(e->lit)) return Cell{lit(Value{l->object}), lit(Value{l->index})};
  return std::nullopt;
}

// location e is allocated in every minimal model of the layout
AssertionPtr in_footprint(const ExprPtr& e, const std::vector<AssertionPtr>& atoms) {
  auto cell = decompose(e);
  std::vector<AssertionPtr> alts;
  for (const auto& a : atoms) {
    if (a->kind == AKind::Array) {
      if (cell && equal(cell->base, a->e1))
        alts.push_back(a_pure(and_(le(lit_int(0), cell->idx), lt(cell->idx, a->e2))));
      continue;
    }
    if (equal(a->e1, e)) return a_true();
    auto other = decompose(a->e1);
    if (cell && other && equal(cell->base, other->base)) alts.push_back(a_pure(eq(cell->idx, other->idx)));
  }
  if (alts.empty()) return a_false();
  AssertionPtr r = alts[0];
  for (std::size_t i = 1; i < alts.size(); ++i) r = a_or(r, alts[i]);
  return r;
}

// pure parts of a wand's left side, and what remains
std::pair<std::vector<AssertionPtr>, AssertionPtr> strip_pure(const AssertionPtr& a) {
  if (heap_independent(a)) return {{a}, a_true()};
  if (a->kind == AKind::And || (a->kind == AKind::Star && monotone(a->a1) && monotone(a->a2))) {
    auto [g1, r1] = strip_pure(a->a1);
    auto [g2, r2] = strip_pure(a->a2);
    g1.insert(g1.end(), g2.begin(), g2.end());
    AssertionPtr rest;
    if (is(r1, AKind::True)) rest = r2;
    else if (is(r2, AKind::True)) rest = r1;
    else rest = a->kind == AKind::And ? a_and(r1, r2) : a_star(r1, r2);
    return {g1, rest};
  }
  return {{}, a};
}

std::optional<AssertionPtr> cond_full(const AssertionPtr& w, const std::vector<AssertionPtr>& L);
std::optional<AssertionPtr> cond_empty(const AssertionPtr& z);

// truth of `l -* w` at the empty heap
std::optional<AssertionPtr> wand_at_empty(const AssertionPtr& l, const AssertionPtr& w) {
  if (!monotone(w)) return std::nullopt;
  auto [guards, rest] = strip_pure(l);
  std::vector<AssertionPtr> gs;
  for (const auto& g : guards) {
    auto c = cond_empty(g);
    if (!c) return std::nullopt;
    gs.push_back(*c);
  }
  std::optional<AssertionPtr> body;
  if (is(rest, AKind::True)) {
    body = cond_empty(w);
  } else {
    auto lay = as_layout(rest);
    if (!lay || !lay->guards.empty() || !distinct_objects(*lay)) return std::nullopt;
    body = cond_full(w, lay->atoms);
  }
  if (!body) return std::nullopt;
  return s_imp(and_list(gs), *body);
}

std::optional<AssertionPtr> cond_empty(const AssertionPtr& z) {
  switch (z->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Pure: return z;
    case AKind::PointsTo:
    case AKind::PointsToAny: return a_false();
    case AKind::Array: return a_pure(eq(z->e2, lit_int(0)));
    case AKind::Box: return cond_empty(z->a1);
    case AKind::Not: {
      auto x = cond_empty(z->a1);
      if (!x) return std::nullopt;
      return a_not(*x);
    }
    case AKind::And:
    case AKind::Or:
    case AKind::Imp:
    case AKind::Star: {
      auto x = cond_empty(z->a1);
      auto y = cond_empty(z->a2);
      if (!x || !y) return std::nullopt;
      if (z->kind == AKind::Or) return a_or(*x, *y);
      if (z->kind == AKind::Imp) return s_imp(*x, *y);
      return s_and(*x, *y);
    }
    case AKind::Wand: return wand_at_empty(z->a1, z->a2);
    case AKind::Forall:
    case AKind::Exists: {
      if (z->dom.kind == Domain::Kind::Val) return std::nullopt;
      auto b = cond_empty(z->a1);
      if (!b) return std::nullopt;
      if (is(*b, AKind::True)) return a_true();
      return z->kind == AKind::Forall ? a_forall(z->var, z->dom, *b) : a_exists(z->var, z->dom, *b);
    }
  }
  return std::nullopt;
}

const Assertion* reader(const std::vector<AssertionPtr>& parts, const std::string& v, std::size_t& at) {
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = parts[k];
    if (p->kind == AKind::PointsTo && p->e2->kind == Expr::Kind::Var && p->e2->name == v && !mentions(p->e1, v)) {
      at = k;
      return p.get();
    }
  }
  return nullptr;
}

std::optional<AssertionPtr> cond_chain(const std::vector<AssertionPtr>& parts, const std::vector<AssertionPtr>& L) {
  // write:  e |-> _ * (e |-> x -* Q)
  if (parts.size() == 2) {
    for (int k = 0; k < 2; ++k) {
      const auto& p = parts[k];
      const auto& q = parts[1 - k];
      if (p->kind == AKind::PointsToAny && q->kind == AKind::Wand && q->a1->kind == AKind::PointsTo &&
          equal(q->a1->e1, p->e1)) {
        auto rest = cond_full(q->a2, L);
        if (!rest) return std::nullopt;
        return s_and(in_footprint(p->e1, L), *rest);
      }
    }
  }
  // all layout elements together consume the footprint
  Layout consumed;
  std::vector<bool> is_consumer(parts.size(), false);
  bool has_wand = false;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = parts[k];
    if (heap_independent(p)) continue;
    if (p->kind == AKind::Wand) {
      has_wand = true;
      continue;
    }
    if (!collect_layout(p, consumed)) return std::nullopt;
    is_consumer[k] = true;
  }
  if (has_wand ? !same_atoms(consumed.atoms, L) : !sub_atoms(consumed.atoms, L)) return std::nullopt;
  std::vector<AssertionPtr> out = consumed.guards;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (is_consumer[k]) continue;
    // everything else sees the empty heap
    auto c = cond_empty(parts[k]);
    if (!c) return std::nullopt;
    out.push_back(*c);
  }
  return and_list(out);
}

// truth of w on every minimal model of the layout L
std::optional<AssertionPtr> cond_full(const AssertionPtr& w, const std::vector<AssertionPtr>& L) {
  switch (w->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Pure: return w;
    case AKind::And:
    case AKind::Or: {
      auto x = cond_full(w->a1, L);
      auto y = cond_full(w->a2, L);
      if (!x || !y) return std::nullopt;
      return w->kind == AKind::And ? s_and(*x, *y) : a_or(*x, *y);
    }
    case AKind::Imp: {
      if (!heap_independent(w->a1)) return std::nullopt;
      auto g = cond_empty(w->a1);
      auto x = cond_full(w->a2, L);
      if (!g || !x) return std::nullopt;
      return s_imp(*g, *x);
    }
    case AKind::Not: {
      if (!heap_independent(w->a1)) return std::nullopt;
      auto x = cond_empty(w->a1);
      if (!x) return std::nullopt;
      return a_not(*x);
    }
    case AKind::Box: return cond_empty(w->a1);
    case AKind::PointsToAny: return in_footprint(w->e1, L);
    case AKind::PointsTo: return std::nullopt;
    case AKind::Array: {
      for (const auto& a : L)
        if (equal(a, w)) return a_true();
      return std::nullopt;
    }
    case AKind::Star: return cond_chain(chain(w, AKind::Star), L);
    case AKind::Wand: return std::nullopt;
    case AKind::Forall:
    case AKind::Exists: {
      if (w->dom.kind != Domain::Kind::Val) {
        auto b = cond_full(w->a1, L);
        if (!b) return std::nullopt;
        if (is(*b, AKind::True)) return a_true();
        return w->kind == AKind::Forall ? a_forall(w->var, w->dom, *b) : a_exists(w->var, w->dom, *b);
      }
      if (w->kind == AKind::Forall) return std::nullopt;
      auto parts = chain(w->a1, AKind::And);
      std::size_t at = 0;
      const Assertion* r = reader(parts, w->var, at);
      if (!r) return std::nullopt;
      std::vector<AssertionPtr> rest;
      for (std::size_t k = 0; k < parts.size(); ++k)
        if (k != at) rest.push_back(parts[k]);
      auto c = cond_full(rest.empty() ? a_true() : a_and_all(rest), L);
      if (!c || mentions(*c, w->var)) return std::nullopt;
      return s_and(in_footprint(r->e1, L), *c);
    }
  }
  return std::nullopt;
}

// ---- rules ----

struct Ctx {
  bool validity;
  const std::set<std::string>& nats;
};

using Rule = std::function<std::optional<AssertionPtr>(const AssertionPtr&, const Ctx&)>;

std::optional<AssertionPtr> r_wand_identity(const AssertionPtr& a, const Ctx&) {
  if (a->kind == AKind::Wand && equal(a->a1, a->a2) && monotone(a->a1)) return a_true();
  return std::nullopt;
}

std::optional<AssertionPtr> r_true_elim(const AssertionPtr& a, const Ctx&) {
  auto T = [](const AssertionPtr& x) { return is(x, AKind::True); };
  auto F = [](const AssertionPtr& x) { return is(x, AKind::False); };
  switch (a->kind) {
    case AKind::Pure:
      if (a->e1->kind == Expr::Kind::Lit && as_bool(a->e1->lit))
        return *as_bool(a->e1->lit) ? a_true() : a_false();
      break;
    case AKind::Star:
      if (T(a->a2) && monotone(a->a1)) return a->a1;
      if (T(a->a1) && monotone(a->a2)) return a->a2;
      if (F(a->a1) || F(a->a2)) return a_false();
      break;
    case AKind::And:
      if (T(a->a1)) return a->a2;
      if (T(a->a2)) return a->a1;
      if (F(a->a1) || F(a->a2)) return a_false();
      break;
    case AKind::Or:
      if (T(a->a1) || T(a->a2)) return a_true();
      if (F(a->a1)) return a->a2;
      if (F(a->a2)) return a->a1;
      break;
    case AKind::Imp:
      if (T(a->a2) || F(a->a1)) return a_true();
      if (T(a->a1)) return a->a2;
      break;
    case AKind::Wand:
      if (T(a->a2)) return a_true();
      break;
    case AKind::Box:
      if (T(a->a1) || F(a->a1)) return a->a1;
      break;
    case AKind::Forall:
      if (T(a->a1)) return a_true();
      break;
    default: break;
  }
  return std::nullopt;
}

// removes one copy of each of `pieces` from `parts`; the remainder must be heap independent
std::optional<std::vector<AssertionPtr>> strip_frame(std::vector<AssertionPtr> parts,
                                                     const std::vector<AssertionPtr>& pieces) {
  for (const auto& p : pieces) {
    auto it = std::find_if(parts.begin(), parts.end(), [&](const AssertionPtr& x) { return equal(x, p); });
    if (it == parts.end()) return std::nullopt;
    parts.erase(it);
  }
  for (const auto& p : parts)
    if (!heap_independent(p)) return std::nullopt;
  return parts;
}

std::optional<AssertionPtr> r_eliminate_frame(const AssertionPtr& a, const Ctx&) {
  // P -> P * Φ1 * ... with every Φ heap independent
  if (a->kind == AKind::Imp && monotone(a->a1) && !heap_independent(a->a1)) {
    auto rest = strip_frame(chain(a->a2, AKind::Star), chain(a->a1, AKind::Star));
    if (rest && !(rest->size() == 1 && equal((*rest)[0], a->a2)))
      return a_imp(a->a1, rest->empty() ? a_true() : a_and_all(*rest));
  }
  // inside a chain holding L:  L -* (L * Φ...)  becomes  Φ...
  if (a->kind == AKind::Star) {
    auto parts = chain(a, AKind::Star);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto& w = parts[k];
      if (w->kind != AKind::Wand || !monotone(w->a1) || heap_independent(w->a1)) continue;
      std::vector<AssertionPtr> others;
      for (std::size_t j = 0; j < parts.size(); ++j)
        if (j != k) others.push_back(parts[j]);
      auto lpieces = chain(w->a1, AKind::Star);
      bool held = true;
      {
        auto tmp = others;
        for (const auto& p : lpieces) {
          auto it = std::find_if(tmp.begin(), tmp.end(), [&](const AssertionPtr& x) { return equal(x, p); });
          if (it == tmp.end()) {
            held = false;
            break;
          }
          tmp.erase(it);
        }
      }
      if (!held) continue;
      auto phis = strip_frame(chain(w->a2, AKind::Star), lpieces);
      if (!phis) continue;
      parts[k] = phis->empty() ? a_true() : a_and_all(*phis);
      return a_star_all(parts);
    }
  }
  return std::nullopt;
}

std::optional<AssertionPtr> r_persistency(const AssertionPtr& a, const Ctx& c) {
  if (!c.validity || a->kind != AKind::Imp || !heap_independent(a->a2)) return std::nullopt;
  auto lay = as_layout(a->a1);
  if (!lay || lay->atoms.empty() || !distinct_objects(*lay)) return std::nullopt;
  auto objs = object_vars(*lay);
  for (const auto& x : free_vars(a->a2))
    if (objs.count(x)) return std::nullopt;
  for (const auto& x : free_vars(a->a2))
    (void)x;
  std::vector<AssertionPtr> gs = lay->guards;
  for (const auto& at : lay->atoms) {
    if (at->kind != AKind::Array) continue;
    const auto& n = at->e2;
    if (n->kind == Expr::Kind::Var && c.nats.count(n->name)) continue;
    if (n->kind == Expr::Kind::Lit && as_int(n->lit) && *as_int(n->lit) >= 0) continue;
    gs.push_back(a_pure(le(lit_int(0), n)));
  }
  return s_imp(and_list(gs), a->a2);
}

std::optional<AssertionPtr> r_box(const AssertionPtr& a, const Ctx&) {
  if (a->kind != AKind::Box) return std::nullopt;
  const auto& x = a->a1;
  if (heap_independent(x)) return x;
  switch (x->kind) {
    case AKind::Box: return x;
    case AKind::Forall: return a_forall(x->var, x->dom, a_box(x->a1));
    case AKind::And: return a_and(a_box(x->a1), a_box(x->a2));
    case AKind::Imp:
      if (heap_independent(x->a1)) return a_imp(x->a1, a_box(x->a2));
      break;
    case AKind::Wand: {
      auto [guards, rest] = strip_pure(x->a1);
      if (guards.empty() || is(rest, AKind::True)) break;
      return a_imp(a_and_all(guards), a_box(a_wand(rest, x->a2)));
    }
    default: break;
  }
  return std::nullopt;
}

std::optional<AssertionPtr> r_layout_footprint(const AssertionPtr& a, const Ctx&) {
  if (a->kind != AKind::Box || a->a1->kind != AKind::Wand) return std::nullopt;
  const auto& w = a->a1;
  auto lay = as_layout(w->a1);
  if (!lay || !lay->guards.empty() || lay->atoms.empty() || !distinct_objects(*lay)) return std::nullopt;
  if (!monotone(w->a2)) return std::nullopt;
  return cond_full(w->a2, lay->atoms);
}

std::optional<AssertionPtr> r_guard_distribution(const AssertionPtr& a, const Ctx&) {
  // P -> (G -> X)  becomes  G -> (P -> X)  for a pure G
  if (a->kind == AKind::Imp && !heap_independent(a->a1) && a->a2->kind == AKind::Imp &&
      heap_independent(a->a2->a1))
    return a_imp(a->a2->a1, a_imp(a->a1, a->a2->a2));
  if (a->kind == AKind::Imp && a->a2->kind == AKind::And)
    return a_and(a_imp(a->a1, a->a2->a1), a_imp(a->a1, a->a2->a2));
  if (a->kind == AKind::Forall && a->a1->kind == AKind::And)
    return a_and(a_forall(a->var, a->dom, a->a1->a1), a_forall(a->var, a->dom, a->a1->a2));
  if (a->kind == AKind::Forall && a->a1->kind == AKind::Imp && a->a1->a2->kind == AKind::And) {
    const auto& g = a->a1->a1;
    const auto& b = a->a1->a2;
    return a_and(a_forall(a->var, a->dom, a_imp(g, b->a1)), a_forall(a->var, a->dom, a_imp(g, b->a2)));
  }
  return std::nullopt;
}

std::optional<AssertionPtr> r_layout_validity(const AssertionPtr& a, const Ctx& c) {
  if (!c.validity || a->kind != AKind::Imp || heap_independent(a->a2)) return std::nullopt;
  auto lay = as_layout(a->a1);
  if (!lay || !distinct_objects(*lay) || !monotone(a->a2)) return std::nullopt;
  auto r = cond_full(a->a2, lay->atoms);
  if (!r) return std::nullopt;
  return a_imp(a->a1, *r);
}

struct NamedRule {
  std::string name;
  Rule fn;
};

const std::vector<NamedRule>& rules() {
  static const std::vector<NamedRule> rs = {
      {"wand-identity", r_wand_identity},
      {"true-elimination", r_true_elim},
      {"eliminate-frame", r_eliminate_frame},
      {"persistency", r_persistency},
      {"box-distribution", r_box},
      {"layout-footprint", r_layout_footprint},
      {"guard-distribution", r_guard_distribution},
      {"layout-validity", r_layout_validity},
  };
  return rs;
}

AssertionPtr rebuild(const AssertionPtr& a, const AssertionPtr& c1, const AssertionPtr& c2) {
  auto n = std::make_shared<Assertion>(*a);
  n->a1 = c1;
  n->a2 = c2;
  return n;
}

// first position in pre-order where the rule fires
std::optional<AssertionPtr> apply_once(const Rule& r, const AssertionPtr& a, bool validity,
                                       const std::set<std::string>& nats) {
  Ctx ctx{validity, nats};
  if (auto x = r(a, ctx)) return x;
  bool child_validity = validity && (a->kind == AKind::And || a->kind == AKind::Forall);
  // a pure antecedent does not change which heaps the consequent is judged on
  bool right_validity = child_validity || (validity && a->kind == AKind::Imp && heap_independent(a->a1));
  if (a->a1)
    if (auto x = apply_once(r, a->a1, child_validity, nats)) return rebuild(a, *x, a->a2);
  if (a->a2)
    if (auto x = apply_once(r, a->a2, right_validity, nats)) return rebuild(a, a->a1, *x);
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& r : rules()) n.push_back(r.name);
    return n;
  }();
  return names;
}

std::optional<AssertionPtr> apply_rule(const std::string& rule, const AssertionPtr& a,
                                       const std::set<std::string>& nats) {
  for (const auto& r : rules())
    if (r.name == rule) return apply_once(r.fn, a, true, nats);
  return std::nullopt;
}

SimplifyResult simplify_traced(const AssertionPtr& a, const std::set<std::string>& nats) {
  SimplifyResult out{a, {}};
  for (int iter = 0; iter < 500; ++iter) {
    bool fired = false;
    for (const auto& r : rules()) {
      if (auto x = apply_once(r.fn, out.result, true, nats)) {
        out.result = *x;
        out.steps.push_back({r.name, *x});
        fired = true;
        break;
      }
    }
    if (!fired) break;
  }
  return out;
}

AssertionPtr simplify(const AssertionPtr& a, const std::set<std::string>& nats) {
  return simplify_traced(a, nats).result;
}

}  // namespace ctms
