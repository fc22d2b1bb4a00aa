#include "ctms/linear.hpp"

namespace ctms {

bool Lin::only(const std::set<std::string>& vars) const {
  for (const auto& [x, k] : coef)
    if (k != 0 && !vars.count(x)) return false;
  return true;
}

static void tidy(Lin& l) {
  for (auto it = l.coef.begin(); it != l.coef.end();) {
    if (it->second == 0) it = l.coef.erase(it);
    else ++it;
  }
}

Lin operator+(const Lin& a, const Lin& b) {
  Lin r = a;
  for (const auto& [x, k] : b.coef) r.coef[x] += k;
  r.c += b.c;
  tidy(r);
  return r;
}

Lin operator-(const Lin& a, const Lin& b) {
  Lin r = a;
  for (const auto& [x, k] : b.coef) r.coef[x] -= k;
  r.c -= b.c;
  tidy(r);
  return r;
}

std::optional<Lin> linearize(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Lit: {
      auto* i = as_int(e->lit);
      if (!i) return std::nullopt;
      Lin l;
      l.c = *i;
      return l;
    }
    case Expr::Kind::Var: {
      Lin l;
      l.coef[e->name] = 1;
      return l;
    }
    case Expr::Kind::App: {
      if (e->op != Op::Add && e->op != Op::Sub) return std::nullopt;
      auto a = linearize(e->args[0]);
      auto b = linearize(e->args[1]);
      if (!a || !b) return std::nullopt;
      return e->op == Op::Add ? *a + *b : *a - *b;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Lin>> linear_atoms(const ExprPtr& e) {
  if (e->kind == Expr::Kind::Lit) {
    auto* b = as_bool(e->lit);
    if (!b) return std::nullopt;
    Lin l;
    l.c = *b ? 0 : -1;
    return std::vector<Lin>{l};
  }
  if (e->kind != Expr::Kind::App) return std::nullopt;
  bool neg = false;
  ExprPtr cmp = e;
  if (e->op == Op::Not) {
    neg = true;
    cmp = e->args[0];
    if (cmp->kind != Expr::Kind::App) return std::nullopt;
  }
  if (cmp->op != Op::Le && cmp->op != Op::Lt && (cmp->op != Op::Eq || neg)) return std::nullopt;
  auto x = linearize(cmp->args[0]);
  auto y = linearize(cmp->args[1]);
  if (!x || !y) return std::nullopt;
  Lin one;
  one.c = 1;
  if (cmp->op == Op::Eq) return std::vector<Lin>{*y - *x, *x - *y};
  if (!neg) {
    if (cmp->op == Op::Le) return std::vector<Lin>{*y - *x};
    return std::vector<Lin>{*y - *x - one};
  }
  // ~(x <= y) is y < x; ~(x < y) is y <= x
  if (cmp->op == Op::Le) return std::vector<Lin>{*x - *y - one};
  return std::vector<Lin>{*x - *y};
}

static void split_and_expr(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == Expr::Kind::App && e->op == Op::And) {
    split_and_expr(e->args[0], out);
    split_and_expr(e->args[1], out);
  } else {
    out.push_back(e);
  }
}

void conjuncts(const AssertionPtr& a, std::vector<ExprPtr>& out, std::vector<AssertionPtr>& rest) {
  switch (a->kind) {
    case AKind::And:
      conjuncts(a->a1, out, rest);
      conjuncts(a->a2, out, rest);
      return;
    case AKind::Pure: split_and_expr(a->e1, out); return;
    case AKind::True: return;
    default: rest.push_back(a);
  }
}

ExprPtr to_expr(const Lin& l) {
  ExprPtr e;
  for (const auto& [x, k] : l.coef) {
    if (k == 0) continue;
    ExprPtr term = var(x);
    Int mag = k < 0 ? Int(-k) : k;
    for (Int i = 1; i < mag; ++i) term = add(term, var(x));
    if (!e) e = k < 0 ? sub(lit_int(0), term) : term;
    else e = k < 0 ? sub(e, term) : add(e, term);
  }
  if (!e) return lit(Value{l.c});
  if (l.c > 0) return add(e, lit(Value{l.c}));
  if (l.c < 0) return sub(e, lit(Value{Int(-l.c)}));
  return e;
}

std::optional<IndexGuard> read_index_guard(const AssertionPtr& g, const std::string& i, const std::string& s) {
  std::vector<ExprPtr> atoms;
  std::vector<AssertionPtr> rest;
  conjuncts(g, atoms, rest);
  if (!rest.empty()) return std::nullopt;
  std::optional<Int> lo, c;
  for (const auto& e : atoms) {
    auto ls = linear_atoms(e);
    if (!ls) return std::nullopt;
    for (const auto& l : *ls) {
      if (!l.only({i, s})) return std::nullopt;
      Int a = l.at(i), b = l.at(s);
      if (a == 1 && b == 0) {
        // i - lo >= 0
        Int v = -l.c;
        if (!lo || v > *lo) lo = v;
      } else if (a == -1 && b == 1) {
        // s + c - i >= 0
        if (!c || l.c < *c) c = l.c;
      } else {
        return std::nullopt;
      }
    }
  }
  if (!lo || !c) return std::nullopt;
  return IndexGuard{*lo, *c};
}


AccessClass access_class(const ExprPtr& e, const std::string& i, const std::string& s) {
  auto ls = linear_atoms(e);
  if (!ls) return AccessClass::Unsupported;
  AccessClass cls = AccessClass::Unsupported;
  for (const auto& l : *ls) {
    if (!l.only({i, s})) return AccessClass::Unsupported;
    Int a = l.at(i), b = l.at(s);
    AccessClass k = a == 0 && b == 0   ? AccessClass::Constant
                    : b == 0 && a > 0  ? AccessClass::Low
                    : a + b == 0 && a < 0 ? AccessClass::High
                                         : AccessClass::Unsupported;
    if (k == AccessClass::Unsupported || (cls != AccessClass::Unsupported && k != cls))
      return AccessClass::Unsupported;
    cls = k;
  }
  return cls;
}

}  // namespace ctms
