#include "ctms/lang.hpp"
#include "ctms/syntax.hpp"

#include <functional>
#include <sstream>

namespace ctms {

std::optional<Value> apply_op(Op op, const std::vector<Value>& v) {
  if (static_cast<int>(v.size()) != arity(op)) return std::nullopt;
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Lt:
    case Op::Le: {
      auto* x = as_int(v[0]);
      auto* y = as_int(v[1]);
      if (!x || !y) return std::nullopt;
      if (op == Op::Add) return Value{*x + *y};
      if (op == Op::Sub) return Value{*x - *y};
      if (op == Op::Lt) return Value{*x < *y};
      return Value{*x <= *y};
    }
    case Op::Eq:
      return Value{v[0] == v[1]};
    case Op::Not: {
      auto* b = as_bool(v[0]);
      if (!b) return std::nullopt;
      return Value{!*b};
    }
    case Op::And:
    case Op::Or: {
      auto* x = as_bool(v[0]);
      auto* y = as_bool(v[1]);
      if (!x || !y) return std::nullopt;
      return Value{op == Op::And ? (*x && *y) : (*x || *y)};
    }
    case Op::Offset: {
      auto* k = as_int(v[1]);
      if (!k) return std::nullopt;
      if (auto* o = as_obj(v[0])) return Value{HeapLoc{*o, *k}};
      if (auto* l = as_loc(v[0])) return Value{HeapLoc{l->object, l->index + *k}};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<Value> eval_expr(const ExprPtr& e, const Env& env) {
  switch (e->kind) {
    case Expr::Kind::Lit:
      return e->lit;
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::App: {
      std::vector<Value> vs;
      vs.reserve(e->args.size());
      for (const auto& a : e->args) {
        auto v = eval_expr(a, env);
        if (!v) return std::nullopt;
        vs.push_back(std::move(*v));
      }
      return apply_op(e->op, vs);
    }
  }
  return std::nullopt;
}

std::optional<Value> eval_closed_expr(const ExprPtr& e) {
  static const Env empty;
  return eval_expr(e, empty);
}

ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& by) {
  switch (e->kind) {
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Var:
      return e->name == x ? by : e;
    case Expr::Kind::App: {
      bool changed = false;
      std::vector<ExprPtr> args;
      for (const auto& a : e->args) {
        args.push_back(substitute(a, x, by));
        changed |= args.back() != a;
      }
      if (!changed) return e;
      return app(e->op, std::move(args), e->pos);
    }
  }
  return e;
}

static ExprPtr subst_opt(const ExprPtr& e, const std::string& x, const ExprPtr& by) {
  return e ? substitute(e, x, by) : e;
}

CmdPtr substitute(const CmdPtr& c, const std::string& x, const ExprPtr& by) {
  if (!c) return c;
  auto out = std::make_shared<Cmd>(*c);
  out->e1 = subst_opt(c->e1, x, by);
  out->e2 = subst_opt(c->e2, x, by);
  switch (c->kind) {
    case CmdKind::Let:
      out->c1 = substitute(c->c1, x, by);
      if (c->var != x) out->c2 = substitute(c->c2, x, by);
      break;
    case CmdKind::For:
      if (c->var != x) {
        out->c1 = substitute(c->c1, x, by);
        if (c->inv) out->inv = substitute(c->inv, x, by);
      }
      break;
    default:
      out->c1 = substitute(c->c1, x, by);
      out->c2 = substitute(c->c2, x, by);
      if (c->inv) out->inv = substitute(c->inv, x, by);
  }
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 0;; ++i) {
    std::string n = base + std::to_string(i);
    if (!avoid.count(n)) return n;
  }
}

static Domain subst_dom(const Domain& d, const std::string& x, const ExprPtr& by) {
  Domain r = d;
  r.lo = subst_opt(d.lo, x, by);
  r.hi = subst_opt(d.hi, x, by);
  for (auto& e : r.elems) e = substitute(e, x, by);
  return r;
}

AssertionPtr substitute(const AssertionPtr& a, const std::string& x, const ExprPtr& by) {
  if (!a) return a;
  auto out = std::make_shared<Assertion>(*a);
  if (a->kind == AKind::Forall || a->kind == AKind::Exists) {
    out->dom = subst_dom(a->dom, x, by);
    if (a->var == x) return out;
    auto by_fv = free_vars(by);
    AssertionPtr body = a->a1;
    if (by_fv.count(a->var)) {
      std::set<std::string> avoid = by_fv;
      auto body_fv = free_vars(body);
      avoid.insert(body_fv.begin(), body_fv.end());
      avoid.insert(x);
      std::string nv = fresh_name(a->var, avoid);
      body = substitute(body, a->var, var(nv));
      out->var = nv;
    }
    out->a1 = substitute(body, x, by);
    return out;
  }
  out->e1 = subst_opt(a->e1, x, by);
  out->e2 = subst_opt(a->e2, x, by);
  out->a1 = substitute(a->a1, x, by);
  out->a2 = substitute(a->a2, x, by);
  return out;
}

ExprPtr fold_constants(const ExprPtr& e) {
  if (e->kind != Expr::Kind::App) return e;
  std::vector<ExprPtr> args;
  bool all_lit = true;
  for (const auto& a : e->args) {
    args.push_back(fold_constants(a));
    all_lit &= args.back()->kind == Expr::Kind::Lit;
  }
  if (all_lit) {
    std::vector<Value> vs;
    for (const auto& a : args) vs.push_back(a->lit);
    if (auto v = apply_op(e->op, vs)) return lit(*v, e->pos);
  }
  return app(e->op, std::move(args), e->pos);
}

namespace {

std::string signed_term(const std::string& base, long long k) {
  return base + " + " + std::to_string(k);
}

}  // namespace

Program instantiate_trav(long long L, long long R, long long Z) {
  std::ostringstream s;
  s << "requires array(a, s);\n"
    << "for i in [" << L << " : s - " << R << "] do !a[" << signed_term("i", Z) << "]\n";
  return parse_program(s.str());
}

Program instantiate_sum(long long L, long long R, long long Z) {
  std::ostringstream s;
  s << "requires array(a, s) * n |-> _;\n"
    << "for i in [" << L << " : s - " << R << "] do !n := !n + !a[" << signed_term("i", Z) << "]\n";
  return parse_program(s.str());
}

Program instantiate_comp(long long L, long long R, long long Z) {
  std::ostringstream s;
  s << "requires array(a, s) * array(y, k);\n"
    << "for i in [" << L << " : s - " << R << "] do\n"
    << "  let x = !a[" << signed_term("i", Z) << "] in\n"
    << "  for j in [0 : k - 1] do !y[j] := x\n";
  return parse_program(s.str());
}

namespace {

int rank(ParamDomain d) {
  switch (d) {
    case ParamDomain::Obj: return 3;
    case ParamDomain::Loc: return 2;
    case ParamDomain::Nat: return 1;
    case ParamDomain::Int: return 0;
  }
  return 0;
}

struct ParamCollector {
  std::vector<Param> out;
  std::set<std::string> bound;

  void note(const std::string& n, ParamDomain d) {
    if (bound.count(n)) return;
    for (auto& p : out) {
      if (p.name == n) {
        if (rank(d) > rank(p.domain)) p.domain = d;
        return;
      }
    }
    out.push_back({n, d});
  }

  void expr(const ExprPtr& e) {
    if (!e) return;
    if (e->kind == Expr::Kind::Var) {
      note(e->name, ParamDomain::Int);
      return;
    }
    if (e->kind == Expr::Kind::App && e->op == Op::Offset && e->args[0]->kind == Expr::Kind::Var)
      note(e->args[0]->name, ParamDomain::Obj);
    for (const auto& a : e->args) expr(a);
  }

  void dom(const Domain& d) {
    expr(d.lo);
    expr(d.hi);
    for (const auto& e : d.elems) expr(e);
  }

  void assn(const AssertionPtr& a) {
    if (!a) return;
    switch (a->kind) {
      case AKind::Array:
        if (a->e1->kind == Expr::Kind::Var) note(a->e1->name, ParamDomain::Obj);
        if (a->e2->kind == Expr::Kind::Var) note(a->e2->name, ParamDomain::Nat);
        expr(a->e1);
        expr(a->e2);
        return;
      case AKind::PointsTo:
      case AKind::PointsToAny:
        if (a->e1->kind == Expr::Kind::Var) note(a->e1->name, ParamDomain::Loc);
        expr(a->e1);
        expr(a->e2);
        return;
      case AKind::Forall:
      case AKind::Exists: {
        dom(a->dom);
        bool had = bound.count(a->var) > 0;
        bound.insert(a->var);
        assn(a->a1);
        if (!had) bound.erase(a->var);
        return;
      }
      default:
        expr(a->e1);
        expr(a->e2);
        assn(a->a1);
        assn(a->a2);
    }
  }
};

SrcPos find_var_pos(const CmdPtr& c, const std::string& x);

SrcPos find_var_pos(const ExprPtr& e, const std::string& x) {
  if (!e) return {};
  if (e->kind == Expr::Kind::Var && e->name == x) return e->pos;
  for (const auto& a : e->args) {
    auto p = find_var_pos(a, x);
    if (p.line) return p;
  }
  return {};
}

SrcPos find_var_pos(const CmdPtr& c, const std::string& x) {
  if (!c) return {};
  for (const auto& e : {c->e1, c->e2}) {
    auto p = find_var_pos(e, x);
    if (p.line) return p;
  }
  for (const auto& s : {c->c1, c->c2}) {
    auto p = find_var_pos(s, x);
    if (p.line) return p;
  }
  return c->pos;
}

}  // namespace

std::vector<Param> infer_params(const AssertionPtr& pre) {
  ParamCollector pc;
  pc.assn(pre);
  return pc.out;
}

void check_bound(const Program& p) {
  std::set<std::string> declared;
  for (const auto& q : p.params) declared.insert(q.name);
  for (const auto& x : free_vars(p.pre))
    if (!declared.count(x)) throw UnboundVariable(x, p.pre->pos);
  for (const auto& x : free_vars(p.body))
    if (!declared.count(x)) throw UnboundVariable(x, find_var_pos(p.body, x));
}

}  // namespace ctms
