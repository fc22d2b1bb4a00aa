#include "ctms/ast.hpp"
#include "ctms/errors.hpp"

namespace ctms {

ParseError::ParseError(int l, int c, std::vector<std::string> exp, const std::string& msg)
    : std::runtime_error(msg), line(l), col(c), expected(std::move(exp)) {}

UnboundVariable::UnboundVariable(std::string n, SrcPos p)
    : std::runtime_error("unbound variable '" + n + "' at " + std::to_string(p.line) + ":" +
                         std::to_string(p.col)),
      name(std::move(n)),
      pos(p) {}

ExprPtr lit(Value v, SrcPos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->lit = std::move(v);
  e->pos = pos;
  return e;
}

ExprPtr lit_int(long long v) { return lit(Value{Int(v)}); }

ExprPtr var(std::string name, SrcPos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  e->pos = pos;
  return e;
}

ExprPtr app(Op op, std::vector<ExprPtr> args, SrcPos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::App;
  e->op = op;
  e->args = std::move(args);
  e->pos = pos;
  return e;
}

ExprPtr add(ExprPtr a, ExprPtr b) { return app(Op::Add, {std::move(a), std::move(b)}); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return app(Op::Sub, {std::move(a), std::move(b)}); }
ExprPtr eq(ExprPtr a, ExprPtr b) { return app(Op::Eq, {std::move(a), std::move(b)}); }
ExprPtr lt(ExprPtr a, ExprPtr b) { return app(Op::Lt, {std::move(a), std::move(b)}); }
ExprPtr le(ExprPtr a, ExprPtr b) { return app(Op::Le, {std::move(a), std::move(b)}); }
ExprPtr not_(ExprPtr a) { return app(Op::Not, {std::move(a)}); }
ExprPtr and_(ExprPtr a, ExprPtr b) { return app(Op::And, {std::move(a), std::move(b)}); }
ExprPtr or_(ExprPtr a, ExprPtr b) { return app(Op::Or, {std::move(a), std::move(b)}); }
ExprPtr offset(ExprPtr base, ExprPtr idx) { return app(Op::Offset, {std::move(base), std::move(idx)}); }

int arity(Op op) { return op == Op::Not ? 1 : 2; }

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Eq: return "=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Not: return "~";
    case Op::And: return "&&";
    case Op::Or: return "||";
    case Op::Offset: return "[]";
  }
  return "?";
}

namespace {

std::shared_ptr<Assertion> mk(AKind k) {
  auto a = std::make_shared<Assertion>();
  a->kind = k;
  return a;
}

std::shared_ptr<Assertion> mk2(AKind k, AssertionPtr x, AssertionPtr y) {
  auto a = mk(k);
  a->a1 = std::move(x);
  a->a2 = std::move(y);
  return a;
}

}  // namespace

AssertionPtr a_true() { return mk(AKind::True); }
AssertionPtr a_false() { return mk(AKind::False); }
AssertionPtr a_pure(ExprPtr e) {
  auto a = mk(AKind::Pure);
  a->e1 = std::move(e);
  return a;
}
AssertionPtr a_not(AssertionPtr x) { return mk2(AKind::Not, std::move(x), nullptr); }
AssertionPtr a_and(AssertionPtr x, AssertionPtr y) { return mk2(AKind::And, std::move(x), std::move(y)); }
AssertionPtr a_or(AssertionPtr x, AssertionPtr y) { return mk2(AKind::Or, std::move(x), std::move(y)); }
AssertionPtr a_imp(AssertionPtr x, AssertionPtr y) { return mk2(AKind::Imp, std::move(x), std::move(y)); }
AssertionPtr a_star(AssertionPtr x, AssertionPtr y) { return mk2(AKind::Star, std::move(x), std::move(y)); }
AssertionPtr a_wand(AssertionPtr x, AssertionPtr y) { return mk2(AKind::Wand, std::move(x), std::move(y)); }
AssertionPtr a_pts(ExprPtr l, ExprPtr v) {
  auto a = mk(AKind::PointsTo);
  a->e1 = std::move(l);
  a->e2 = std::move(v);
  return a;
}
AssertionPtr a_pts_any(ExprPtr l) {
  auto a = mk(AKind::PointsToAny);
  a->e1 = std::move(l);
  return a;
}
AssertionPtr a_array(ExprPtr obj, ExprPtr size) {
  auto a = mk(AKind::Array);
  a->e1 = std::move(obj);
  a->e2 = std::move(size);
  return a;
}
AssertionPtr a_box(AssertionPtr x) { return mk2(AKind::Box, std::move(x), nullptr); }
AssertionPtr a_forall(std::string x, Domain d, AssertionPtr body) {
  auto a = mk2(AKind::Forall, std::move(body), nullptr);
  a->var = std::move(x);
  a->dom = std::move(d);
  return a;
}
AssertionPtr a_exists(std::string x, Domain d, AssertionPtr body) {
  auto a = mk2(AKind::Exists, std::move(body), nullptr);
  a->var = std::move(x);
  a->dom = std::move(d);
  return a;
}

AssertionPtr with_origin(const AssertionPtr& a, std::string origin) {
  auto c = std::make_shared<Assertion>(*a);
  c->origin = std::move(origin);
  return c;
}

AssertionPtr a_and_all(const std::vector<AssertionPtr>& xs) {
  if (xs.empty()) return a_true();
  AssertionPtr r = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) r = a_and(r, xs[i]);
  return r;
}

AssertionPtr a_star_all(const std::vector<AssertionPtr>& xs) {
  if (xs.empty()) return a_true();
  AssertionPtr r = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) r = a_star(r, xs[i]);
  return r;
}

void flatten(const AssertionPtr& a, AKind k, std::vector<AssertionPtr>& out) {
  if (a->kind == k) {
    flatten(a->a1, k, out);
    flatten(a->a2, k, out);
  } else {
    out.push_back(a);
  }
}

namespace {

std::shared_ptr<Cmd> mkc(CmdKind k) {
  auto c = std::make_shared<Cmd>();
  c->kind = k;
  return c;
}

}  // namespace

CmdPtr c_expr(ExprPtr e) {
  auto c = mkc(CmdKind::Expr);
  c->e1 = std::move(e);
  return c;
}
CmdPtr c_let(std::string x, CmdPtr c1, CmdPtr c2) {
  auto c = mkc(CmdKind::Let);
  c->var = std::move(x);
  c->c1 = std::move(c1);
  c->c2 = std::move(c2);
  return c;
}
CmdPtr c_seq(CmdPtr c1, CmdPtr c2) { return c_let(kSeqVar, std::move(c1), std::move(c2)); }
CmdPtr c_if(ExprPtr g, CmdPtr t, CmdPtr f) {
  auto c = mkc(CmdKind::If);
  c->e1 = std::move(g);
  c->c1 = std::move(t);
  c->c2 = std::move(f);
  return c;
}
CmdPtr c_while(ExprPtr loc, CmdPtr body, AssertionPtr inv) {
  auto c = mkc(CmdKind::While);
  c->e1 = std::move(loc);
  c->c1 = std::move(body);
  c->inv = std::move(inv);
  return c;
}
CmdPtr c_for(std::string x, ExprPtr lo, ExprPtr hi, CmdPtr body, AssertionPtr inv) {
  auto c = mkc(CmdKind::For);
  c->var = std::move(x);
  c->e1 = std::move(lo);
  c->e2 = std::move(hi);
  c->c1 = std::move(body);
  c->inv = std::move(inv);
  return c;
}
CmdPtr c_read(ExprPtr loc) {
  auto c = mkc(CmdKind::Read);
  c->e1 = std::move(loc);
  return c;
}
CmdPtr c_write(ExprPtr loc, ExprPtr val) {
  auto c = mkc(CmdKind::Write);
  c->e1 = std::move(loc);
  c->e2 = std::move(val);
  return c;
}

const char* to_string(ParamDomain d) {
  switch (d) {
    case ParamDomain::Nat: return "Nat";
    case ParamDomain::Int: return "Int";
    case ParamDomain::Obj: return "Obj";
    case ParamDomain::Loc: return "Loc";
  }
  return "?";
}

const Param* Program::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Lit: return a->lit == b->lit;
    case Expr::Kind::Var: return a->name == b->name;
    case Expr::Kind::App:
      if (a->op != b->op || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
  }
  return false;
}

static bool equal_dom(const Domain& a, const Domain& b) {
  if (a.kind != b.kind) return false;
  if (!equal(a.lo, b.lo) || !equal(a.hi, b.hi)) return false;
  if (a.elems.size() != b.elems.size()) return false;
  for (size_t i = 0; i < a.elems.size(); ++i)
    if (!equal(a.elems[i], b.elems[i])) return false;
  return true;
}

bool equal(const AssertionPtr& a, const AssertionPtr& b) {
  if (!a || !b) return !a && !b;
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  if (a->var != b->var) return false;
  if ((a->kind == AKind::Forall || a->kind == AKind::Exists) && !equal_dom(a->dom, b->dom)) return false;
  return equal(a->e1, b->e1) && equal(a->e2, b->e2) && equal(a->a1, b->a1) && equal(a->a2, b->a2);
}

bool equal(const CmdPtr& a, const CmdPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->var != b->var) return false;
  return equal(a->e1, b->e1) && equal(a->e2, b->e2) && equal(a->c1, b->c1) && equal(a->c2, b->c2) &&
         equal(a->inv, b->inv);
}

bool equal(const Program& a, const Program& b) {
  if (a.params_declared != b.params_declared || a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name || a.params[i].domain != b.params[i].domain) return false;
  return equal(a.pre, b.pre) && equal(a.body, b.body);
}

static void fv_expr(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var) out.insert(e->name);
  for (const auto& x : e->args) fv_expr(x, out);
}

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> out;
  fv_expr(e, out);
  return out;
}

static void fv_assn(const AssertionPtr& a, std::set<std::string>& out);

static void fv_dom(const Domain& d, std::set<std::string>& out) {
  fv_expr(d.lo, out);
  fv_expr(d.hi, out);
  for (const auto& e : d.elems) fv_expr(e, out);
}

static void fv_assn(const AssertionPtr& a, std::set<std::string>& out) {
  if (!a) return;
  switch (a->kind) {
    case AKind::Forall:
    case AKind::Exists: {
      fv_dom(a->dom, out);
      std::set<std::string> inner;
      fv_assn(a->a1, inner);
      inner.erase(a->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      fv_expr(a->e1, out);
      fv_expr(a->e2, out);
      fv_assn(a->a1, out);
      fv_assn(a->a2, out);
  }
}

std::set<std::string> free_vars(const AssertionPtr& a) {
  std::set<std::string> out;
  fv_assn(a, out);
  return out;
}

static void fv_cmd(const CmdPtr& c, std::set<std::string>& out) {
  if (!c) return;
  switch (c->kind) {
    case CmdKind::Let: {
      fv_cmd(c->c1, out);
      std::set<std::string> inner;
      fv_cmd(c->c2, inner);
      inner.erase(c->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case CmdKind::For: {
      fv_expr(c->e1, out);
      fv_expr(c->e2, out);
      std::set<std::string> inner;
      fv_cmd(c->c1, inner);
      fv_assn(c->inv, inner);
      inner.erase(c->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      fv_expr(c->e1, out);
      fv_expr(c->e2, out);
      fv_cmd(c->c1, out);
      fv_cmd(c->c2, out);
      fv_assn(c->inv, out);
  }
}

std::set<std::string> free_vars(const CmdPtr& c) {
  std::set<std::string> out;
  fv_cmd(c, out);
  return out;
}

bool mentions(const ExprPtr& e, const std::string& x) {
  if (!e) return false;
  if (e->kind == Expr::Kind::Var) return e->name == x;
  for (const auto& a : e->args)
    if (mentions(a, x)) return true;
  return false;
}

bool mentions(const AssertionPtr& a, const std::string& x) { return free_vars(a).count(x) > 0; }

std::size_t node_count(const AssertionPtr& a) {
  if (!a) return 0;
  return 1 + node_count(a->a1) + node_count(a->a2);
}

}  // namespace ctms
