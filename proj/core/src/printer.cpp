#include "ctms/syntax.hpp"

#include <sstream>

namespace ctms {

namespace {

int expr_prec(const ExprPtr& e) {
  if (e->kind == Expr::Kind::Lit) {
    if (auto* i = as_int(e->lit); i && *i < 0) return 5;
    return 7;
  }
  if (e->kind == Expr::Kind::Var) return 7;
  switch (e->op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Eq:
    case Op::Lt:
    case Op::Le: return 3;
    case Op::Add:
    case Op::Sub: return 4;
    case Op::Not: return 5;
    case Op::Offset: return 6;
  }
  return 7;
}

std::string pe(const ExprPtr& e, int min);

std::string pe_raw(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Lit: return to_string(e->lit);
    case Expr::Kind::Var: return e->name;
    case Expr::Kind::App: break;
  }
  const auto& a = e->args;
  switch (e->op) {
    case Op::Or: return pe(a[0], 1) + " || " + pe(a[1], 2);
    case Op::And: return pe(a[0], 2) + " && " + pe(a[1], 3);
    case Op::Eq:
    case Op::Lt:
    case Op::Le: return pe(a[0], 4) + " " + op_symbol(e->op) + " " + pe(a[1], 4);
    case Op::Add:
    case Op::Sub: return pe(a[0], 4) + " " + op_symbol(e->op) + " " + pe(a[1], 5);
    case Op::Not: return "~" + pe(a[0], 5);
    case Op::Offset: return pe(a[0], 6) + "[" + pe(a[1], 1) + "]";
  }
  return "?";
}

std::string pe(const ExprPtr& e, int min) {
  auto s = pe_raw(e);
  if (expr_prec(e) < min) return "(" + s + ")";
  return s;
}

int assn_prec(const AssertionPtr& a) {
  switch (a->kind) {
    case AKind::Forall:
    case AKind::Exists: return 0;
    case AKind::Imp: return 1;
    case AKind::Wand: return 2;
    case AKind::Or: return 3;
    case AKind::And: return 4;
    case AKind::Star: return 5;
    case AKind::Not: return 6;
    default: return 7;
  }
}

std::string pa(const AssertionPtr& a, int min, bool right_open);

std::string pa_raw(const AssertionPtr& a, bool ro) {
  switch (a->kind) {
    case AKind::True: return "true";
    case AKind::False: return "false";
    case AKind::Pure: return pe(a->e1, 3);
    case AKind::Not: return "!" + pa(a->a1, 6, false);
    case AKind::And: return pa(a->a1, 4, false) + " && " + pa(a->a2, 5, false);
    case AKind::Or: return pa(a->a1, 3, false) + " || " + pa(a->a2, 4, false);
    case AKind::Imp: return pa(a->a1, 2, false) + " -> " + pa(a->a2, 1, ro);
    case AKind::Star: return pa(a->a1, 5, false) + " * " + pa(a->a2, 6, false);
    case AKind::Wand: return pa(a->a1, 3, false) + " -* " + pa(a->a2, 2, ro);
    case AKind::PointsTo: return pe(a->e1, 4) + " |-> " + pe(a->e2, 4);
    case AKind::PointsToAny: return pe(a->e1, 4) + " |-> _";
    case AKind::Array: return "array(" + pe(a->e1, 1) + ", " + pe(a->e2, 1) + ")";
    case AKind::Box: return "box(" + pa(a->a1, 0, true) + ")";
    case AKind::Forall:
    case AKind::Exists:
      return std::string(a->kind == AKind::Forall ? "forall " : "exists ") + a->var + " in " + to_string(a->dom) +
             ". " + pa(a->a1, 0, true);
  }
  return "?";
}

std::string pa(const AssertionPtr& a, int min, bool right_open) {
  int p = assn_prec(a);
  bool quant = p == 0;
  if (p < min && !(quant && right_open)) return "(" + pa_raw(a, true) + ")";
  return pa_raw(a, right_open);
}

enum class Ctx { Top, SeqLeft, Single };

bool is_unit(const CmdPtr& c) {
  return c->kind == CmdKind::Expr && c->e1->kind == Expr::Kind::Lit && std::holds_alternative<Unit>(c->e1->lit);
}

std::string pc(const CmdPtr& c, Ctx ctx, const std::string& ind);

std::string inv_part(const CmdPtr& c) {
  if (!c->inv) return "";
  return " inv " + pa(c->inv, 0, true);
}

std::string pc(const CmdPtr& c, Ctx ctx, const std::string& ind) {
  switch (c->kind) {
    case CmdKind::Expr: return pe(c->e1, 1);
    case CmdKind::Read: return "!" + pe(c->e1, 6);
    case CmdKind::Write: return "!" + pe(c->e1, 6) + " := " + pe(c->e2, 1);
    case CmdKind::If: {
      std::string s = "if " + pe(c->e1, 1) + " then " + pc(c->c1, Ctx::Single, ind);
      if (!is_unit(c->c2) || ctx == Ctx::Single) s += " else " + pc(c->c2, Ctx::Single, ind);
      return s;
    }
    case CmdKind::While:
      return "while !" + pe(c->e1, 6) + inv_part(c) + " do " + pc(c->c1, Ctx::Single, ind + "  ");
    case CmdKind::For:
      return "for " + c->var + " in [" + pe(c->e1, 1) + " : " + pe(c->e2, 1) + "]" + inv_part(c) + " do " +
             pc(c->c1, Ctx::Single, ind + "  ");
    case CmdKind::Let: {
      bool paren = ctx != Ctx::Top;
      std::string in = paren ? ind + " " : ind;
      std::string s;
      if (is_seq(*c))
        s = pc(c->c1, Ctx::SeqLeft, in) + ";\n" + in + pc(c->c2, Ctx::Top, in);
      else
        s = "let " + c->var + " = " + pc(c->c1, Ctx::Top, in + "  ") + " in\n" + in + pc(c->c2, Ctx::Top, in);
      return paren ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const ExprPtr& e) { return pe(e, 0); }
std::string to_string(const AssertionPtr& a) { return pa(a, 0, true); }
std::string to_string(const CmdPtr& c) { return pc(c, Ctx::Top, ""); }

std::string to_string(const Domain& d) {
  switch (d.kind) {
    case Domain::Kind::Nat: return "Nat";
    case Domain::Kind::Int: return "Int";
    case Domain::Kind::Val: return "Val";
    case Domain::Kind::Obj: return "Obj";
    case Domain::Kind::Loc: return "Loc";
    case Domain::Kind::Interval: return "[" + pe(d.lo, 1) + ".." + pe(d.hi, 1) + "]";
    case Domain::Kind::Set: {
      std::string s = "{";
      for (size_t i = 0; i < d.elems.size(); ++i) s += (i ? ", " : "") + pe(d.elems[i], 1);
      return s + "}";
    }
  }
  return "?";
}

std::string pretty_print(const Program& p) {
  std::ostringstream o;
  if (p.params_declared) {
    o << "params ";
    for (size_t i = 0; i < p.params.size(); ++i)
      o << (i ? ", " : "") << p.params[i].name << " : " << to_string(p.params[i].domain);
    o << ";\n";
  }
  o << "requires " << to_string(p.pre) << ";\n";
  o << to_string(p.body) << "\n";
  return o.str();
}

std::string print_layout(const AssertionPtr& a) {
  if (a->kind != AKind::Imp) return to_string(a);
  std::vector<AssertionPtr> parts;
  flatten(a->a2, AKind::Star, parts);
  std::string s = pa(a->a1, 2, false) + " ->\n";
  for (size_t i = 0; i < parts.size(); ++i) s += (i ? "  * " : "  ") + pa(parts[i], 6, false) + "\n";
  return s;
}

}  // namespace ctms
