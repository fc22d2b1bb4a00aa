#pragma once

#include "ctms/value.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace ctms {

struct SrcPos {
  int line = 0;
  int col = 0;
};

// ---- expressions ----

enum class Op { Add, Sub, Eq, Lt, Le, Not, And, Or, Offset };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Lit, Var, App };
  Kind kind = Kind::Lit;
  Value lit;
  std::string name;
  Op op = Op::Add;
  std::vector<ExprPtr> args;
  SrcPos pos;
};

ExprPtr lit(Value v, SrcPos pos = {});
ExprPtr lit_int(long long v);
ExprPtr var(std::string name, SrcPos pos = {});
ExprPtr app(Op op, std::vector<ExprPtr> args, SrcPos pos = {});
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr eq(ExprPtr a, ExprPtr b);
ExprPtr lt(ExprPtr a, ExprPtr b);
ExprPtr le(ExprPtr a, ExprPtr b);
ExprPtr not_(ExprPtr a);
ExprPtr and_(ExprPtr a, ExprPtr b);
ExprPtr or_(ExprPtr a, ExprPtr b);
ExprPtr offset(ExprPtr base, ExprPtr idx);

int arity(Op op);
const char* op_symbol(Op op);

// ---- assertions ----

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

struct Domain {
  // Val ranges over heap values; Obj and Loc are only used in VC prefixes
  enum class Kind { Nat, Int, Val, Obj, Loc, Interval, Set };
  Kind kind = Kind::Int;
  ExprPtr lo, hi;
  std::vector<ExprPtr> elems;

  static Domain nat() { return {Kind::Nat, {}, {}, {}}; }
  static Domain integers() { return {Kind::Int, {}, {}, {}}; }
  static Domain val() { return {Kind::Val, {}, {}, {}}; }
  static Domain obj() { return {Kind::Obj, {}, {}, {}}; }
  static Domain locs() { return {Kind::Loc, {}, {}, {}}; }
  static Domain interval(ExprPtr lo, ExprPtr hi) { return {Kind::Interval, std::move(lo), std::move(hi), {}}; }
  static Domain set(std::vector<ExprPtr> elems) { return {Kind::Set, {}, {}, std::move(elems)}; }
};

enum class AKind {
  True, False, Pure, Not, And, Or, Imp, Star, Wand,
  PointsTo, PointsToAny, Array, Box, Forall, Exists
};

struct Assertion {
  AKind kind = AKind::True;
  ExprPtr e1, e2;
  AssertionPtr a1, a2;
  std::string var;
  Domain dom;
  // free-form tag carried through rewriting (e.g. which layout chunk an atom
  // came from); ignored by equality and printing
  std::string origin;
  SrcPos pos;
};

AssertionPtr a_true();
AssertionPtr a_false();
AssertionPtr a_pure(ExprPtr e);
AssertionPtr a_not(AssertionPtr a);
AssertionPtr a_and(AssertionPtr a, AssertionPtr b);
AssertionPtr a_or(AssertionPtr a, AssertionPtr b);
AssertionPtr a_imp(AssertionPtr a, AssertionPtr b);
AssertionPtr a_star(AssertionPtr a, AssertionPtr b);
AssertionPtr a_wand(AssertionPtr a, AssertionPtr b);
AssertionPtr a_pts(ExprPtr l, ExprPtr v);
AssertionPtr a_pts_any(ExprPtr l);
AssertionPtr a_array(ExprPtr obj, ExprPtr size);
AssertionPtr a_box(AssertionPtr a);
AssertionPtr a_forall(std::string x, Domain d, AssertionPtr body);
AssertionPtr a_exists(std::string x, Domain d, AssertionPtr body);
AssertionPtr with_origin(const AssertionPtr& a, std::string origin);

// left-nested n-ary helpers; empty input gives `true`
AssertionPtr a_and_all(const std::vector<AssertionPtr>& xs);
AssertionPtr a_star_all(const std::vector<AssertionPtr>& xs);
void flatten(const AssertionPtr& a, AKind k, std::vector<AssertionPtr>& out);

// ---- commands ----

enum class CmdKind { Expr, Let, If, While, For, Read, Write };

struct Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

// Let with var "_" is sequencing; the wildcard can never occur in an expression.
inline constexpr const char* kSeqVar = "_";

struct Cmd {
  CmdKind kind = CmdKind::Expr;
  ExprPtr e1, e2;
  std::string var;
  CmdPtr c1, c2;
  AssertionPtr inv;
  SrcPos pos;
};

CmdPtr c_expr(ExprPtr e);
CmdPtr c_let(std::string x, CmdPtr c1, CmdPtr c2);
CmdPtr c_seq(CmdPtr c1, CmdPtr c2);
CmdPtr c_if(ExprPtr g, CmdPtr t, CmdPtr f);
CmdPtr c_while(ExprPtr loc, CmdPtr body, AssertionPtr inv = nullptr);
CmdPtr c_for(std::string x, ExprPtr lo, ExprPtr hi, CmdPtr body, AssertionPtr inv = nullptr);
CmdPtr c_read(ExprPtr loc);
CmdPtr c_write(ExprPtr loc, ExprPtr val);

inline bool is_seq(const Cmd& c) { return c.kind == CmdKind::Let && c.var == kSeqVar; }

// ---- programs ----

enum class ParamDomain { Nat, Int, Obj, Loc };
const char* to_string(ParamDomain d);

struct Param {
  std::string name;
  ParamDomain domain = ParamDomain::Int;
};

struct Program {
  AssertionPtr pre;  // never null; `true` when absent
  CmdPtr body;
  std::vector<Param> params;
  bool params_declared = false;

  const Param* param(const std::string& name) const;
};

// structural equality, ignoring positions and origin tags
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const AssertionPtr& a, const AssertionPtr& b);
bool equal(const CmdPtr& a, const CmdPtr& b);
bool equal(const Program& a, const Program& b);

std::set<std::string> free_vars(const ExprPtr& e);
std::set<std::string> free_vars(const CmdPtr& c);
std::set<std::string> free_vars(const AssertionPtr& a);
bool mentions(const ExprPtr& e, const std::string& x);
bool mentions(const AssertionPtr& a, const std::string& x);

std::size_t node_count(const AssertionPtr& a);

}  // namespace ctms
