#pragma once

#include "ctms/ast.hpp"
#include "ctms/errors.hpp"

#include <map>
#include <optional>
#include <string>

namespace ctms {

using Env = std::map<std::string, Value>;

std::optional<Value> eval_closed_expr(const ExprPtr& e);
std::optional<Value> eval_expr(const ExprPtr& e, const Env& env);
std::optional<Value> apply_op(Op op, const std::vector<Value>& args);

ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& by);
// `by` is expected to be closed; no renaming happens
CmdPtr substitute(const CmdPtr& c, const std::string& x, const ExprPtr& by);
// capture-avoiding: bound variables clashing with fv(by) get renamed
AssertionPtr substitute(const AssertionPtr& a, const std::string& x, const ExprPtr& by);

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// folds closed arithmetic subterms (x + 0 stays as written)
ExprPtr fold_constants(const ExprPtr& e);

// trav: requires array(a, s); for i in [L : s - R] do !a[i + Z]
Program instantiate_trav(long long L, long long R, long long Z);
// sum: requires array(a, s) * n |-> _; for i in [L : s - R] do !n := !n + !a[i + Z]
Program instantiate_sum(long long L, long long R, long long Z);
// comp: the traversal's loop body also runs a fixed walk over an unrelated
// array y of size k:  let x = !a[i + Z] in for j in [0 : k - 1] do !y[j] := x
Program instantiate_comp(long long L, long long R, long long Z);

// parameters: declared ones, else inferred from the precondition
std::vector<Param> infer_params(const AssertionPtr& pre);
// throws UnboundVariable for body variables that are not parameters
void check_bound(const Program& p);

}  // namespace ctms
