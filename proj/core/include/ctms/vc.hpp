#pragma once

#include "ctms/ast.hpp"
#include "ctms/lang.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ctms {

// λr. body
struct PostLambda {
  std::string var;
  AssertionPtr body;
};

AssertionPtr wlp(const CmdPtr& c, const PostLambda& post, const AssertionPtr& default_inv = nullptr);

struct QuantBinder {
  std::string var;
  Domain dom;
  bool forall = true;
};

struct VerificationCondition {
  std::vector<QuantBinder> prefix;
  AssertionPtr matrix;

  AssertionPtr closed() const;  // prefix folded back into quantifiers
};

Domain param_domain(ParamDomain d);

// forall params. pre -> wlp(body, λ_. pre); loops without `inv` reuse pre
VerificationCondition vc_for_spec(const Program& p);

// prefix on the first line, then the matrix with one ⋆-conjunct per line
std::string print_vc(const VerificationCondition& vc);

struct RewriteStep {
  std::string rule;
  AssertionPtr result;
};

struct SimplifyResult {
  AssertionPtr result;
  std::vector<RewriteStep> steps;
};

// Ordered rewrite rules; the input is treated as a VC matrix (its root is a
// validity position).  Worst case returns the input unchanged.
// `nat_vars` are known to be natural numbers (array sizes over them need no
// non-negativity guard when a layout antecedent is dropped).
SimplifyResult simplify_traced(const AssertionPtr& a, const std::set<std::string>& nat_vars = {});
AssertionPtr simplify(const AssertionPtr& a, const std::set<std::string>& nat_vars = {});

// A single rule applied once at the first position where it fires.
std::optional<AssertionPtr> apply_rule(const std::string& rule, const AssertionPtr& a,
                                       const std::set<std::string>& nat_vars = {});
const std::vector<std::string>& rule_names();

bool is_pure_assertion(const AssertionPtr& a);

struct PureFormula {
  std::vector<QuantBinder> prefix;
  AssertionPtr formula;
  std::vector<RewriteStep> steps;
};

std::optional<PureFormula> to_pure(const VerificationCondition& vc);

// Truth of the heap-free formula under env.  Unguarded Int quantifiers range
// over `clip` when given; `clipped` counts how often that happened.
bool eval_pure(const AssertionPtr& f, const Env& env, std::optional<std::pair<Int, Int>> clip = std::nullopt,
               std::uint64_t* clipped = nullptr);

// Above-threshold guard splitting: for s >= L+R the formula
// forall i. L <= i && i <= s - R -> 0 <= i + Z && i + Z < s becomes
// forall i. (L <= i -> 0 <= i + Z) && (i <= -R -> i + Z < 0).
// nullopt when the formula is not a conjunction of such guarded accesses.
std::optional<AssertionPtr> split_guards(const AssertionPtr& f, const std::string& size_var);

}  // namespace ctms
