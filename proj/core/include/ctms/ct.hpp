#pragma once

#include "ctms/ast.hpp"
#include "ctms/vc.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ctms {

// closed interval over the naturals; no upper end means unbounded
struct Interval {
  Int lo;
  std::optional<Int> hi;
};

// finite union of disjoint intervals, kept sorted
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet naturals();
  static IntervalSet at_least(Int lo);
  static IntervalSet range(Int lo, std::optional<Int> hi);

  bool empty() const { return parts_.empty(); }
  bool contains(const Int& x) const;
  std::optional<Int> min() const;
  bool subset_of(const IntervalSet& o) const;
  const std::vector<Interval>& parts() const { return parts_; }

  IntervalSet intersect(const IntervalSet& o) const;
  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet complement() const;  // within the naturals

  bool operator==(const IntervalSet& o) const;
  std::string to_string(const std::string& var) const;

 private:
  void add(Interval iv);
  std::vector<Interval> parts_;
};

struct Constraint {
  IntervalSet region;
  std::string text;
  std::string provenance;

  bool satisfiable() const { return !region.empty(); }
  std::optional<Int> least_model() const { return region.min(); }
};

struct ConstraintSet {
  std::string var;
  std::vector<Constraint> constraints;

  // same regions regardless of order and wording
  bool same_regions(const ConstraintSet& o) const;
};

enum class SupportFlag { Exact, Fallback };

struct CTResult {
  ConstraintSet set;
  std::vector<Int> witnesses;           // sorted, deduplicated
  std::vector<std::string> unreached;   // constraints with no model under the bound
  std::vector<std::string> provenance;
  SupportFlag flag = SupportFlag::Exact;
  std::string fallback_reason;
};

struct ExtractOptions {
  Int bound = 1000000;
  // moves every guarded-access threshold; only for self-tests of the comparison
  long long threshold_bias = 0;
};

// Constraint set of a pure formula for the natural-valued variable x.
CTResult extract_ct(const AssertionPtr& f, const std::string& x, const ExtractOptions& opts = {});
CTResult extract_ct_size(const PureFormula& f, const std::string& x, const ExtractOptions& opts = {});

struct MinimalWitnesses {
  std::vector<Int> witnesses;
  std::vector<std::string> unreached;
};
MinimalWitnesses minimal_witnesses(const ConstraintSet& k, const Int& bound);

bool models_constraints(const std::set<Int>& q, const ConstraintSet& k);

struct SliceResult {
  AssertionPtr result;
  bool separable = false;
  std::vector<AssertionPtr> dropped;
};
// drops top-level ⋆/∧ factors that do not mention x
SliceResult slice_vc(const AssertionPtr& a, const std::string& x);

struct Subdomain {
  std::set<Int> points;
  std::optional<IntervalSet> residue;  // collapsed class not listed point by point
  bool contains(const Int& x) const { return points.count(x) || (residue && residue->contains(x)); }
};
// one least representative per validity class of the oracle over d
Subdomain subdomain_reduce(const std::set<Int>& d, const std::function<bool(const Int&)>& valid);

ConstraintSet combine_seq(const ConstraintSet& k1, const ConstraintSet& k2);
ConstraintSet combine_if(const IntervalSet& guard, const std::string& guard_text, const ConstraintSet& k1,
                         const ConstraintSet& k2);

// region of the naturals where a pure formula over x alone holds
std::optional<IntervalSet> region_of(const AssertionPtr& g, const std::string& x);

// ∃x∈ℕ. f holds iff it holds at some value in a nonempty checked subset;
// returns the first such value among `candidates`
std::optional<Int> exists_witness(const AssertionPtr& f, const std::string& x, const std::vector<Int>& candidates);

}  // namespace ctms
