#pragma once

#include "ctms/ast.hpp"
#include "ctms/interp.hpp"
#include "ctms/lang.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace ctms {

struct ModelOptions {
  // Range for Int/Nat quantifiers whose body carries no bounding guard.
  // Unset means such quantifiers raise UnsupportedAssertion.
  std::function<std::optional<std::pair<Int, Int>>(const Env&)> int_clip;
  // values tried for wildcard cells on the left of a wand and in bounded validity
  std::vector<Value> probes = {int_value(0), int_value(1)};
  std::size_t max_brute_chunks = 20;
  std::size_t max_models = 100000;
  long long max_quant_range = 1000000;
};

struct ModelStats {
  std::uint64_t clipped_quantifiers = 0;
  std::uint64_t brute_splits = 0;
  std::uint64_t uniform_fill_fallbacks = 0;
};

bool models(const PhysHeap& h, const AssertionPtr& a, const Env& env, const ModelOptions& opts = {},
            ModelStats* stats = nullptr);

// Reference implementation of the star clause: tries every one of the 2^|h|
// splits, deciding each half with `models`.
bool models_star_bruteforce(const PhysHeap& h, const AssertionPtr& a, const AssertionPtr& b, const Env& env,
                            const ModelOptions& opts = {});

// Heaps such that every model of `a` contains one of them (and each is a model).
// Wildcard values are drawn from opts.probes.  Throws UnsupportedAssertion when
// `a` has no finite footprint.
std::vector<PhysHeap> enumerate_minimal(const AssertionPtr& a, const Env& env, const ModelOptions& opts = {});

// syntactic approximations
bool heap_independent(const AssertionPtr& a);
bool monotone(const AssertionPtr& a);
// truth depends on the heap's domain only, never on cell contents
bool value_insensitive(const AssertionPtr& a);

// Finite range for `x` forced by a guard in `body` (x's lower and upper bound
// read off `G` in G -> X, G -* X or G && X), evaluated under env.
std::optional<std::pair<Int, Int>> implied_range(const AssertionPtr& body, const std::string& x, const Env& env);

AssertionPtr expand_array(const AssertionPtr& a, const Env& env);

using Domains = std::map<std::string, std::vector<Value>>;

struct Counterexample {
  Env env;
  PhysHeap heap;
};

// Checks every binding in the product of `domains` against every heap built
// from the locations the assertion mentions.  Test oracle only.
bool valid_bounded(const AssertionPtr& a, const Domains& domains, const ModelOptions& opts = {},
                   Counterexample* cex = nullptr, ModelStats* stats = nullptr);

std::vector<Value> int_range(long long lo, long long hi);

}  // namespace ctms
