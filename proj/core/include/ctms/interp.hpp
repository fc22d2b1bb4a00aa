#pragma once

#include "ctms/ast.hpp"
#include "ctms/lang.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace ctms {

using PhysHeap = std::map<HeapLoc, Value>;

enum class AccessKind { Read, Write };
const char* to_string(AccessKind k);

struct StepOutcome {
  enum class Kind { Next, Done, MemError, Stuck };
  Kind kind = Kind::Stuck;
  PhysHeap heap;
  CmdPtr next;           // Next
  Value value;           // Done
  HeapLoc loc;           // MemError
  AccessKind access = AccessKind::Read;
  std::string reason;    // Stuck
};

enum class UnknownReason { None, FuelExhausted, Stuck, Unsupported };
const char* to_string(UnknownReason r);

struct Verdict {
  enum class Kind { Safe, Unsafe, Unknown };
  Kind kind = Kind::Safe;
  std::map<std::string, Value> binding;
  std::uint64_t step = 0;  // 1-based index of the reduction that failed
  HeapLoc loc;
  AccessKind access = AccessKind::Read;
  UnknownReason reason = UnknownReason::None;
  std::string detail;

  bool same_witness(const Verdict& o) const {
    return kind == o.kind && step == o.step && loc == o.loc && access == o.access && binding == o.binding;
  }
};
const char* to_string(Verdict::Kind k);
std::string describe(const Verdict& v);

struct RunOptions {
  std::ostream* trace = nullptr;
  // cells whose value came from a wildcard and has not been written since
  std::set<HeapLoc> wildcard_cells;
};

struct RunResult {
  Verdict verdict;
  PhysHeap heap;
  std::optional<Value> value;
  std::uint64_t steps = 0;
};

inline constexpr std::uint64_t kDefaultFuel = 1000000;

StepOutcome step(const PhysHeap& h, const CmdPtr& c);
RunResult run(PhysHeap h, CmdPtr c, std::uint64_t fuel, RunOptions opts = {});

PhysHeap heap_from_array_pred(const ObjId& a, std::uint64_t s, const Value& fill);

// Canonical heap for a layout precondition; nullopt when the precondition is
// outside the supported shapes.  `vacuous` is set when the binding makes the
// precondition unsatisfiable.
struct Materialized {
  PhysHeap heap;
  std::set<HeapLoc> wildcard_cells;
  bool vacuous = false;
};
std::optional<Materialized> materialize(const AssertionPtr& pre, const Env& env, const Value& fill);

// Objects map to an object of the same name, locations to (name, 0).
Env canonical_env(const Program& p, const std::map<std::string, Value>& binding);

Verdict memsafe_concrete(const Program& p, const std::map<std::string, Value>& binding,
                         std::uint64_t fuel = kDefaultFuel, const Value& fill = int_value(0),
                         std::ostream* trace = nullptr);

}  // namespace ctms
