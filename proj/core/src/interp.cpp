#include "ctms/interp.hpp"
#include "ctms/syntax.hpp"

#include <ostream>

namespace ctms {

const char* to_string(AccessKind k) { return k == AccessKind::Read ? "read" : "write"; }

const char* to_string(UnknownReason r) {
  switch (r) {
    case UnknownReason::None: return "none";
    case UnknownReason::FuelExhausted: return "fuel exhausted";
    case UnknownReason::Stuck: return "stuck-ill-typed";
    case UnknownReason::Unsupported: return "unsupported";
  }
  return "?";
}

const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Safe: return "Safe";
    case Verdict::Kind::Unsafe: return "Unsafe";
    case Verdict::Kind::Unknown: return "Unknown";
  }
  return "?";
}

std::string describe(const Verdict& v) {
  std::string s = to_string(v.kind);
  if (v.kind == Verdict::Kind::Unsafe) {
    s += " at " + to_string(v.loc) + " (" + to_string(v.access) + ", step " + std::to_string(v.step) + ")";
  } else if (v.kind == Verdict::Kind::Unknown) {
    s += std::string(" (") + to_string(v.reason);
    if (!v.detail.empty()) s += ": " + v.detail;
    s += ")";
  }
  if (!v.binding.empty()) {
    s += " with";
    for (const auto& [k, val] : v.binding) s += " " + k + "=" + to_string(val);
  }
  return s;
}

namespace {

struct Red {
  enum class Kind { Next, MemError, Stuck, WildGuard };
  Kind kind = Kind::Next;
  CmdPtr next;
  HeapLoc loc;
  AccessKind access = AccessKind::Read;
  std::string reason;
};

std::optional<Value> value_of(const CmdPtr& c) {
  if (c->kind != CmdKind::Expr) return std::nullopt;
  return eval_closed_expr(c->e1);
}

Red stuck(std::string why) {
  Red r;
  r.kind = Red::Kind::Stuck;
  r.reason = std::move(why);
  return r;
}

Red next(CmdPtr c) {
  Red r;
  r.next = std::move(c);
  return r;
}

Red reduce(PhysHeap& h, const CmdPtr& c, std::set<HeapLoc>* wild) {
  switch (c->kind) {
    case CmdKind::Expr:
      return stuck("expression '" + to_string(c->e1) + "' has no value");
    case CmdKind::Let: {
      if (c->c1->kind == CmdKind::Expr) {
        auto v = eval_closed_expr(c->c1->e1);
        if (!v) return stuck("expression '" + to_string(c->c1->e1) + "' has no value");
        if (c->var == kSeqVar) return next(c->c2);
        return next(substitute(c->c2, c->var, lit(*v)));
      }
      Red r = reduce(h, c->c1, wild);
      if (r.kind != Red::Kind::Next) return r;
      return next(c_let(c->var, r.next, c->c2));
    }
    case CmdKind::If: {
      auto g = eval_closed_expr(c->e1);
      if (!g || !as_bool(*g)) return stuck("if guard is not a boolean");
      return next(*as_bool(*g) ? c->c1 : c->c2);
    }
    case CmdKind::While: {
      auto l = eval_closed_expr(c->e1);
      if (!l || !as_loc(*l)) return stuck("while guard is not a heap location");
      if (wild && wild->count(*as_loc(*l))) {
        Red r;
        r.kind = Red::Kind::WildGuard;
        r.loc = *as_loc(*l);
        return r;
      }
      auto cell = lit(*l);
      auto body = c_if(var("_w"), c_seq(c->c1, c), c_expr(lit(unit_value())));
      return next(c_let("_w", c_read(cell), body));
    }
    case CmdKind::For: {
      auto lo = eval_closed_expr(c->e1);
      auto hi = eval_closed_expr(c->e2);
      if (!lo || !hi || !as_int(*lo) || !as_int(*hi)) return stuck("for bounds are not integers");
      const Int& n = *as_int(*lo);
      const Int& m = *as_int(*hi);
      if (n > m) return next(c_expr(lit(unit_value())));
      auto iter = substitute(c->c1, c->var, lit(Value{n}));
      auto rest = c_for(c->var, lit(Value{Int(n + 1)}), c->e2, c->c1, c->inv);
      return next(c_seq(iter, rest));
    }
    case CmdKind::Read: {
      auto l = eval_closed_expr(c->e1);
      if (!l || !as_loc(*l)) return stuck("read of a non-location");
      auto it = h.find(*as_loc(*l));
      if (it == h.end()) {
        Red r;
        r.kind = Red::Kind::MemError;
        r.loc = *as_loc(*l);
        r.access = AccessKind::Read;
        return r;
      }
      return next(c_expr(lit(it->second)));
    }
    case CmdKind::Write: {
      auto l = eval_closed_expr(c->e1);
      auto v = eval_closed_expr(c->e2);
      if (!l || !as_loc(*l)) return stuck("write to a non-location");
      if (!v) return stuck("written expression has no value");
      auto it = h.find(*as_loc(*l));
      if (it == h.end()) {
        Red r;
        r.kind = Red::Kind::MemError;
        r.loc = *as_loc(*l);
        r.access = AccessKind::Write;
        return r;
      }
      it->second = *v;
      if (wild) wild->erase(*as_loc(*l));
      return next(c_expr(lit(unit_value())));
    }
  }
  return stuck("unknown command");
}

}  // namespace

StepOutcome step(const PhysHeap& h0, const CmdPtr& c) {
  StepOutcome out;
  out.heap = h0;
  if (auto v = value_of(c)) {
    out.kind = StepOutcome::Kind::Done;
    out.value = *v;
    return out;
  }
  Red r = reduce(out.heap, c, nullptr);
  switch (r.kind) {
    case Red::Kind::Next:
      if (auto v = value_of(r.next)) {
        out.kind = StepOutcome::Kind::Done;
        out.value = *v;
      } else {
        out.kind = StepOutcome::Kind::Next;
        out.next = r.next;
      }
      break;
    case Red::Kind::MemError:
      out.kind = StepOutcome::Kind::MemError;
      out.loc = r.loc;
      out.access = r.access;
      break;
    case Red::Kind::Stuck:
    case Red::Kind::WildGuard:
      out.kind = StepOutcome::Kind::Stuck;
      out.reason = r.reason;
      break;
  }
  return out;
}

RunResult run(PhysHeap h, CmdPtr c, std::uint64_t fuel, RunOptions opts) {
  RunResult res;
  std::uint64_t steps = 0;
  for (;;) {
    if (auto v = value_of(c)) {
      res.verdict.kind = Verdict::Kind::Safe;
      res.value = *v;
      break;
    }
    if (steps >= fuel) {
      res.verdict.kind = Verdict::Kind::Unknown;
      res.verdict.reason = UnknownReason::FuelExhausted;
      res.verdict.detail = "after " + std::to_string(steps) + " steps";
      break;
    }
    if (opts.trace) *opts.trace << "[" << steps << "] " << to_string(c) << "\n";
    Red r = reduce(h, c, &opts.wildcard_cells);
    ++steps;
    if (r.kind == Red::Kind::Next) {
      c = r.next;
      continue;
    }
    if (r.kind == Red::Kind::MemError) {
      res.verdict.kind = Verdict::Kind::Unsafe;
      res.verdict.step = steps;
      res.verdict.loc = r.loc;
      res.verdict.access = r.access;
      if (opts.trace) *opts.trace << "memory error: " << to_string(r.access) << " of " << to_string(r.loc) << "\n";
      break;
    }
    res.verdict.kind = Verdict::Kind::Unknown;
    if (r.kind == Red::Kind::WildGuard) {
      res.verdict.reason = UnknownReason::Unsupported;
      res.verdict.detail = "while guard reads wildcard cell " + to_string(r.loc);
    } else {
      res.verdict.reason = UnknownReason::Stuck;
      res.verdict.detail = r.reason;
    }
    res.verdict.step = steps;
    break;
  }
  res.steps = steps;
  res.heap = std::move(h);
  return res;
}

PhysHeap heap_from_array_pred(const ObjId& a, std::uint64_t s, const Value& fill) {
  PhysHeap h;
  for (std::uint64_t i = 0; i < s; ++i) h.emplace(HeapLoc{a, Int(i)}, fill);
  return h;
}

namespace {

constexpr long long kMaxMaterialize = 10000000;

bool add_cell(Materialized& m, const HeapLoc& l, const Value& v, bool wildcard) {
  if (!m.heap.emplace(l, v).second) return false;
  if (wildcard) m.wildcard_cells.insert(l);
  return true;
}

bool mat(const AssertionPtr& a, const Env& env, const Value& fill, Materialized& m) {
  switch (a->kind) {
    case AKind::True: return true;
    case AKind::Star:
    case AKind::And: return mat(a->a1, env, fill, m) && mat(a->a2, env, fill, m);
    case AKind::Pure: {
      auto v = eval_expr(a->e1, env);
      if (!v || !as_bool(*v)) return false;
      if (!*as_bool(*v)) m.vacuous = true;
      return true;
    }
    case AKind::Array: {
      auto o = eval_expr(a->e1, env);
      auto n = eval_expr(a->e2, env);
      if (!o || !n || !as_obj(*o) || !as_int(*n)) return false;
      if (*as_int(*n) < 0) {
        m.vacuous = true;
        return true;
      }
      auto k = to_small(*as_int(*n));
      if (!k || *k > kMaxMaterialize) return false;
      for (long long i = 0; i < *k; ++i)
        if (!add_cell(m, HeapLoc{*as_obj(*o), Int(i)}, fill, true)) m.vacuous = true;
      return true;
    }
    case AKind::PointsToAny: {
      auto l = eval_expr(a->e1, env);
      if (!l || !as_loc(*l)) return false;
      if (!add_cell(m, *as_loc(*l), fill, true)) m.vacuous = true;
      return true;
    }
    case AKind::PointsTo: {
      auto l = eval_expr(a->e1, env);
      auto v = eval_expr(a->e2, env);
      if (!l || !as_loc(*l) || !v) return false;
      if (!add_cell(m, *as_loc(*l), *v, false)) m.vacuous = true;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

std::optional<Materialized> materialize(const AssertionPtr& pre, const Env& env, const Value& fill) {
  Materialized m;
  if (!mat(pre, env, fill, m)) return std::nullopt;
  return m;
}

Env canonical_env(const Program& p, const std::map<std::string, Value>& binding) {
  Env env;
  for (const auto& q : p.params) {
    auto it = binding.find(q.name);
    if (it != binding.end()) {
      env[q.name] = it->second;
    } else if (q.domain == ParamDomain::Obj) {
      env[q.name] = Value{ObjId{q.name}};
    } else if (q.domain == ParamDomain::Loc) {
      env[q.name] = Value{HeapLoc{ObjId{q.name}, Int(0)}};
    }
  }
  return env;
}

Verdict memsafe_concrete(const Program& p, const std::map<std::string, Value>& binding, std::uint64_t fuel,
                         const Value& fill, std::ostream* trace) {
  Verdict v;
  v.binding = binding;
  auto unsupported = [&](std::string why) {
    v.kind = Verdict::Kind::Unknown;
    v.reason = UnknownReason::Unsupported;
    v.detail = std::move(why);
    return v;
  };
  Env env = canonical_env(p, binding);
  for (const auto& q : p.params) {
    auto it = env.find(q.name);
    if (it == env.end()) return unsupported("no binding for parameter " + q.name);
    if (q.domain == ParamDomain::Nat) {
      auto* n = as_int(it->second);
      if (!n || *n < 0) return unsupported("parameter " + q.name + " must be a natural number");
    }
  }
  auto m = materialize(p.pre, env, fill);
  if (!m) return unsupported("precondition is not a layout of arrays and points-to chunks");
  if (m->vacuous) {
    v.kind = Verdict::Kind::Safe;
    v.detail = "precondition unsatisfiable under this binding";
    return v;
  }
  CmdPtr body = p.body;
  for (const auto& [name, val] : env) body = substitute(body, name, lit(val));
  RunOptions opts;
  opts.trace = trace;
  opts.wildcard_cells = m->wildcard_cells;
  auto r = run(m->heap, body, fuel, std::move(opts));
  Verdict out = r.verdict;
  out.binding = binding;
  return out;
}

}  // namespace ctms
