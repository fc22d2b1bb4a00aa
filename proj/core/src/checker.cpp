#include "ctms/checker.hpp"
#include "ctms/syntax.hpp"
#include "ctms/vc.hpp"

#include <algorithm>
#include <chrono>

#ifndef CTMS_VERSION_STRING
#define CTMS_VERSION_STRING "0.0.0"
#endif

namespace ctms {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::CT: return "ct";
    case Mode::BMC: return "bmc";
    case Mode::Oracle: return "oracle";
    case Mode::Compare: return "compare";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : {Mode::CT, Mode::BMC, Mode::Oracle, Mode::Compare})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::SafeForAllSizes: return "SafeForAllSizes";
    case Outcome::Unsafe: return "Unsafe";
    case Outcome::BoundedSafeOnly: return "BoundedSafeOnly";
    case Outcome::Unknown: return "Unknown";
    case Outcome::Agrees: return "Agrees";
    case Outcome::Disagrees: return "Disagrees";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::SafeForAllSizes:
    case Outcome::Agrees: return 0;
    case Outcome::Unsafe:
    case Outcome::Disagrees: return 1;
    default: return 2;
  }
}

const std::string& version() {
  static const std::string v = CTMS_VERSION_STRING;
  return v;
}

namespace {

using Binding = std::map<std::string, Value>;

std::vector<std::string> free_nat_params(const Program& p, const CheckOptions& o) {
  std::vector<std::string> out;
  for (const auto& q : p.params) {
    if (o.bindings.count(q.name)) continue;
    if (q.domain == ParamDomain::Int)
      throw UsageError("integer parameter '" + q.name + "' needs a --bind value");
    if (q.domain == ParamDomain::Nat) out.push_back(q.name);
  }
  return out;
}

void require_size_var(const Program& p, const CheckOptions& o) {
  const Param* q = p.param(o.size_var);
  if (!q) {
    // a program without size parameters is checked once
    for (const auto& x : p.params)
      if (x.domain == ParamDomain::Nat) throw UsageError("'" + o.size_var + "' is not a parameter of the program");
    return;
  }
  if (q->domain != ParamDomain::Nat) throw UsageError("'" + o.size_var + "' is not a natural-number parameter");
}

// every combination of values, size variable first
std::vector<Binding> product(const std::vector<std::string>& vars, const std::map<std::string, std::vector<Int>>& vals,
                             const Binding& fixed) {
  std::vector<Binding> out{fixed};
  for (const auto& v : vars) {
    std::vector<Binding> next;
    for (const auto& b : out)
      for (const auto& x : vals.at(v)) {
        auto c = b;
        c[v] = Value{x};
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> size_first(std::vector<std::string> vars, const std::string& s) {
  auto it = std::find(vars.begin(), vars.end(), s);
  if (it != vars.end()) std::rotate(vars.begin(), it, it + 1);
  return vars;
}

Int size_of(const Binding& b, const std::string& s) {
  auto it = b.find(s);
  if (it == b.end()) return 0;
  auto* i = as_int(it->second);
  return i ? *i : Int(0);
}

// runs every binding; per size keeps the first unsafe run, else the first unknown, else the first run
void run_all(const Program& p, const std::vector<Binding>& bs, const CheckOptions& o, Report& r) {
  std::vector<SizeVerdict> rows;
  for (const auto& b : bs) {
    Int s = size_of(b, o.size_var);
    auto v = memsafe_concrete(p, b, o.fuel);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SizeVerdict& x) { return x.size == s; });
    if (it == rows.end()) {
      rows.push_back({s, v});
      continue;
    }
    auto rank = [](Verdict::Kind k) { return k == Verdict::Kind::Unsafe ? 2 : k == Verdict::Kind::Unknown ? 1 : 0; };
    if (rank(v.kind) > rank(it->verdict.kind)) it->verdict = v;
  }
  r.per_size = rows;
  std::vector<SizeVerdict> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [](const SizeVerdict& a, const SizeVerdict& b) { return a.size < b.size; });
  for (const auto& row : sorted)
    if (row.verdict.kind == Verdict::Kind::Unsafe) r.witnesses.push_back(row.verdict);
}

bool any_unknown(const Report& r) {
  return std::any_of(r.per_size.begin(), r.per_size.end(),
                     [](const SizeVerdict& x) { return x.verdict.kind == Verdict::Kind::Unknown; });
}

const Verdict* first_unknown(const Report& r) {
  for (const auto& x : r.per_size)
    if (x.verdict.kind == Verdict::Kind::Unknown) return &x.verdict;
  return nullptr;
}

Report bounded(const Program& p, const CheckOptions& o, Mode m, const std::vector<Int>& sizes) {
  require_size_var(p, o);
  Report r;
  r.mode = m;
  r.size_var = o.size_var;
  r.version = version();
  auto vars = size_first(free_nat_params(p, o), o.size_var);
  std::map<std::string, std::vector<Int>> vals;
  for (const auto& v : vars) vals[v] = sizes;
  run_all(p, product(vars, vals, o.bindings), o, r);
  if (m == Mode::BMC && !r.witnesses.empty()) {
    // bmc reports the first failing size in the order given
    for (const auto& row : r.per_size)
      if (row.verdict.kind == Verdict::Kind::Unsafe) {
        r.witnesses = {row.verdict};
        break;
      }
  }
  if (!r.witnesses.empty()) {
    r.outcome = Outcome::Unsafe;
    r.detail = describe(r.witnesses.front());
  } else if (any_unknown(r)) {
    r.outcome = Outcome::Unknown;
    r.detail = describe(*first_unknown(r));
  } else {
    r.outcome = Outcome::BoundedSafeOnly;
    std::string list;
    for (const auto& row : r.per_size) list += (list.empty() ? "" : ",") + to_string(row.size);
    r.detail = "safe at " + o.size_var + " in {" + list + "} only";
  }
  return r;
}

std::vector<CmdPtr> seq_parts(const CmdPtr& c) {
  if (is_seq(*c)) {
    auto a = seq_parts(c->c1);
    auto b = seq_parts(c->c2);
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  return {c};
}

struct PartCT {
  std::optional<CTResult> ct;
  std::string reason;
};

PartCT part_ct(const Program& p, const CmdPtr& c, const std::string& x, const CheckOptions& o) {
  if (c->kind == CmdKind::If && mentions(c->e1, x)) {
    auto fv = free_vars(c->e1);
    if (fv.size() == 1) {
      if (auto g = region_of(a_pure(c->e1), x)) {
        auto k1 = part_ct(p, c->c1, x, o);
        auto k2 = part_ct(p, c->c2, x, o);
        if (!k1.ct) return k1;
        if (!k2.ct) return k2;
        CTResult r;
        r.set = combine_if(*g, to_string(c->e1), k1.ct->set, k2.ct->set);
        r.provenance = k1.ct->provenance;
        r.provenance.insert(r.provenance.end(), k2.ct->provenance.begin(), k2.ct->provenance.end());
        r.provenance.push_back("combine-if: " + to_string(c->e1));
        return {r, {}};
      }
    }
  }
  Program part = p;
  part.body = c;
  std::optional<PureFormula> pf;
  try {
    pf = to_pure(vc_for_spec(part));
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
  if (!pf) return {std::nullopt, "verification condition does not reduce to a pure formula"};
  auto sl = slice_vc(pf->formula, x);
  PureFormula sliced{pf->prefix, sl.result, pf->steps};
  auto r = extract_ct_size(sliced, x, o.extract);
  if (sl.separable) r.provenance.push_back("slice: dropped " + std::to_string(sl.dropped.size()) + " factor(s) free of " + x);
  if (r.flag == SupportFlag::Fallback) return {std::nullopt, r.fallback_reason};
  return {r, {}};
}

}  // namespace

ProgramCT program_ct(const Program& p, const CheckOptions& o) {
  ProgramCT out;
  auto vars = size_first(free_nat_params(p, o), o.size_var);
  auto parts = seq_parts(p.body);
  if (vars.empty()) {
    // nothing to extrapolate over, but the single run is still only trusted inside the fragment
    for (const auto& part : parts) {
      auto r = part_ct(p, part, o.size_var, o);
      if (!r.ct) {
        out.supported = false;
        out.reason = r.reason;
        return out;
      }
      out.provenance.insert(out.provenance.end(), r.ct->provenance.begin(), r.ct->provenance.end());
    }
    return out;
  }
  for (const auto& x : vars) {
    CTResult acc;
    acc.set.var = x;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      auto r = part_ct(p, parts[k], x, o);
      if (!r.ct) {
        out.supported = false;
        out.reason = r.reason;
        acc.flag = SupportFlag::Fallback;
        acc.fallback_reason = r.reason;
        break;
      }
      acc.set = combine_seq(acc.set, r.ct->set);
      acc.provenance.insert(acc.provenance.end(), r.ct->provenance.begin(), r.ct->provenance.end());
    }
    if (parts.size() > 1 && acc.flag == SupportFlag::Exact)
      acc.provenance.push_back("combine-seq: " + std::to_string(parts.size()) + " parts, precondition asserted between them");
    if (acc.flag == SupportFlag::Exact) {
      auto mw = minimal_witnesses(acc.set, o.extract.bound);
      acc.witnesses = mw.witnesses;
      acc.unreached = mw.unreached;
    }
    out.provenance.insert(out.provenance.end(), acc.provenance.begin(), acc.provenance.end());
    out.per_var.push_back(std::move(acc));
    if (!out.supported) break;
  }
  return out;
}

Report bmc(const Program& p, const CheckOptions& o) { return bounded(p, o, Mode::BMC, o.sizes); }

Report oracle(const Program& p, const CheckOptions& o) {
  std::vector<Int> sizes;
  for (long long s = 0; s <= o.max_size; ++s) sizes.push_back(s);
  return bounded(p, o, Mode::Oracle, sizes);
}

Report verify_with_ct(const Program& p, const CheckOptions& o) {
  require_size_var(p, o);
  Report r;
  r.mode = Mode::CT;
  r.size_var = o.size_var;
  r.version = version();
  auto pc = program_ct(p, o);
  r.ct = pc.per_var;
  r.provenance = pc.provenance;
  if (!pc.supported) {
    r.outcome = Outcome::Unknown;
    r.detail = "unsupported: " + pc.reason + "; run oracle mode for a bounded answer";
    return r;
  }
  std::vector<std::string> vars;
  std::map<std::string, std::vector<Int>> vals;
  for (const auto& c : pc.per_var) {
    if (!c.unreached.empty()) {
      r.outcome = Outcome::Unknown;
      r.detail = "constraint " + c.unreached.front() + " has no model below the search bound";
      return r;
    }
    vars.push_back(c.set.var);
    // a size-independent program still gets run once
    vals[c.set.var] = c.witnesses.empty() ? std::vector<Int>{0} : c.witnesses;
  }
  run_all(p, product(vars, vals, o.bindings), o, r);
  if (!r.witnesses.empty()) {
    r.outcome = Outcome::Unsafe;
    r.detail = describe(r.witnesses.front());
  } else if (any_unknown(r)) {
    r.outcome = Outcome::Unknown;
    r.detail = describe(*first_unknown(r));
  } else {
    r.outcome = Outcome::SafeForAllSizes;
    std::string list;
    for (const auto& row : r.per_size) list += (list.empty() ? "" : ",") + to_string(row.size);
    r.detail = "safe at every witness size {" + list + "}";
  }
  return r;
}

bool replays(const Program& p, const Verdict& w, std::uint64_t fuel) {
  return memsafe_concrete(p, w.binding, fuel).same_witness(w);
}

Report compare(const Program& p, const Report& c, const Report& orc, const CheckOptions& o) {
  Report r;
  r.mode = Mode::Compare;
  r.size_var = o.size_var;
  r.version = version();
  r.ct = c.ct;
  r.provenance = c.provenance;
  r.per_size = orc.per_size;
  r.witnesses = c.witnesses;
  r.ct_report = std::make_shared<Report>(c);
  r.oracle_report = std::make_shared<Report>(orc);
  std::string both = "ct: " + std::string(to_string(c.outcome)) + " (" + c.detail + "); oracle: " +
                     to_string(orc.outcome) + " (" + orc.detail + ")";
  if (c.outcome == Outcome::Unknown || orc.outcome == Outcome::Unknown) {
    r.outcome = Outcome::Inconclusive;
    r.detail = both;
    return r;
  }
  bool agree = false;
  if (c.outcome == Outcome::SafeForAllSizes) {
    agree = orc.outcome == Outcome::BoundedSafeOnly;
  } else if (c.outcome == Outcome::Unsafe && orc.outcome == Outcome::Unsafe) {
    agree = true;
    for (const auto& w : c.witnesses) {
      if (!replays(p, w, o.fuel)) agree = false;
      Int s = size_of(w.binding, o.size_var);
      if (s > o.max_size) continue;
      // the oracle saw this size too and must have found the same error there
      auto row = std::find_if(orc.per_size.begin(), orc.per_size.end(), [&](const SizeVerdict& x) { return x.size == s; });
      if (row == orc.per_size.end() || row->verdict.kind != Verdict::Kind::Unsafe) agree = false;
      else if (row->verdict.binding == w.binding && !row->verdict.same_witness(w)) agree = false;
    }
    for (const auto& w : orc.witnesses)
      if (!replays(p, w, o.fuel)) agree = false;
  }
  r.outcome = agree ? Outcome::Agrees : Outcome::Disagrees;
  r.detail = both;
  return r;
}

Report check(const Program& p, Mode m, const CheckOptions& o) {
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  switch (m) {
    case Mode::CT: r = verify_with_ct(p, o); break;
    case Mode::BMC: r = bmc(p, o); break;
    case Mode::Oracle: r = oracle(p, o); break;
    case Mode::Compare: r = compare(p, verify_with_ct(p, o), oracle(p, o), o); break;
  }
  r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace ctms
