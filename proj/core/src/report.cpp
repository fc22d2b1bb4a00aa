#include "ctms/report.hpp"
#include "ctms/syntax.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace ctms {

namespace {

using json = nlohmann::ordered_json;

json int_json(const Int& i) {
  if (i >= std::numeric_limits<long long>::min() && i <= std::numeric_limits<long long>::max())
    return static_cast<long long>(i);
  return i.str();
}

json binding_json(const std::map<std::string, Value>& b) {
  json j = json::object();
  for (const auto& [k, v] : b) {
    if (auto* i = as_int(v)) j[k] = int_json(*i);
    else j[k] = to_string(v);
  }
  return j;
}

json witness_json(const Verdict& v, const std::string& size_var) {
  json j;
  auto it = v.binding.find(size_var);
  auto* s = it == v.binding.end() ? nullptr : as_int(it->second);
  j["size"] = s ? int_json(*s) : json(nullptr);
  j["step"] = v.step;
  j["loc"] = {{"object", v.loc.object.name}, {"index", int_json(v.loc.index)}};
  j["kind"] = to_string(v.access);
  return j;
}

json constraints_json(const std::vector<CTResult>& cts) {
  json arr = json::array();
  for (const auto& ct : cts)
    for (const auto& c : ct.set.constraints) {
      json j;
      j["text"] = c.text;
      j["satisfiable"] = c.satisfiable();
      auto m = c.least_model();
      j["witness"] = m ? int_json(*m) : json(nullptr);
      arr.push_back(j);
    }
  return arr;
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

std::string to_json(const Report& r, int indent) {
  json j;
  j["mode"] = to_string(r.mode);
  j["verdict"] = to_string(r.outcome);
  j["witnesses"] = json::array();
  for (const auto& w : r.witnesses) j["witnesses"].push_back(witness_json(w, r.size_var));
  j["constraints"] = constraints_json(r.ct);
  j["provenance"] = r.provenance;
  j["per_size"] = json::array();
  for (const auto& row : r.per_size)
    j["per_size"].push_back({{"size", int_json(row.size)}, {"verdict", to_string(row.verdict.kind)}});
  j["timing_ms"] = round3(r.timing_ms);
  j["version"] = r.version;
  return j.dump(indent);
}

std::string to_text(const Report& r) {
  std::ostringstream o;
  o << "mode: " << to_string(r.mode) << "\n";
  o << "verdict: " << to_string(r.outcome) << "\n";
  if (!r.detail.empty()) o << "detail: " << r.detail << "\n";
  if (!r.ct.empty()) o << ct_to_text(r.ct);
  if (!r.per_size.empty()) {
    o << "per-size:\n";
    for (const auto& row : r.per_size) o << "  " << r.size_var << "=" << row.size << "  " << describe(row.verdict) << "\n";
  }
  o << "timing: " << round3(r.timing_ms) << " ms\n";
  return o.str();
}

std::string ct_to_json(const std::vector<CTResult>& cts, int indent) {
  json arr = json::array();
  for (const auto& ct : cts) {
    json j;
    j["var"] = ct.set.var;
    j["flag"] = ct.flag == SupportFlag::Exact ? "exact" : "fallback";
    j["constraints"] = constraints_json({ct});
    j["witnesses"] = json::array();
    for (const auto& w : ct.witnesses) j["witnesses"].push_back(int_json(w));
    j["unreached"] = ct.unreached;
    j["provenance"] = ct.provenance;
    if (ct.flag == SupportFlag::Fallback) j["reason"] = ct.fallback_reason;
    arr.push_back(j);
  }
  return arr.dump(indent);
}

std::string ct_to_text(const std::vector<CTResult>& cts) {
  std::ostringstream o;
  for (const auto& ct : cts) {
    o << "size " << ct.set.var << " (" << (ct.flag == SupportFlag::Exact ? "exact" : "fallback") << ")\n";
    if (ct.flag == SupportFlag::Fallback) o << "  reason: " << ct.fallback_reason << "\n";
    o << "  constraints:";
    if (ct.set.constraints.empty()) o << " none";
    o << "\n";
    for (const auto& c : ct.set.constraints) {
      o << "    " << c.text;
      if (auto m = c.least_model()) o << "  (least model " << *m << ")";
      else o << "  (unsatisfiable)";
      o << "\n";
    }
    o << "  witnesses: {";
    for (std::size_t k = 0; k < ct.witnesses.size(); ++k) o << (k ? "," : "") << ct.witnesses[k];
    o << "}\n";
    for (const auto& u : ct.unreached) o << "  unreached: " << u << "\n";
    o << "  provenance:\n";
    for (const auto& p : ct.provenance) o << "    " << p << "\n";
  }
  return o.str();
}

std::string vc_to_json(const VerificationCondition& vc, const std::optional<PureFormula>& pure, int indent) {
  json j;
  j["prefix"] = json::array();
  for (const auto& b : vc.prefix)
    j["prefix"].push_back({{"var", b.var}, {"domain", to_string(b.dom)}, {"forall", b.forall}});
  j["matrix"] = to_string(vc.matrix);
  if (pure) {
    j["pure"] = to_string(pure->formula);
    j["rewrites"] = json::array();
    for (const auto& s : pure->steps) j["rewrites"].push_back(s.rule);
  }
  return j.dump(indent);
}

std::string verdict_to_json(const Verdict& v, int indent) {
  json j;
  j["verdict"] = to_string(v.kind);
  j["binding"] = binding_json(v.binding);
  if (v.kind == Verdict::Kind::Unsafe) {
    j["step"] = v.step;
    j["loc"] = {{"object", v.loc.object.name}, {"index", int_json(v.loc.index)}};
    j["kind"] = to_string(v.access);
  }
  if (v.kind == Verdict::Kind::Unknown) j["reason"] = to_string(v.reason);
  return j.dump(indent);
}

}  // namespace ctms
