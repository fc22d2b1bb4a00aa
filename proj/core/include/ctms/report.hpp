#pragma once

#include "ctms/checker.hpp"
#include "ctms/vc.hpp"

#include <string>

namespace ctms {

// {mode, verdict, witnesses, constraints, provenance, per_size, timing_ms, version}
std::string to_json(const Report& r, int indent = 2);
std::string to_text(const Report& r);

std::string ct_to_json(const std::vector<CTResult>& cts, int indent = 2);
std::string ct_to_text(const std::vector<CTResult>& cts);

std::string vc_to_json(const VerificationCondition& vc, const std::optional<PureFormula>& pure, int indent = 2);

std::string verdict_to_json(const Verdict& v, int indent = 2);

}  // namespace ctms
