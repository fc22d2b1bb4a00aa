#pragma once

#include "ctms/ct.hpp"
#include "ctms/interp.hpp"
#include "ctms/lang.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ctms {

enum class Mode { CT, BMC, Oracle, Compare };
const char* to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

enum class Outcome { SafeForAllSizes, Unsafe, BoundedSafeOnly, Unknown, Agrees, Disagrees, Inconclusive };
const char* to_string(Outcome o);
int exit_code(Outcome o);

struct SizeVerdict {
  Int size;
  Verdict verdict;
};

struct CheckOptions {
  std::string size_var = "s";
  std::map<std::string, Value> bindings;  // parameters held fixed
  std::vector<Int> sizes = {0, 1};        // bmc
  long long max_size = 30;                // oracle
  std::uint64_t fuel = kDefaultFuel;
  ExtractOptions extract;
};

struct Report {
  Mode mode = Mode::CT;
  Outcome outcome = Outcome::Unknown;
  std::string size_var;
  std::vector<SizeVerdict> per_size;
  std::vector<Verdict> witnesses;  // unsafe runs, least size first
  std::vector<CTResult> ct;        // one per size parameter, ct and compare modes
  std::vector<std::string> provenance;
  std::string detail;
  double timing_ms = 0;
  std::string version;
  std::shared_ptr<Report> ct_report, oracle_report;  // compare mode
};

const std::string& version();

// Raised for requests that cannot be run as given (bad size variable, unbound Int parameter).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Report bmc(const Program& p, const CheckOptions& o);
Report oracle(const Program& p, const CheckOptions& o);
Report verify_with_ct(const Program& p, const CheckOptions& o);
Report compare(const Program& p, const Report& ct_report, const Report& oracle_report, const CheckOptions& o);
Report check(const Program& p, Mode m, const CheckOptions& o);

// Constraint sets the checker would use for each size parameter, before witness selection.
struct ProgramCT {
  std::vector<CTResult> per_var;
  std::vector<std::string> provenance;
  bool supported = true;
  std::string reason;
};
ProgramCT program_ct(const Program& p, const CheckOptions& o);

// Reruns an unsafe witness; true when the same step, location and access come back.
bool replays(const Program& p, const Verdict& w, std::uint64_t fuel);

}  // namespace ctms
