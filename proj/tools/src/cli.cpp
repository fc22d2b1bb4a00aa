#include "cli.hpp"

#include "ctms/checker.hpp"
#include "ctms/report.hpp"
#include "ctms/syntax.hpp"
#include "ctms/vc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace ctms::cli {

namespace {

namespace fs = std::filesystem;

struct Config {
  std::string file;
  std::vector<std::string> binds;
  std::string size_var = "s";
  std::string mode = "ct";
  std::vector<long long> sizes = {0, 1};
  long long max_size = 30;
  std::optional<std::uint64_t> fuel;
  bool json = false;
  bool pure = false;
  bool trace = false;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fuel_of(const Config& c) {
  if (c.fuel) return *c.fuel;
  if (const char* env = std::getenv("CTMS_FUEL")) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw Usage(std::string("CTMS_FUEL must be a positive integer, got '") + env + "'");
  }
  return kDefaultFuel;
}

std::map<std::string, Value> bindings_of(const Program& p, const Config& c) {
  std::map<std::string, Value> out;
  for (const auto& b : c.binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw Usage("binding '" + b + "' is not name=value");
    std::string name = b.substr(0, eq), text = b.substr(eq + 1);
    const Param* q = p.param(name);
    if (!q) throw Usage("'" + name + "' is not a parameter of the program");
    if (q->domain == ParamDomain::Obj || q->domain == ParamDomain::Loc)
      throw Usage("'" + name + "' is a heap parameter and is chosen canonically");
    Int v;
    try {
      std::size_t used = 0;
      long long x = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      v = x;
    } catch (const std::exception&) {
      throw Usage("binding '" + b + "' needs an integer value");
    }
    if (q->domain == ParamDomain::Nat && v < 0) throw Usage("'" + name + "' is a natural number");
    out[name] = Value{v};
  }
  return out;
}

CheckOptions options_of(const Program& p, const Config& c) {
  CheckOptions o;
  o.size_var = c.size_var;
  o.bindings = bindings_of(p, c);
  o.sizes.clear();
  for (auto s : c.sizes) {
    if (s < 0) throw Usage("sizes are natural numbers");
    o.sizes.push_back(s);
  }
  if (c.max_size < 0) throw Usage("--max-size must be a natural number");
  o.max_size = c.max_size;
  o.fuel = fuel_of(c);
  return o;
}

int cmd_parse(const Config& c, std::ostream& out) {
  auto p = parse_program(read_file(c.file));
  if (c.json) {
    nlohmann::ordered_json j;
    j["params"] = nlohmann::ordered_json::array();
    for (const auto& q : p.params) j["params"].push_back({{"name", q.name}, {"domain", to_string(q.domain)}});
    j["program"] = pretty_print(p);
    out << j.dump(2) << "\n";
  } else {
    out << pretty_print(p);
  }
  return 0;
}

int cmd_run(const Config& c, std::ostream& out, std::ostream& err) {
  auto p = parse_program(read_file(c.file));
  auto b = bindings_of(p, c);
  for (const auto& q : p.params)
    if ((q.domain == ParamDomain::Nat || q.domain == ParamDomain::Int) && !b.count(q.name))
      throw Usage("parameter '" + q.name + "' needs --bind " + q.name + "=VALUE");
  auto v = memsafe_concrete(p, b, fuel_of(c), int_value(0), c.trace ? &err : nullptr);
  out << (c.json ? verdict_to_json(v) : describe(v)) << "\n";
  return v.kind == Verdict::Kind::Safe ? 0 : v.kind == Verdict::Kind::Unsafe ? 1 : 2;
}

int cmd_vc(const Config& c, std::ostream& out) {
  auto p = parse_program(read_file(c.file));
  auto vc = vc_for_spec(p);
  std::optional<PureFormula> pure;
  if (c.pure) {
    pure = to_pure(vc);
    if (!pure && !c.json) {
      out << print_vc(vc) << "\n";
      out << "# no pure form; simplified as far as:\n" << to_string(simplify(vc.matrix)) << "\n";
      return 2;
    }
  }
  if (c.json) {
    out << vc_to_json(vc, pure) << "\n";
    return c.pure && !pure ? 2 : 0;
  }
  if (pure) {
    std::string prefix;
    for (const auto& b : pure->prefix) prefix += "forall " + b.var + " in " + to_string(b.dom) + ". ";
    out << prefix << to_string(pure->formula) << "\n";
  } else {
    out << print_vc(vc) << "\n";
  }
  return 0;
}

int cmd_ct(const Config& c, std::ostream& out) {
  auto p = parse_program(read_file(c.file));
  auto o = options_of(p, c);
  auto pc = program_ct(p, o);
  out << (c.json ? ct_to_json(pc.per_var) + "\n" : ct_to_text(pc.per_var));
  return pc.supported ? 0 : 2;
}

int cmd_check(const Config& c, std::ostream& out) {
  auto mode = parse_mode(c.mode);
  if (!mode) throw Usage("unknown mode '" + c.mode + "'");
  auto p = parse_program(read_file(c.file));
  auto r = check(p, *mode, options_of(p, c));
  out << (c.json ? to_json(r) + "\n" : to_text(r));
  return exit_code(r.outcome);
}

// expected sidecars hold a memory-safety fact (Safe / Unsafe) or a literal outcome name
bool matches(const std::string& expected, Mode m, const Report& r) {
  if (expected == to_string(r.outcome)) return true;
  const Report& base = m == Mode::Compare && r.ct_report ? *r.ct_report : r;
  if (m == Mode::Compare && r.outcome != Outcome::Agrees) return false;
  if (expected == "Unsafe") return base.outcome == Outcome::Unsafe;
  if (expected == "Safe")
    return base.outcome == Outcome::SafeForAllSizes || (m != Mode::CT && m != Mode::Compare && base.outcome == Outcome::BoundedSafeOnly);
  return false;
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t k = 0;
  while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
  return s.substr(k);
}

int cmd_corpus(const Config& c, std::ostream& out, std::ostream& err) {
  auto mode = parse_mode(c.mode);
  if (!mode) throw Usage("unknown mode '" + c.mode + "'");
  if (!fs::is_directory(c.file)) throw Usage(c.file + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(c.file))
    if (e.is_regular_file() && e.path().extension() == ".wl") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  struct Row {
    std::string verdict, expected, error;
    bool ok = true;
  };
  std::vector<Row> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < files.size();) {
      Row& row = rows[k];
      auto side = files[k];
      side.replace_extension(".expected");
      if (fs::exists(side)) row.expected = trim(read_file(side.string()));
      try {
        auto p = parse_program(read_file(files[k].string()));
        auto r = check(p, *mode, options_of(p, c));
        row.verdict = to_string(r.outcome);
        if (!row.expected.empty()) row.ok = matches(row.expected, *mode, r);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.verdict = "error";
        row.ok = false;
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::size_t bad = 0;
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < files.size(); ++k) {
    const auto& row = rows[k];
    if (!row.ok) ++bad;
    if (c.json) {
      j.push_back({{"file", files[k].filename().string()},
                   {"verdict", row.verdict},
                   {"expected", row.expected.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(row.expected)},
                   {"ok", row.ok}});
    } else {
      out << files[k].filename().string() << "  " << row.verdict;
      if (!row.expected.empty()) out << "  expected " << row.expected;
      out << (row.ok ? "  ok" : "  MISMATCH") << "\n";
    }
    if (!row.error.empty()) err << files[k].filename().string() << ": " << row.error << "\n";
  }
  if (c.json) {
    nlohmann::ordered_json s;
    s["mode"] = c.mode;
    s["files"] = files.size();
    s["mismatches"] = bad;
    s["results"] = j;
    out << s.dump(2) << "\n";
  } else {
    out << files.size() << " files, " << bad << " mismatches\n";
  }
  return bad ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory-safety checking of array-traversing programs via completeness thresholds", "ctms"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "print the version and exit");
  Config c;

  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--fuel", c.fuel, "maximum reduction steps per run (default 1000000, env CTMS_FUEL)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--json", c.json, "machine-readable output");
  };
  auto add_check_opts = [&c](CLI::App* sub) {
    sub->add_option("--size", c.size_var, "size parameter to extrapolate over")->capture_default_str();
    sub->add_option("--bind", c.binds, "fix a parameter, name=value")->allow_extra_args(false);
    sub->add_option("--sizes", c.sizes, "sizes for bmc mode, comma separated")->delimiter(',');
    sub->add_option("--max-size", c.max_size, "largest size for oracle mode")->capture_default_str();
  };

  auto* parse = app.add_subcommand("parse", "parse and pretty-print a program");
  parse->add_option("FILE", c.file)->required();
  parse->add_flag("--json", c.json, "machine-readable output");

  auto* runc = app.add_subcommand("run", "run a program on concrete parameters");
  runc->add_option("FILE", c.file)->required();
  runc->add_option("--bind", c.binds, "parameter value, name=value")->allow_extra_args(false);
  runc->add_flag("--trace", c.trace, "print each reduction step to standard error");
  add_common(runc);

  auto* vcc = app.add_subcommand("vc", "print the verification condition");
  vcc->add_option("FILE", c.file)->required();
  vcc->add_flag("--pure", c.pure, "simplify to a heap-free formula");
  vcc->add_flag("--json", c.json, "machine-readable output");

  auto* ctc = app.add_subcommand("ct", "print constraint sets and witness sizes");
  ctc->add_option("FILE", c.file)->required();
  add_check_opts(ctc);
  add_common(ctc);

  auto* chk = app.add_subcommand("check", "decide memory safety");
  chk->add_option("FILE", c.file)->required();
  chk->add_option("--mode", c.mode, "ct | bmc | oracle | compare")
      ->check(CLI::IsMember({"ct", "bmc", "oracle", "compare"}))
      ->capture_default_str();
  add_check_opts(chk);
  add_common(chk);

  auto* corpus = app.add_subcommand("corpus", "check every .wl file in a directory against .expected sidecars");
  corpus->add_option("DIR", c.file)->required();
  corpus->add_option("--mode", c.mode, "ct | bmc | oracle | compare")
      ->check(CLI::IsMember({"ct", "bmc", "oracle", "compare"}))
      ->capture_default_str();
  add_check_opts(corpus);
  add_common(corpus);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 3;
  }
  if (show_version) {
    out << "ctms " << version() << "\n";
    return 0;
  }
  try {
    if (parse->parsed()) return cmd_parse(c, out);
    if (runc->parsed()) return cmd_run(c, out, err);
    if (vcc->parsed()) return cmd_vc(c, out);
    if (ctc->parsed()) return cmd_ct(c, out);
    if (chk->parsed()) return cmd_check(c, out);
    if (corpus->parsed()) return cmd_corpus(c, out, err);
    err << app.help();
    return 3;
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << c.file << ":" << e.what() << "\n";
    return 3;
  } catch (const UnboundVariable& e) {
    err << c.file << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ctms::cli
