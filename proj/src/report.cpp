#include "qtwist/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtwist/ncalg.hpp"
#include "qtwist/ring.hpp"

namespace qtwist {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const char* kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Check: return "check";
    case CheckKind::Control: return "expected-fail";
    case CheckKind::Discrepancy: return "discrepancy";
    case CheckKind::Derived: return "derived";
  }
  return "check";
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects an integer, got '" + v + "'");
  }
}

// Expands "all" and "none" and puts suites into dependency order.
std::vector<std::string> normalise_suites(const std::vector<std::string>& in) {
  std::vector<std::string> picked;
  for (const auto& s : in) {
    if (s == "all") {
      picked = suite_names();
      break;
    }
    if (s == "none") continue;
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw UsageError("unknown suite '" + s + "'");
    picked.push_back(s);
  }
  std::vector<std::string> ordered;
  for (const auto& s : suite_names())
    if (std::find(picked.begin(), picked.end(), s) != picked.end()) ordered.push_back(s);
  return ordered;
}

std::ostream* progress = nullptr;

}  // namespace

void set_progress_stream(std::ostream* os) { progress = os; }

std::size_t Report::count(const std::string& status) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [&](const CheckRecord& c) { return c.status == status; }));
}

bool Report::budget_exceeded() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.budget_exceeded; });
}

int Report::exit_code() const {
  if (budget_exceeded()) return 3;
  return failures() == 0 ? 0 : 1;
}

void run_check(Report& rep, const std::string& suite, const std::string& id, const std::string& label, CheckKind kind,
               const CheckFn& fn) {
  CheckRecord rec;
  rec.check_id = suite + "." + id;
  rec.paper_eq = label;
  rec.suite = suite;
  rec.kind = kind;
  auto t0 = std::chrono::steady_clock::now();
  bool errored = false;
  try {
    Outcome o = fn();
    rec.residual_zero = o.zero;
    rec.residual_summary = o.summary.empty() ? (o.zero ? "zero" : "nonzero") : o.summary;
    rec.derived_constants = std::move(o.derived);
  } catch (const BudgetExceeded& e) {
    errored = true;
    rec.budget_exceeded = true;
    rec.residual_summary = std::string("budget exhausted: ") + e.what();
  } catch (const std::exception& e) {
    errored = true;
    rec.residual_summary = std::string("error: ") + e.what();
  }
  rec.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  if (errored) {
    rec.status = "fail";
  } else {
    switch (kind) {
      case CheckKind::Check: rec.status = rec.residual_zero ? "pass" : "fail"; break;
      case CheckKind::Control:
      case CheckKind::Discrepancy: rec.status = rec.residual_zero ? "fail" : "pass"; break;
      case CheckKind::Derived: rec.status = rec.residual_zero ? "derived" : "fail"; break;
    }
  }
  if (progress) *progress << rec.status << " " << rec.check_id << " " << rec.millis << " ms" << std::endl;
  rep.checks.push_back(std::move(rec));
}

Report run(const RunConfig& config) {
  validate(config);
  Report rep;
  rep.config = config;
  rep.config.suites = normalise_suites(config.suites);
  for (const auto& s : rep.config.suites) run_suite(rep, s);
  return rep;
}

// ---------------------------------------------------------------------------
// Configuration

RunConfig parse_config_text(const std::string& text, RunConfig cfg) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw UsageError("line " + std::to_string(lineno) + ": empty key or value");
    if (key == "n") cfg.n = parse_int(key, value);
    else if (key == "degree") cfg.degree = parse_int(key, value);
    else if (key == "suites" || key == "suite") cfg.suites = split_list(value);
    else if (key == "root") cfg.root = parse_int(key, value);
    else if (key == "q13") cfg.q13 = value;
    else if (key == "format") cfg.format = value;
    else if (key == "out") cfg.out = value;
    else cfg.params[key] = value;
  }
  return cfg;
}

void validate(const RunConfig& c) {
  if (c.n < 2) throw UsageError("n must be at least 2");
  if (c.degree < 1) throw UsageError("degree must be at least 1");
  if (c.format != "json" && c.format != "text") throw UsageError("format must be json or text");
  if (c.q13 != "both" && c.q13 != "constrained" && c.q13 != "generic")
    throw UsageError("q13 must be both, constrained or generic");
  if (c.root && *c.root < 2) throw UsageError("root order must be at least 2");
  normalise_suites(c.suites);
  ParamSpace sp(c.n);
  for (const auto& [name, value] : c.params) {
    auto idx = sp.find(name);
    if (!idx) throw UsageError("unknown parameter '" + name + "' for n = " + std::to_string(c.n));
    ParamValue v;
    try {
      v = Assignment::parse_value(value);
    } catch (const std::exception&) {
      throw UsageError("cannot parse value '" + value + "' for " + name);
    }
    if (v.kind == ParamValue::Kind::Root && *idx != sp.a_index())
      throw UsageError("root:K is only allowed for a");
    if (v.kind == ParamValue::Kind::Value && v.value == 0) throw UsageError(name + " must be nonzero");
  }
}

// ---------------------------------------------------------------------------
// Rendering

nlohmann::ordered_json report_json(const Report& rep, bool with_millis) {
  using nlohmann::ordered_json;
  ordered_json cfg;
  cfg["n"] = rep.config.n;
  cfg["degree"] = rep.config.degree;
  cfg["suites"] = rep.config.suites;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : rep.config.params) params[k] = v;
  cfg["params"] = params.empty() ? ordered_json("sym") : params;
  if (rep.config.root) cfg["root"] = *rep.config.root;
  cfg["q13"] = rep.config.q13;

  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json r;
    r["check_id"] = c.check_id;
    r["paper_eq"] = c.paper_eq;
    r["kind"] = kind_name(c.kind);
    r["status"] = c.status;
    if (c.kind == CheckKind::Control || c.kind == CheckKind::Discrepancy)
      r["outcome"] = c.status == "pass" ? "pass-as-control" : "control-did-not-fail";
    r["residual_zero"] = c.residual_zero;
    r["residual_summary"] = c.residual_summary;
    r["derived_constants"] = ordered_json::parse(c.derived_constants.dump());
    if (with_millis) r["millis"] = c.millis;
    checks.push_back(r);
  }
  ordered_json out;
  out["schema"] = "qtwist-report/1";
  out["config"] = cfg;
  out["checks"] = checks;
  out["summary"] = {{"total", rep.checks.size()},
                    {"pass", rep.count("pass")},
                    {"fail", rep.count("fail")},
                    {"derived", rep.count("derived")}};
  out["exit_code"] = rep.exit_code();
  return out;
}

std::string render(const Report& rep, const std::string& format) {
  if (format == "json") {
    return report_json(rep).dump(2) + "\n";
  }
  std::ostringstream os;
  os << "qtwist report  n=" << rep.config.n << "  degree=" << rep.config.degree << "\n";
  std::string suite;
  for (const auto& c : rep.checks) {
    if (c.suite != suite) {
      suite = c.suite;
      os << "\n[" << suite << "]\n";
    }
    std::string tag = c.status == "pass" ? "PASS" : (c.status == "derived" ? "DERIVED" : "FAIL");
    if (c.status == "pass" && c.kind != CheckKind::Check) tag = "PASS-AS-CONTROL";
    os << "  " << tag << "  " << c.check_id << "  (" << c.paper_eq << ")  " << c.residual_summary;
    if (!c.derived_constants.empty())
      for (const auto& [k, v] : c.derived_constants.items())
        os << "  " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
    os << "  " << c.millis << " ms\n";
  }
  os << "\n" << rep.checks.size() << " checks: " << rep.count("pass") << " pass, " << rep.count("fail") << " fail, "
     << rep.count("derived") << " derived\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Command line

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification kernel for twisted quantum gl(N)"};
  app.require_subcommand(1);

  struct Flags {
    int n = 2, degree = 4, root = 0;
    std::vector<std::string> suites;
    std::string params = "sym", format, out, q13;
    bool verbose = false;
  };
  Flags check_flags, derive_flags;
  auto add_flags = [](CLI::App* sub, Flags& f) {
    sub->add_option("--n", f.n, "rank N of gl(N)");
    sub->add_option("--degree", f.degree, "truncation weight D of the dual");
    sub->add_option("--suite", f.suites, "suites: matrix algebra duality roots sl-reduce esoteric derive, all, none")
        ->delimiter(',');
    sub->add_option("--params", f.params, "sym, or a key = value file");
    sub->add_option("--root", f.root, "order K of the root of unity for the roots suite");
    sub->add_option("--format", f.format, "json or text");
    sub->add_option("--out", f.out, "write the report here instead of stdout");
    sub->add_option("--q13", f.q13, "esoteric variants: both, constrained, generic");
    sub->add_flag("--verbose", f.verbose, "report each check on stderr as it finishes");
  };
  CLI::App* check = app.add_subcommand("check", "run verification suites");
  CLI::App* derive = app.add_subcommand("derive", "print solved constants");
  add_flags(check, check_flags);
  add_flags(derive, derive_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  bool is_derive = derive->parsed();
  CLI::App* sub = is_derive ? derive : check;
  Flags& f = is_derive ? derive_flags : check_flags;

  RunConfig cfg;
  cfg.format = is_derive ? "text" : "json";
  cfg.suites = is_derive ? std::vector<std::string>{"derive"} : std::vector<std::string>{"all"};
  try {
    if (f.params != "sym") {
      std::ifstream in(f.params);
      if (!in) throw UsageError("cannot read params file '" + f.params + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = parse_config_text(buf.str(), cfg);
    }
    if (sub->count("--n")) cfg.n = f.n;
    if (sub->count("--degree")) cfg.degree = f.degree;
    if (sub->count("--suite")) cfg.suites = f.suites;
    if (sub->count("--root")) cfg.root = f.root;
    if (sub->count("--format")) cfg.format = f.format;
    if (sub->count("--out")) cfg.out = f.out;
    if (sub->count("--q13")) cfg.q13 = f.q13;
    validate(cfg);
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (f.verbose) set_progress_stream(&err);
  Report rep = run(cfg);
  set_progress_stream(nullptr);
  std::string text = render(rep, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream o(cfg.out);
    if (!o) {
      err << "cannot write '" << cfg.out << "'\n";
      return 2;
    }
    o << text;
  }
  for (const auto& c : rep.checks)
    if (c.status == "fail") err << "FAIL " << c.check_id << ": " << c.residual_summary << "\n";
  return rep.exit_code();
}

}  // namespace qtwist
