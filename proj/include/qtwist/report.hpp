#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qtwist {

// A check asserts a zero residual. A control is a perturbed input whose
// residual must be nonzero. A discrepancy is a literal statement known not to
// hold; it is reported next to the corrected form and is expected to fail.
// A derived record carries solved constants.
enum class CheckKind { Check, Control, Discrepancy, Derived };

struct CheckRecord {
  std::string check_id;
  std::string paper_eq;  // descriptive label of the identity
  std::string suite;
  CheckKind kind = CheckKind::Check;
  bool residual_zero = false;
  bool budget_exceeded = false;
  std::string status;  // pass | fail | derived
  std::string residual_summary;
  nlohmann::json derived_constants = nlohmann::json::object();
  long long millis = 0;

  bool ok() const { return status != "fail"; }
};

struct RunConfig {
  int n = 2;
  int degree = 4;
  std::vector<std::string> suites;
  // parameter name -> "sym", a rational, or "root:K" (a only)
  std::map<std::string, std::string> params;
  std::optional<int> root;
  std::string q13 = "both";  // esoteric variants: both | constrained | generic
  std::string format = "json";
  std::string out;
};

struct Report {
  RunConfig config;
  std::vector<CheckRecord> checks;

  std::size_t count(const std::string& status) const;
  std::size_t failures() const { return count("fail"); }
  bool budget_exceeded() const;
  // 0 all good, 1 a check failed (or a control came out zero), 3 budget exhausted
  int exit_code() const;
};

struct Outcome {
  bool zero = true;
  std::string summary;
  nlohmann::json derived = nlohmann::json::object();
};

using CheckFn = std::function<Outcome()>;

// Runs one check, timing it and translating exceptions into failures.
void run_check(Report& rep, const std::string& suite, const std::string& id, const std::string& label, CheckKind kind,
               const CheckFn& fn);

// When set, run_check writes one line per finished check here.
void set_progress_stream(std::ostream* os);

const std::vector<std::string>& suite_names();
// Runs every requested suite in dependency order.
Report run(const RunConfig& config);
void run_suite(Report& rep, const std::string& suite);

// Flat "key = value" lines; '#' starts a comment.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
void validate(const RunConfig& config);

nlohmann::ordered_json report_json(const Report& rep, bool with_millis = true);
std::string render(const Report& rep, const std::string& format);

// Entry point of the command-line tool. Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtwist
