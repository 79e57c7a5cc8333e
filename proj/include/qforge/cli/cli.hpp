#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qforge::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// A parsed invocation. Scalars stay in their exact text form until execution.
struct CommandRequest {
  std::string command;  // verify | derive | normalize | pipeline | conjecture
  std::string identity;
  std::string shift;
  std::string grid;      // "sym=lo..hi,..."
  std::string q;         // comma-separated exact scalars
  std::string bind;      // "sym=value,..." bindings shared by every case
  std::optional<std::string> mode;
  double tol = 1e-12;
  std::uint64_t seed = 20240601;
  std::string output;
  std::string format = "json";
  bool check_against_table = false;
  std::string registry;
  int n_max = 4;
  int trials = 20;
  std::string pattern;
  bool serial = false;

  // Echo of the request with every field that affects the result.
  nlohmann::json to_json() const;
};

const std::vector<std::string>& commands();

// Parses argv (argv[0] is the program name). Throws Error(Usage) on bad input;
// returns nullopt when help was requested and printed.
std::optional<CommandRequest> parse_command_line(int argc, const char* const* argv);

// Throws Error(Usage) when the request breaks an invariant (unknown command,
// tol <= 0, missing required option, bad format).
void validate(const CommandRequest& req);

struct CaseRecord {
  std::map<std::string, std::string> bindings;
  std::string status;  // pass | fail | error
  std::string lhs, rhs;
  double abs_err = 0.0;
  long terms_used = 0;
  std::string detail;

  bool operator==(const CaseRecord&) const = default;
};

struct Summary {
  long total = 0, passed = 0, failed = 0, errored = 0;
  bool operator==(const Summary&) const = default;
};

struct ReportDocument {
  nlohmann::json command;  // request echo
  std::vector<CaseRecord> cases;
  Summary summary;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  nlohmann::json result = nlohmann::json::object();  // command-specific payload

  void recount();
  int exit_code() const;  // 0 iff every case passed, 1 otherwise
  nlohmann::json to_json() const;
  static ReportDocument from_json(const nlohmann::json& j);
  std::string to_text() const;
  bool operator==(const ReportDocument&) const = default;
};

// Runs a validated request. Usage errors propagate as Error(Usage); computational
// errors become per-case "error" records.
ReportDocument execute(const CommandRequest& req);

// Full command-line flow: parse, execute, write the report. Returns the exit code
// (0 pass, 1 any failure, 2 usage error); diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qforge::cli
