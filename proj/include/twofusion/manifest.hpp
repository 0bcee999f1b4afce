#pragma once

#include <map>
#include <string>
#include <vector>

#include "twofusion/errors.hpp"

namespace twofusion::cli {

enum class Tier { Fast, Standard, Long };
enum class Provenance { Stated, Derived, Definitional };
enum class CheckStatus { Pass, Fail, Indeterminate, Skipped };

std::string tier_name(Tier t);
std::string status_name(CheckStatus s);

// One named check, bound to a claims-register anchor. Plain-text blocks:
// key: value lines, blank-line separated, '#' comments.
struct CheckSpec {
  std::string id;
  std::string op;
  std::map<std::string, std::string> params;
  std::string expected;
  Provenance provenance = Provenance::Derived;
  std::string anchor; // claims-register key
  std::string claim;  // short claim text; lint requires it verbatim in the register
  Tier tier = Tier::Fast;
};

class ManifestError : public Error {
public:
  ManifestError(const std::string &msg, int line, int column = 1)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

std::vector<CheckSpec> parse_manifest(const std::string &path);
bool op_known(const std::string &op);

struct CheckResult {
  std::string id;
  CheckStatus status = CheckStatus::Skipped;
  std::string measured;
  std::string expected;
  double wall_ms = 0;
  std::string repro; // reproduction command line, filled on failure
};

struct SuiteReport {
  std::string manifest_path;
  std::vector<CheckResult> results; // manifest order
  int workers = 1;
  std::size_t passed = 0, failed = 0, indeterminate = 0, skipped = 0;
};

// Execute all checks of tier <= tier; the rest are reported skipped.
// Deterministic results independent of the worker count.
SuiteReport run_suite(const std::vector<CheckSpec> &checks, Tier tier, int workers,
                      const std::string &cache_dir, const std::string &manifest_path);

std::string report_to_json(const SuiteReport &report, bool zero_times = false);

struct CheckRow {
  std::string id, anchor, tier;
};
std::vector<CheckRow> list_checks(const std::vector<CheckSpec> &checks);

// Lint: every check's claim text must occur verbatim in the claims register.
std::vector<std::string> lint_manifest(const std::vector<CheckSpec> &checks,
                                       const std::string &claims_path);

} // namespace twofusion::cli
