#pragma once

// Jobs, reports and their serialisations.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ssfilter/engine.hpp"
#include "ssfilter/graded_dims.hpp"

namespace ssfilter {

inline constexpr const char* kReportSchema = "ssfilter.report/1";

struct JobConfig {
  std::string family;
  std::optional<int> n, g, r, m;
  GradedDims betti;                      // uconf-general input
  std::optional<std::string> convention; // uconf-general: compact-support | ordinary
  std::string format = "text";
  std::set<std::string> artifacts = {"e1", "e2", "betti"};
  std::string out;
  bool labels = false;
  bool reverse_order = false;
  std::optional<int> fault_face;  // test hook
  // check verb
  int pmax = 10;
  std::set<std::string> families = {"all"};

  friend bool operator==(const JobConfig&, const JobConfig&) = default;
};

/// Flat `key = value` lines, `#` comments, and an optional `betti:` block
/// of `degree rank` lines. Throws ConfigError with the offending line.
JobConfig parse_config(std::istream& in);

/// Checks that the parameters match the family. Throws ConfigError.
void validate(const JobConfig& config);

FamilyDescriptor make_family(const JobConfig& config);

struct CellReport {
  int p = 0, q = 0;
  std::uint64_t dim = 0;
  std::vector<std::string> labels;
  friend bool operator==(const CellReport&, const CellReport&) = default;
};

struct RankReport {
  int p = 0, q = 0;
  std::uint64_t rank = 0;
  friend bool operator==(const RankReport&, const RankReport&) = default;
};

struct PageReport {
  int page = 1;
  std::vector<CellReport> cells;
  std::vector<RankReport> differential_ranks;
  std::optional<int> open_column;
  std::int64_t euler = 0;
  friend bool operator==(const PageReport&, const PageReport&) = default;
};

struct BettiReport {
  std::string role;  // abutment | dual
  std::string kind;
  GradedDims dims;
  bool converged_assumed = false;
  std::optional<int> valid_up_to_degree;
  std::optional<int> valid_from_degree;
  std::optional<int> duality_dim;
  friend bool operator==(const BettiReport&, const BettiReport&) = default;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct FamilyReport {
  std::string name;
  std::map<std::string, int> params;
  int filter_gap = 1;
  int p_max = 0;
  std::string e1_kind;
  std::string convergence;
  std::optional<int> duality_dim;
  bool degeneration_assumed = false;
  std::string degeneration_justification;
  std::vector<std::string> pullback_template;
  friend bool operator==(const FamilyReport&, const FamilyReport&) = default;
};

struct JobReport {
  std::string schema = kReportSchema;
  std::string command;
  JobConfig config;
  std::optional<FamilyReport> family;
  std::vector<PageReport> pages;
  std::vector<BettiReport> betti;
  std::vector<CheckResult> checks;
  std::int64_t duration_ms = 0;

  bool all_checks_passed() const;
  friend bool operator==(const JobReport&, const JobReport&) = default;
};

JobReport run(const JobConfig& config);

/// Structural checks over the builtin instance matrix (n <= 10, g <= 2,
/// r <= 3) plus the stalk complexes up to `pmax`.
JobReport check(const JobConfig& config);

/// Per-instance checks: d d = 0, face pullbacks, chi(E1) = chi(E2).
std::vector<CheckResult> instance_checks(const FamilyDescriptor& fam, const EngineOptions& options);

/// Differential template and conventions of the configured family.
std::string explain(const JobConfig& config);

std::string to_json(const JobReport& report);
JobReport report_from_json(const std::string& text);
std::string to_text(const JobReport& report);
std::string to_csv(const JobReport& report);
std::string render(const JobReport& report, const std::string& format);

}  // namespace ssfilter
