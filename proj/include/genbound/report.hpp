#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "genbound/bounds.hpp"
#include "genbound/montecarlo.hpp"
#include "genbound/risk.hpp"

namespace genbound {

struct NamedValue {
  std::string name;
  std::string paper_anchor;
  double value = 0.0;
};

struct NamedRisk {
  std::string name;
  RiskSummary summary;
};

struct NamedEstimate {
  std::string name;
  EstimateWithCI estimate;
};

using ReportItem = std::variant<BoundReport, NamedRisk, NamedEstimate, NamedValue>;

enum class ReportFormat { kJson, kCsv };

ReportFormat parse_report_format(std::string_view name);

struct Report {
  std::vector<ReportItem> items;
  // ISO 8601; omitted under --no-timestamp. The CSV format never carries it.
  std::optional<std::string> timestamp;
};

// Stable field order, reals rendered with 12 significant digits. JSON is a
// single object with schema_version "1"; CSV has one fixed superset header
// row and RFC 4180 quoting.
std::string emit_report(const Report& report, ReportFormat format);

// Inverse of emit_report at 12-significant-digit resolution.
Report parse_report(std::string_view text, ReportFormat format);

// True if any bound check in the report failed.
bool report_has_violation(const Report& report);

// "%.12g" rendering used for every real in a report.
std::string format_real(double value);

}  // namespace genbound
