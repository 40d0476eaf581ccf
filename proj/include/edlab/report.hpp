#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "edlab/field.hpp"

namespace edlab::harness {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// One checked quantity. Every metric passes when value <= tolerance; a
/// non-finite value always fails.
struct Metric {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed() const;
};

struct RunReport {
  std::string scenario;
  std::string experiment;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  nlohmann::ordered_json config;       // effective config
  std::vector<Metric> metrics;
  std::vector<std::string> artifacts;  // file names relative to the output directory

  /// False when any metric fails. Throws std::logic_error for an empty metric table.
  bool passed() const;
};

enum class ReportFormat { json, text };

ReportFormat report_format_from_string(const std::string& name);

/// Deterministic serialization: equal reports give identical bytes.
/// Throws std::logic_error when the metric table is empty.
std::string emit_report(const RunReport& report, ReportFormat format);

/// Field snapshot CSV: `x0,...,x{D-1},<column>...`, one row per node. All fields share one grid.
void write_field_csv(std::ostream& out, const std::vector<const GridField*>& fields,
                     const std::vector<std::string>& columns);

}  // namespace edlab::harness
