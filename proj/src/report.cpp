#include "edlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace edlab::harness {

bool Metric::passed() const { return std::isfinite(value) && value <= tolerance; }

bool RunReport::passed() const {
  if (metrics.empty()) throw std::logic_error("run report for '" + scenario + "' has no metrics");
  for (const Metric& m : metrics) {
    if (!m.passed()) return false;
  }
  return true;
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "text") return ReportFormat::text;
  throw std::invalid_argument("unknown report format '" + name + "' (json, text)");
}

namespace {

std::string sci(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string emit_report(const RunReport& r, ReportFormat format) {
  const bool ok = r.passed();
  if (format == ReportFormat::json) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = "edlab";
    j["version"] = r.version;
    j["scenario"] = r.scenario;
    j["experiment"] = r.experiment;
    j["seed"] = r.seed;
    j["verdict"] = ok ? "pass" : "fail";
    nlohmann::ordered_json metrics = nlohmann::ordered_json::array();
    for (const Metric& m : r.metrics) {
      nlohmann::ordered_json e;
      e["name"] = m.name;
      if (std::isfinite(m.value)) {
        e["value"] = m.value;
      } else {
        e["value"] = nullptr;
      }
      e["tolerance"] = m.tolerance;
      e["verdict"] = m.passed() ? "pass" : "fail";
      metrics.push_back(e);
    }
    j["metrics"] = metrics;
    j["artifacts"] = r.artifacts;
    j["config"] = r.config;
    return j.dump(2) + "\n";
  }

  std::string out;
  out += "edlab " + r.version + " report (schema " + std::to_string(kReportSchemaVersion) + ")\n";
  out += "scenario:   " + r.scenario + "\n";
  out += "experiment: " + r.experiment + "\n";
  out += "seed:       " + std::to_string(r.seed) + "\n\n";
  std::size_t width = 6;
  for (const Metric& m : r.metrics) width = std::max(width, m.name.size());
  width += 2;
  out += pad("metric", width) + pad("value", 16) + pad("tolerance", 16) + "verdict\n";
  for (const Metric& m : r.metrics)
    out += pad(m.name, width) + pad(sci(m.value), 16) + pad(sci(m.tolerance), 16) + (m.passed() ? "pass" : "fail") + "\n";
  out += "\nverdict: ";
  out += ok ? "pass\n" : "fail\n";
  if (!r.artifacts.empty()) {
    out += "artifacts:";
    for (const auto& a : r.artifacts) out += " " + a;
    out += "\n";
  }
  return out;
}

void write_field_csv(std::ostream& out, const std::vector<const GridField*>& fields,
                     const std::vector<std::string>& columns) {
  if (fields.empty() || fields.size() != columns.size())
    throw std::invalid_argument("write_field_csv: need one column name per field");
  const Grid& g = fields[0]->grid();
  for (const GridField* f : fields) require_same_grid(g, f->grid(), "write_field_csv");
  for (std::size_t A = 0; A < g.dim(); ++A) out << 'x' << A << ',';
  for (std::size_t c = 0; c < columns.size(); ++c) out << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t A = 0; A < g.dim(); ++A) out << g.node_coordinate(i, A) << ',';
    for (std::size_t c = 0; c < fields.size(); ++c) out << (*fields[c])[i] << (c + 1 < fields.size() ? ',' : '\n');
  }
  out.precision(old);
}

}  // namespace edlab::harness
