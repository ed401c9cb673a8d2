#include "genbound/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "genbound/errors.hpp"

namespace genbound {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* const kCsvHeader =
    "kind,name,paper_anchor,inputs,bound_value,measured_value,satisfied,slack,"
    "value,mean,std_error,trials,ci95_lo,ci95_hi,expected_empirical,"
    "expected_population,gen_error,abs_gen_error,excess_risk";
constexpr std::size_t kCsvColumns = 19;

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string inputs_to_string(const std::vector<std::pair<std::string, double>>& inputs) {
  std::string out;
  for (const auto& [key, value] : inputs) {
    if (!out.empty()) out += ';';
    out += key + "=" + format_real(value);
  }
  return out;
}

std::vector<std::pair<std::string, double>> inputs_from_string(const std::string& text) {
  std::vector<std::pair<std::string, double>> inputs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("", "bad inputs cell: " + item);
    inputs.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
    pos = end + 1;
  }
  return inputs;
}

// --- JSON emission (hand-rolled so real rendering and field order are ours)

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
}

struct JsonObjectWriter {
  std::string& out;
  bool first = true;

  void key(const std::string& name) {
    if (!first) out += ',';
    first = false;
    append_json_string(out, name);
    out += ':';
  }
  void field(const std::string& name, const std::string& value) {
    key(name);
    append_json_string(out, value);
  }
  void field(const std::string& name, double value) {
    key(name);
    out += format_real(value);
  }
  void field(const std::string& name, bool value) {
    key(name);
    out += value ? "true" : "false";
  }
  void field(const std::string& name, std::uint64_t value) {
    key(name);
    out += std::to_string(value);
  }
};

void emit_item_json(std::string& out, const ReportItem& item) {
  out += '{';
  JsonObjectWriter w{out};
  if (const auto* bound = std::get_if<BoundReport>(&item)) {
    w.field("kind", std::string("bound"));
    w.field("name", bound->name);
    w.field("paper_anchor", bound->paper_anchor);
    w.key("inputs");
    out += '{';
    JsonObjectWriter inputs{out};
    for (const auto& [key, value] : bound->inputs) inputs.field(key, value);
    out += '}';
    w.field("bound_value", bound->bound_value);
    if (bound->measured_value) w.field("measured_value", *bound->measured_value);
    if (bound->satisfied) w.field("satisfied", *bound->satisfied);
    if (bound->slack) w.field("slack", *bound->slack);
  } else if (const auto* risk = std::get_if<NamedRisk>(&item)) {
    w.field("kind", std::string("risk"));
    w.field("name", risk->name);
    w.field("expected_empirical", risk->summary.expected_empirical);
    w.field("expected_population", risk->summary.expected_population);
    w.field("gen_error", risk->summary.gen_error);
    w.field("abs_gen_error", risk->summary.abs_gen_error);
    w.field("excess_risk", risk->summary.excess_risk);
  } else if (const auto* est = std::get_if<NamedEstimate>(&item)) {
    w.field("kind", std::string("estimate"));
    w.field("name", est->name);
    w.field("mean", est->estimate.mean);
    w.field("std_error", est->estimate.std_error);
    w.field("trials", est->estimate.trials);
    w.field("ci95_lo", est->estimate.ci_lo);
    w.field("ci95_hi", est->estimate.ci_hi);
  } else {
    const auto& value = std::get<NamedValue>(item);
    w.field("kind", std::string("value"));
    w.field("name", value.name);
    if (!value.paper_anchor.empty()) w.field("paper_anchor", value.paper_anchor);
    w.field("value", value.value);
  }
  out += '}';
}

std::string emit_json(const Report& report) {
  std::string out = "{";
  JsonObjectWriter w{out};
  w.field("schema_version", std::string("1"));
  if (report.timestamp) w.field("timestamp", *report.timestamp);
  w.key("reports");
  out += '[';
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    if (i) out += ',';
    emit_item_json(out, report.items[i]);
  }
  out += "]}";
  out += '\n';
  return out;
}

// --- CSV

void emit_item_csv(std::string& out, const ReportItem& item) {
  std::vector<std::string> cells(kCsvColumns);
  if (const auto* bound = std::get_if<BoundReport>(&item)) {
    cells[0] = "bound";
    cells[1] = bound->name;
    cells[2] = bound->paper_anchor;
    cells[3] = inputs_to_string(bound->inputs);
    cells[4] = format_real(bound->bound_value);
    if (bound->measured_value) cells[5] = format_real(*bound->measured_value);
    if (bound->satisfied) cells[6] = *bound->satisfied ? "true" : "false";
    if (bound->slack) cells[7] = format_real(*bound->slack);
  } else if (const auto* risk = std::get_if<NamedRisk>(&item)) {
    cells[0] = "risk";
    cells[1] = risk->name;
    cells[14] = format_real(risk->summary.expected_empirical);
    cells[15] = format_real(risk->summary.expected_population);
    cells[16] = format_real(risk->summary.gen_error);
    cells[17] = format_real(risk->summary.abs_gen_error);
    cells[18] = format_real(risk->summary.excess_risk);
  } else if (const auto* est = std::get_if<NamedEstimate>(&item)) {
    cells[0] = "estimate";
    cells[1] = est->name;
    cells[9] = format_real(est->estimate.mean);
    cells[10] = format_real(est->estimate.std_error);
    cells[11] = std::to_string(est->estimate.trials);
    cells[12] = format_real(est->estimate.ci_lo);
    cells[13] = format_real(est->estimate.ci_hi);
  } else {
    const auto& value = std::get<NamedValue>(item);
    cells[0] = "value";
    cells[1] = value.name;
    cells[2] = value.paper_anchor;
    cells[8] = format_real(value.value);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(cells[i]);
  }
  out += "\r\n";
}

std::string emit_csv(const Report& report) {
  std::string out = kCsvHeader;
  out += "\r\n";
  for (const auto& item : report.items) emit_item_csv(out, item);
  return out;
}

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

Report parse_csv(std::string_view text) {
  std::istringstream stream{std::string(text)};
  std::string line;
  if (!std::getline(stream, line)) throw ConfigError("", "empty CSV report");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != kCsvHeader) throw ConfigError("", "unexpected CSV header");

  Report report;
  while (std::getline(stream, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_record(line);
    if (cells.size() != kCsvColumns) {
      throw ConfigError("", "CSV row has " + std::to_string(cells.size()) + " cells");
    }
    const std::string& kind = cells[0];
    if (kind == "bound") {
      BoundReport bound;
      bound.name = cells[1];
      bound.paper_anchor = cells[2];
      bound.inputs = inputs_from_string(cells[3]);
      bound.bound_value = std::stod(cells[4]);
      if (!cells[5].empty()) bound.measured_value = std::stod(cells[5]);
      if (!cells[6].empty()) bound.satisfied = cells[6] == "true";
      if (!cells[7].empty()) bound.slack = std::stod(cells[7]);
      report.items.push_back(std::move(bound));
    } else if (kind == "risk") {
      NamedRisk risk;
      risk.name = cells[1];
      risk.summary.expected_empirical = std::stod(cells[14]);
      risk.summary.expected_population = std::stod(cells[15]);
      risk.summary.gen_error = std::stod(cells[16]);
      risk.summary.abs_gen_error = std::stod(cells[17]);
      risk.summary.excess_risk = std::stod(cells[18]);
      report.items.push_back(std::move(risk));
    } else if (kind == "estimate") {
      NamedEstimate est;
      est.name = cells[1];
      est.estimate.mean = std::stod(cells[9]);
      est.estimate.std_error = std::stod(cells[10]);
      est.estimate.trials = std::stoull(cells[11]);
      est.estimate.ci_lo = std::stod(cells[12]);
      est.estimate.ci_hi = std::stod(cells[13]);
      report.items.push_back(std::move(est));
    } else if (kind == "value") {
      NamedValue value;
      value.name = cells[1];
      value.paper_anchor = cells[2];
      value.value = std::stod(cells[8]);
      report.items.push_back(std::move(value));
    } else {
      throw ConfigError("", "unknown report kind: " + kind);
    }
  }
  return report;
}

Report parse_json(std::string_view text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", e.what());
  }
  Report report;
  if (root.contains("timestamp")) {
    report.timestamp = root.at("timestamp").get<std::string>();
  }
  for (const auto& item : root.at("reports")) {
    const std::string kind = item.at("kind").get<std::string>();
    if (kind == "bound") {
      BoundReport bound;
      bound.name = item.at("name").get<std::string>();
      bound.paper_anchor = item.at("paper_anchor").get<std::string>();
      for (const auto& [key, value] : item.at("inputs").items()) {
        bound.inputs.emplace_back(key, value.get<double>());
      }
      bound.bound_value = item.at("bound_value").get<double>();
      if (item.contains("measured_value")) {
        bound.measured_value = item.at("measured_value").get<double>();
      }
      if (item.contains("satisfied")) {
        bound.satisfied = item.at("satisfied").get<bool>();
      }
      if (item.contains("slack")) bound.slack = item.at("slack").get<double>();
      report.items.push_back(std::move(bound));
    } else if (kind == "risk") {
      NamedRisk risk;
      risk.name = item.at("name").get<std::string>();
      risk.summary.expected_empirical = item.at("expected_empirical").get<double>();
      risk.summary.expected_population = item.at("expected_population").get<double>();
      risk.summary.gen_error = item.at("gen_error").get<double>();
      risk.summary.abs_gen_error = item.at("abs_gen_error").get<double>();
      risk.summary.excess_risk = item.at("excess_risk").get<double>();
      report.items.push_back(std::move(risk));
    } else if (kind == "estimate") {
      NamedEstimate est;
      est.name = item.at("name").get<std::string>();
      est.estimate.mean = item.at("mean").get<double>();
      est.estimate.std_error = item.at("std_error").get<double>();
      est.estimate.trials = item.at("trials").get<std::uint64_t>();
      est.estimate.ci_lo = item.at("ci95_lo").get<double>();
      est.estimate.ci_hi = item.at("ci95_hi").get<double>();
      report.items.push_back(std::move(est));
    } else if (kind == "value") {
      NamedValue value;
      value.name = item.at("name").get<std::string>();
      if (item.contains("paper_anchor")) {
        value.paper_anchor = item.at("paper_anchor").get<std::string>();
      }
      value.value = item.at("value").get<double>();
      report.items.push_back(std::move(value));
    } else {
      throw ConfigError("", "unknown report kind: " + kind);
    }
  }
  return report;
}

}  // namespace

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw ConfigError("output.format", "must be \"json\" or \"csv\"");
}

std::string emit_report(const Report& report, ReportFormat format) {
  if (report.items.empty()) throw std::invalid_argument("empty report");
  return format == ReportFormat::kJson ? emit_json(report) : emit_csv(report);
}

Report parse_report(std::string_view text, ReportFormat format) {
  return format == ReportFormat::kJson ? parse_json(text) : parse_csv(text);
}

bool report_has_violation(const Report& report) {
  for (const auto& item : report.items) {
    if (const auto* bound = std::get_if<BoundReport>(&item)) {
      if (bound->satisfied && !*bound->satisfied) return true;
    }
  }
  return false;
}

}  // namespace genbound
