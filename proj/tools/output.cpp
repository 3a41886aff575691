#include "output.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace chshlab::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const { return v; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

void check_shape(const Report& r) {
  for (const auto& row : r.rows)
    if (row.size() != r.columns.size()) throw std::logic_error("report row has wrong width");
}

}  // namespace

std::string render_csv(const Report& report) {
  check_shape(report);
  std::ostringstream out;
  out << "# config: " << report.config.dump() << "\n";
  out << "# status: " << report.status << "\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i)
    out << (i ? "," : "") << report.columns[i];
  out << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string render_json(const Report& report) {
  check_shape(report);
  nlohmann::ordered_json doc;
  doc["config"] = report.config;
  doc["columns"] = report.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[report.columns[i]] = json_cell(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  doc["status"] = report.status;
  return doc.dump(2) + "\n";
}

}  // namespace chshlab::cli
