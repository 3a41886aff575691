#pragma once

// Tabular CLI output in CSV or JSON. Both formats carry the same run
// configuration, rows and status; doubles are written so that parsing them
// back yields the identical value.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace chshlab::cli {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Report {
  nlohmann::ordered_json config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string status = "ok";

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

std::string format_double(double v);
std::string render_csv(const Report& report);
std::string render_json(const Report& report);

}  // namespace chshlab::cli
