#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pgakit {

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table& add(std::vector<Cell> row);
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<Table> tables;

  Table& table(const std::string& name, std::vector<std::string> columns);
  void set(const std::string& key, Cell value);
};

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(const std::string& s);

// JSON: {"command":..,"meta":{..},"tables":{name:[{col:val,..},..]}}.
// CSV: "# key=value" meta lines, then per table a "# table <name>" line,
// a header and the rows, tables separated by blank lines.
void write_report(std::ostream& out, const Report& r, ReportFormat fmt);
void write_report_file(const std::string& path, const Report& r, ReportFormat fmt);

}  // namespace pgakit
