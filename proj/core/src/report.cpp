#include "pgakit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "pgakit/dataset_io.hpp"
#include "pgakit/errors.hpp"

namespace pgakit {

Table& Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    fail(ErrorCode::Validation, "table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
  rows.push_back(std::move(row));
  return *this;
}

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
  tables.push_back(Table{name, std::move(columns), {}});
  return tables.back();
}

void Report::set(const std::string& key, Cell value) {
  for (auto& kv : meta)
    if (kv.first == key) {
      kv.second = std::move(value);
      return;
    }
  meta.emplace_back(key, std::move(value));
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  fail(ErrorCode::Validation, "unknown format '" + s + "' (expected csv or json)");
}

namespace {

std::string json_string(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    switch (c) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      case '\t': o += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          o += buf;
        } else {
          o += c;
        }
    }
  }
  return o + "\"";
}

std::string json_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_double(*d) : "null";
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return json_string(std::get<std::string>(c));
}

std::string csv_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) o += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return o + "\"";
}

}  // namespace

void write_report(std::ostream& out, const Report& r, ReportFormat fmt) {
  if (fmt == ReportFormat::Csv) {
    out << "# command=" << r.command << '\n';
    for (const auto& [k, v] : r.meta) out << "# " << k << '=' << csv_cell(v) << '\n';
    for (const Table& t : r.tables) {
      out << "\n# table " << t.name << '\n';
      for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
      out << '\n';
      for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
      }
    }
    return;
  }
  out << "{\"command\": " << json_string(r.command) << ",\n \"meta\": {";
  for (size_t i = 0; i < r.meta.size(); ++i)
    out << (i ? ", " : "") << json_string(r.meta[i].first) << ": " << json_cell(r.meta[i].second);
  out << "},\n \"tables\": {";
  for (size_t ti = 0; ti < r.tables.size(); ++ti) {
    const Table& t = r.tables[ti];
    out << (ti ? ",\n  " : "\n  ") << json_string(t.name) << ": [";
    for (size_t ri = 0; ri < t.rows.size(); ++ri) {
      out << (ri ? ",\n   {" : "\n   {");
      for (size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? ", " : "") << json_string(t.columns[c]) << ": " << json_cell(t.rows[ri][c]);
      out << '}';
    }
    out << ']';
  }
  out << "}}\n";
}

void write_report_file(const std::string& path, const Report& r, ReportFormat fmt) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Validation, "cannot write " + path);
  write_report(out, r, fmt);
}

}  // namespace pgakit
