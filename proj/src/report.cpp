#include "zdl/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "zdl/errors.hpp"

namespace zdl {

const char* to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::plotdata: return "plotdata";
  }
  return "unknown";
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "plotdata" || name == "plot") return OutputFormat::plotdata;
  throw ParameterError("unknown output format '" + std::string(name) + "'");
}

void Report::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("report row width does not match its header");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return v;
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

}  // namespace

std::string render(const Report& report, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::csv: {
      for (std::size_t i = 0; i < report.columns.size(); ++i)
        out << (i ? "," : "") << csv_field(report.columns[i]);
      out << '\n';
      for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
        out << '\n';
      }
      break;
    }
    case OutputFormat::json: {
      nlohmann::ordered_json j;
      j["command"] = report.command;
      j["summary"] = report.summary;
      j["columns"] = report.columns;
      auto rows = nlohmann::ordered_json::array();
      for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i) r[report.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(r));
      }
      j["rows"] = std::move(rows);
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::plotdata: {
      if (report.plot_x >= report.columns.size() || report.plot_y >= report.columns.size())
        throw Error("plot columns out of range");
      out << "# " << report.title << '\n';
      out << "# " << report.columns[report.plot_x] << ' ' << report.columns[report.plot_y] << '\n';
      for (const auto& row : report.rows)
        out << cell_text(row[report.plot_x]) << ' ' << cell_text(row[report.plot_y]) << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace zdl
