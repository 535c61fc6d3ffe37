#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace zdl {

enum class OutputFormat { csv, json, plotdata };

const char* to_string(OutputFormat f) noexcept;
OutputFormat parse_output_format(std::string_view name);

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

/// One command's result: a table plus summary fields. CSV and plotdata emit the
/// table; JSON emits both.
struct Report {
  std::string command;
  /// Comment line for plot data naming what is plotted.
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  /// Columns used for the two-column plot output.
  std::size_t plot_x = 0;
  std::size_t plot_y = 1;

  void add_row(std::vector<Cell> row);
};

/// Deterministic rendering: doubles as %.15g, '.' decimal point, ',' delimiter.
std::string render(const Report& report, OutputFormat format);

std::string format_double(double v);

}  // namespace zdl
