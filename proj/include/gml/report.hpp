#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gml {

// A report cell. monostate renders as an empty CSV field, JSON null and "-"
// in tables.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Throws std::logic_error when the row width does not match the columns.
  void add_row(std::vector<Cell> row);
};

using Entries = std::vector<std::pair<std::string, Cell>>;

// Output of one CLI command. Everything is kept in insertion order so the
// rendered text depends only on the inputs.
struct Report {
  std::string command;
  Entries params;
  std::vector<Table> tables;
  Entries summary;
  std::vector<std::string> notes;

  Table& add_table(std::string name, std::vector<std::string> columns);
};

enum class OutputFormat { kTable, kCsv, kJson };

// "table", "csv" or "json"; throws DomainError otherwise.
OutputFormat parse_output_format(const std::string& name);

// Doubles are printed with 12 significant digits; non-finite values become
// the strings "inf", "-inf" and "nan".
std::string format_number(double v);

std::string render_table(const Report& report);
// One block per table: "# <name>", the column header, then the rows. The
// summary follows as a "# summary" block with key,value rows.
std::string render_csv(const Report& report);
// {"command", "params", "tables": [{"name", "columns", "rows"}], "summary",
// "notes"}; see schema/report.schema.json.
std::string render_json(const Report& report);
std::string render(const Report& report, OutputFormat format);

}  // namespace gml
