#include "gml/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "gml/errors.hpp"

namespace gml {
namespace {

using ordered_json = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string cell_text(const Cell& cell, const char* empty) {
  return std::visit(
      Overloaded{[&](std::monostate) { return std::string(empty); },
                 [](bool b) { return std::string(b ? "true" : "false"); },
                 [](std::int64_t i) { return std::to_string(i); },
                 [](double d) { return format_number(d); },
                 [](const std::string& s) { return s; }},
      cell);
}

ordered_json cell_json(const Cell& cell) {
  return std::visit(
      Overloaded{[](std::monostate) { return ordered_json(nullptr); },
                 [](bool b) { return ordered_json(b); },
                 [](std::int64_t i) { return ordered_json(i); },
                 [](double d) {
                   if (!std::isfinite(d)) return ordered_json(format_number(d));
                   return ordered_json(std::stod(format_number(d)));
                 },
                 [](const std::string& s) { return ordered_json(s); }},
      cell);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

void append_aligned(std::string& out, const std::vector<std::vector<std::string>>& lines) {
  std::vector<std::size_t> width;
  for (const auto& line : lines) {
    width.resize(std::max(width.size(), line.size()), 0);
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  for (const auto& line : lines) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) text += "  ";
      text += fmt::format("{:<{}}", line[i], width[i]);
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error(fmt::format("table {} expects {} cells, got {}", name,
                                       columns.size(), row.size()));
  }
  rows.push_back(std::move(row));
}

Table& Report::add_table(std::string name, std::vector<std::string> columns) {
  tables.push_back(Table{std::move(name), std::move(columns), {}});
  return tables.back();
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "table") return OutputFormat::kTable;
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw DomainError(fmt::format("unknown format '{}' (table, csv or json)", name));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  return fmt::format("{:.12g}", v);
}

std::string render_table(const Report& report) {
  std::string out = fmt::format("== {} ==\n", report.command);
  if (!report.params.empty()) {
    std::vector<std::vector<std::string>> lines;
    for (const auto& [key, value] : report.params) lines.push_back({key, cell_text(value, "-")});
    out += "\nparameters\n";
    append_aligned(out, lines);
  }
  for (const auto& table : report.tables) {
    std::vector<std::vector<std::string>> lines{table.columns};
    for (const auto& row : table.rows) {
      std::vector<std::string> line;
      for (const auto& cell : row) line.push_back(cell_text(cell, "-"));
      lines.push_back(std::move(line));
    }
    out += fmt::format("\n{}\n", table.name);
    append_aligned(out, lines);
  }
  if (!report.summary.empty()) {
    std::vector<std::vector<std::string>> lines;
    for (const auto& [key, value] : report.summary) lines.push_back({key, cell_text(value, "-")});
    out += "\nsummary\n";
    append_aligned(out, lines);
  }
  if (!report.notes.empty()) {
    out += "\nnotes\n";
    for (const auto& note : report.notes) out += "  " + note + "\n";
  }
  return out;
}

std::string render_csv(const Report& report) {
  std::string out;
  for (const auto& table : report.tables) {
    if (!out.empty()) out += "\n";
    out += "# " + table.name + "\n";
    out += csv_line(table.columns);
    for (const auto& row : table.rows) {
      std::vector<std::string> fields;
      for (const auto& cell : row) fields.push_back(cell_text(cell, ""));
      out += csv_line(fields);
    }
  }
  if (!report.summary.empty()) {
    if (!out.empty()) out += "\n";
    out += "# summary\n";
    out += csv_line({"key", "value"});
    for (const auto& [key, value] : report.summary) out += csv_line({key, cell_text(value, "")});
  }
  return out;
}

std::string render_json(const Report& report) {
  ordered_json j;
  j["command"] = report.command;
  j["params"] = ordered_json::object();
  for (const auto& [key, value] : report.params) j["params"][key] = cell_json(value);
  j["tables"] = ordered_json::array();
  for (const auto& table : report.tables) {
    ordered_json t;
    t["name"] = table.name;
    t["columns"] = table.columns;
    t["rows"] = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json r = ordered_json::array();
      for (const auto& cell : row) r.push_back(cell_json(cell));
      t["rows"].push_back(std::move(r));
    }
    j["tables"].push_back(std::move(t));
  }
  j["summary"] = ordered_json::object();
  for (const auto& [key, value] : report.summary) j["summary"][key] = cell_json(value);
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

std::string render(const Report& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::kTable:
      return render_table(report);
    case OutputFormat::kCsv:
      return render_csv(report);
    case OutputFormat::kJson:
      return render_json(report);
  }
  return "";
}

}  // namespace gml
