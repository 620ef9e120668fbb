#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckdml/error.hpp"

namespace ckdml {

enum class ColumnKind { Numeric, Categorical };

/// One column of a table schema. Categorical columns carry their allowed
/// category strings in a fixed order; that order later defines the integer
/// encoding (first category -> 0, second -> 1, ...).
struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  std::vector<std::string> categories;  // non-empty iff Categorical
};

/// A single table cell: a finite number, a category string, or missing.
/// Unparsable numeric tokens become Missing, never a silent zero.
struct Cell {
  enum class Kind { Missing, Number, Category };

  Kind kind = Kind::Missing;
  double number = 0.0;
  std::string category;

  static Cell missing() { return {}; }
  static Cell num(double v) { return {Kind::Number, v, {}}; }
  static Cell cat(std::string v) { return {Kind::Category, 0.0, std::move(v)}; }

  bool is_missing() const { return kind == Kind::Missing; }
  bool operator==(const Cell&) const = default;
};

/// Column-typed in-memory table. Immutable by convention once built; all
/// operations in this library return fresh tables.
struct Table {
  std::vector<ColumnSpec> schema;
  std::vector<std::vector<Cell>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return schema.size(); }

  /// Index of a column by name, or nullopt.
  std::optional<std::size_t> column_index(std::string_view name) const {
    for (std::size_t i = 0; i < schema.size(); ++i) {
      if (schema[i].name == name) return i;
    }
    return std::nullopt;
  }
};

struct DatasetSummary {
  std::size_t n_rows = 0;
  std::size_t n_positive = 0;  // rows labeled ckd
  std::size_t n_negative = 0;  // rows labeled notckd
  std::map<std::string, double> null_ratio_per_column;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

/// Full-token decimal parse; rejects trailing garbage and non-finite values.
inline std::optional<double> parse_number(std::string_view token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parse CSV text against a schema. Header row required; names are matched
/// after trimming. Per-field normalization: surrounding whitespace and tabs
/// are stripped, "" and "?" map to Missing, numeric fields are parsed as
/// decimal reals (garbage tokens become Missing), categorical fields are
/// lower-cased and matched against the column's categories.
inline Table parse_csv(std::string_view text, std::vector<ColumnSpec> schema) {
  Table table;
  table.schema = std::move(schema);

  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(start)
                                : text.substr(start, nl - start);
    start = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (detail::trim(line).empty()) continue;

    const auto fields = detail::split(line, ',');
    if (!header_seen) {
      if (fields.size() != table.schema.size()) {
        throw CsvError("header has " + std::to_string(fields.size()) +
                       " columns, schema expects " +
                       std::to_string(table.schema.size()));
      }
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const auto name = detail::trim(fields[c]);
        if (name != table.schema[c].name) {
          throw CsvError("header column " + std::to_string(c + 1) + " is '" +
                         std::string(name) + "', schema expects '" +
                         table.schema[c].name + "'");
        }
      }
      header_seen = true;
      continue;
    }

    if (fields.size() != table.schema.size()) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(table.schema.size()) + " fields, got " +
                     std::to_string(fields.size()));
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto token = detail::trim(fields[c]);
      if (token.empty() || token == "?") {
        row.push_back(Cell::missing());
        continue;
      }
      const ColumnSpec& col = table.schema[c];
      if (col.kind == ColumnKind::Numeric) {
        const auto v = detail::parse_number(token);
        row.push_back(v ? Cell::num(*v) : Cell::missing());
      } else {
        auto value = detail::lower(token);
        const bool known = std::find(col.categories.begin(), col.categories.end(),
                                     value) != col.categories.end();
        if (!known) {
          throw CsvError("line " + std::to_string(line_no) + ": value '" + value +
                         "' is not a known category of column '" + col.name + "'");
        }
        row.push_back(Cell::cat(std::move(value)));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw CsvError("input has no header row");
  return table;
}

/// Serialize a table back to CSV. Numbers use shortest round-trip formatting,
/// Missing cells are written as "?". parse_csv(to_csv(t), t.schema) == t.
inline std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.schema.size(); ++c) {
    if (c) out += ',';
    out += table.schema[c].name;
  }
  out += '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const Cell& cell = row[c];
      switch (cell.kind) {
        case Cell::Kind::Missing:
          out += '?';
          break;
        case Cell::Kind::Number: {
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, cell.number);
          out.append(buf, ptr);
          break;
        }
        case Cell::Kind::Category:
          out += cell.category;
          break;
      }
    }
    out += '\n';
  }
  return out;
}

/// Class balance and per-column missing-cell ratios. The label column must be
/// Categorical with categories {ckd, notckd}; rows with a missing label are a
/// data error (reported with their count, never silently dropped).
inline DatasetSummary summarize(const Table& table, std::string_view label_column) {
  const auto idx = table.column_index(label_column);
  if (!idx) {
    throw DataError("unknown label column '" + std::string(label_column) + "'");
  }
  const ColumnSpec& label = table.schema[*idx];
  if (label.kind != ColumnKind::Categorical ||
      label.categories != std::vector<std::string>{"ckd", "notckd"}) {
    throw DataError("label column '" + label.name +
                    "' must be categorical with categories {ckd, notckd}");
  }

  DatasetSummary s;
  s.n_rows = table.n_rows();
  std::size_t missing_labels = 0;
  std::vector<std::size_t> nulls(table.n_cols(), 0);
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].is_missing()) ++nulls[c];
    }
    const Cell& cell = row[*idx];
    if (cell.is_missing()) {
      ++missing_labels;
    } else if (cell.category == "ckd") {
      ++s.n_positive;
    } else {
      ++s.n_negative;
    }
  }
  if (missing_labels > 0) {
    throw DataError("label column '" + label.name + "' has " +
                    std::to_string(missing_labels) + " missing cells");
  }
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    s.null_ratio_per_column[table.schema[c].name] =
        s.n_rows == 0 ? 0.0 : static_cast<double>(nulls[c]) / static_cast<double>(s.n_rows);
  }
  return s;
}

/// Built-in schema of the UCI chronic kidney disease file: 24 predictive
/// attributes plus the class column. Category order is the encoding order.
inline std::vector<ColumnSpec> ckd_schema() {
  const std::vector<std::string> yn = {"no", "yes"};
  const std::vector<std::string> abn = {"abnormal", "normal"};
  const std::vector<std::string> pres = {"notpresent", "present"};
  return {
      {"age", ColumnKind::Numeric, {}},
      {"bp", ColumnKind::Numeric, {}},
      {"sg", ColumnKind::Numeric, {}},
      {"al", ColumnKind::Numeric, {}},
      {"su", ColumnKind::Numeric, {}},
      {"rbc", ColumnKind::Categorical, abn},
      {"pc", ColumnKind::Categorical, abn},
      {"pcc", ColumnKind::Categorical, pres},
      {"ba", ColumnKind::Categorical, pres},
      {"bgr", ColumnKind::Numeric, {}},
      {"bu", ColumnKind::Numeric, {}},
      {"sc", ColumnKind::Numeric, {}},
      {"sod", ColumnKind::Numeric, {}},
      {"pot", ColumnKind::Numeric, {}},
      {"hemo", ColumnKind::Numeric, {}},
      {"pcv", ColumnKind::Numeric, {}},
      {"wc", ColumnKind::Numeric, {}},
      {"rc", ColumnKind::Numeric, {}},
      {"htn", ColumnKind::Categorical, yn},
      {"dm", ColumnKind::Categorical, yn},
      {"cad", ColumnKind::Categorical, yn},
      {"appet", ColumnKind::Categorical, {"poor", "good"}},
      {"pe", ColumnKind::Categorical, yn},
      {"ane", ColumnKind::Categorical, yn},
      {"classification", ColumnKind::Categorical, {"ckd", "notckd"}},
  };
}

/// Parse a schema override file: one column per line,
///   name,kind[,cat1|cat2|...]
/// with kind one of "numeric"/"categorical". Blank lines and lines starting
/// with '#' are ignored.
inline std::vector<ColumnSpec> parse_schema(std::string_view text) {
  std::vector<ColumnSpec> schema;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(start)
                                : text.substr(start, nl - start);
    start = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    const auto fields = detail::split(trimmed, ',');
    if (fields.size() < 2 || fields.size() > 3) {
      throw ConfigError("schema line " + std::to_string(line_no) +
                        ": expected name,kind[,categories]");
    }
    ColumnSpec col;
    col.name = std::string(detail::trim(fields[0]));
    const auto kind = detail::lower(detail::trim(fields[1]));
    if (kind == "numeric") {
      col.kind = ColumnKind::Numeric;
      if (fields.size() == 3) {
        throw ConfigError("schema line " + std::to_string(line_no) +
                          ": numeric column '" + col.name + "' lists categories");
      }
    } else if (kind == "categorical") {
      col.kind = ColumnKind::Categorical;
      if (fields.size() != 3) {
        throw ConfigError("schema line " + std::to_string(line_no) +
                          ": categorical column '" + col.name + "' needs categories");
      }
      for (const auto cat : detail::split(fields[2], '|')) {
        col.categories.push_back(detail::lower(detail::trim(cat)));
      }
    } else {
      throw ConfigError("schema line " + std::to_string(line_no) +
                        ": unknown kind '" + kind + "'");
    }
    if (col.name.empty()) {
      throw ConfigError("schema line " + std::to_string(line_no) + ": empty name");
    }
    for (const auto& other : schema) {
      if (other.name == col.name) {
        throw ConfigError("schema line " + std::to_string(line_no) +
                          ": duplicate column '" + col.name + "'");
      }
    }
    schema.push_back(std::move(col));
  }
  return schema;
}

}  // namespace ckdml
