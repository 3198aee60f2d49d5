// Copyright 2026 The Datacube Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "datacube/cli/render.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "datacube/cli/csv.h"
#include "datacube/error.h"
#include "json.hpp"

namespace datacube::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string FlagName(const std::string& column) {
  return "GROUPING(" + column + ")";
}

bool IsFlagColumn(const ResultTable& table, std::size_t c) {
  return std::any_of(table.flags.begin(), table.flags.end(),
                     [c](const GroupingColumn& g) { return g.flag_column == c; });
}

std::size_t ColumnIndex(const Schema& schema, const std::string& name) {
  std::optional<std::size_t> c = schema.Find(name);
  if (!c) Fail(ErrorCode::kUnknownColumn, "no column named '" + name + "'");
  return *c;
}

Json ToJson(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kNull:
    case ValueKind::kAll: return nullptr;
    case ValueKind::kBoolean: return v.as_bool();
    case ValueKind::kInteger: return v.as_int();
    case ValueKind::kReal:
      if (!std::isfinite(v.as_real())) return v.ToString();
      return v.as_real();
    case ValueKind::kText: return v.as_text();
  }
  return nullptr;
}

Value FromJson(const Json& j) {
  if (j.is_null()) return Value::Null();
  if (j.is_boolean()) return Value::Bool(j.get<bool>());
  if (j.is_number_integer()) return Value::Int(j.get<std::int64_t>());
  if (j.is_number()) return Value::Real(j.get<double>());
  if (j.is_string()) return Value::Text(j.get<std::string>());
  Fail(ErrorCode::kInvalidArgument, "unexpected JSON value " + j.dump());
}

// Pads every cell of `grid` to its column width. Column 0 and non-numeric
// cells are left-aligned.
std::string Align(const std::vector<std::vector<std::string>>& grid,
                  const std::vector<std::vector<bool>>& right,
                  bool rule_after_header) {
  std::vector<std::size_t> width;
  for (const auto& row : grid) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      if (c) line += "  ";
      const std::string& cell = grid[r][c];
      std::string pad(width[c] - cell.size(), ' ');
      line += right[r][c] ? pad + cell : cell + pad;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
    if (r == 0 && rule_after_header) {
      std::string rule;
      for (std::size_t c = 0; c < width.size(); ++c) {
        if (c) rule += "  ";
        rule += std::string(width[c], '-');
      }
      out += rule + '\n';
    }
  }
  return out;
}

}  // namespace

Format ParseFormat(std::string_view name) {
  static const std::pair<std::string_view, Format> kFormats[] = {
      {"table", Format::kTable}, {"grouping", Format::kGrouping},
      {"csv", Format::kCsv},     {"json", Format::kJson},
      {"crosstab", Format::kCrosstab},
  };
  for (const auto& [n, f] : kFormats) {
    if (EqualsIgnoreCase(n, name)) return f;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown format '" + std::string(name) +
           "' (expected table, grouping, csv, json or crosstab)");
}

std::string_view FormatName(Format format) {
  switch (format) {
    case Format::kTable: return "table";
    case Format::kGrouping: return "grouping";
    case Format::kCsv: return "csv";
    case Format::kJson: return "json";
    case Format::kCrosstab: return "crosstab";
  }
  return "?";
}

ResultTable FromCube(const CubeResult& result) {
  ResultTable t{result.relation, {}, {}};
  for (std::size_t c = 0; c < result.grouping_width; ++c) {
    t.dimensions.push_back(c);
  }
  return t;
}

ResultTable FromQuery(const QueryResult& result) {
  ResultTable t{result.relation, {}, result.grouping_columns};
  const Schema& schema = result.relation.schema();
  std::set<std::size_t> seen;
  for (const std::string& name : result.grouping_names) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (EqualsIgnoreCase(schema[c].name, name) && seen.insert(c).second) {
        t.dimensions.push_back(c);
        break;
      }
    }
  }
  for (const GroupingColumn& g : result.grouping_columns) {
    if (seen.insert(g.value_column).second) {
      t.dimensions.push_back(g.value_column);
    }
  }
  return t;
}

std::string DisplayString(const Value& v) {
  if (v.kind() == ValueKind::kText &&
      (v.as_text() == "ALL" || v.as_text() == "NULL")) {
    return "\"" + v.as_text() + "\"";
  }
  return v.ToString();
}

std::string RenderTable(const Relation& relation) {
  const Schema& schema = relation.schema();
  std::vector<std::vector<std::string>> grid(1);
  std::vector<std::vector<bool>> right(1);
  for (std::size_t c = 0; c < schema.size(); ++c) {
    grid[0].push_back(schema[c].name);
    right[0].push_back(IsNumeric(schema[c].type));
  }
  for (const Tuple& row : relation.rows()) {
    grid.emplace_back();
    right.emplace_back();
    for (std::size_t c = 0; c < row.size(); ++c) {
      grid.back().push_back(DisplayString(row[c]));
      right.back().push_back(IsNumeric(schema[c].type));
    }
  }
  return Align(grid, right, /*rule_after_header=*/true);
}

Relation WithGroupingFlags(const ResultTable& table) {
  Relation base = ToNullEmulation(table.relation);
  std::vector<std::size_t> add;
  for (std::size_t d : table.dimensions) {
    bool flagged = std::any_of(
        table.flags.begin(), table.flags.end(),
        [d](const GroupingColumn& g) { return g.value_column == d; });
    if (!flagged) add.push_back(d);
  }
  std::vector<Column> columns = base.schema().columns();
  for (std::size_t d : add) {
    columns.push_back({FlagName(columns[d].name), DataType::kBoolean, {}});
  }
  Relation out{Schema(std::move(columns))};
  for (std::size_t r = 0; r < base.size(); ++r) {
    Tuple row = base[r];
    for (std::size_t d : add) {
      row.push_back(Value::Bool(table.relation[r][d].is_all()));
    }
    out.Append(std::move(row));
  }
  return out;
}

Relation RestoreAllTokens(const Relation& with_flags) {
  const Schema& schema = with_flags.schema();
  std::vector<GroupingColumn> pairs;
  std::vector<bool> drop(schema.size(), false);
  for (std::size_t c = 0; c < schema.size(); ++c) {
    const std::string& name = schema[c].name;
    if (name.size() < 11 || !EqualsIgnoreCase(name.substr(0, 9), "GROUPING(") ||
        name.back() != ')') {
      continue;
    }
    std::optional<std::size_t> v =
        schema.Find(name.substr(9, name.size() - 10));
    if (!v || schema[c].type != DataType::kBoolean) continue;
    pairs.push_back({*v, c});
    drop[c] = true;
  }
  Relation restored = ToAllTokens(with_flags, pairs);
  std::vector<Column> columns;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (!drop[c]) columns.push_back(schema[c]);
  }
  Relation out{Schema(std::move(columns))};
  for (const Tuple& row : restored.rows()) {
    Tuple kept;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!drop[c]) kept.push_back(row[c]);
    }
    out.Append(std::move(kept));
  }
  return out;
}

std::string RenderJson(const ResultTable& table) {
  const Schema& schema = table.relation.schema();
  Json rows = Json::array();
  for (const Tuple& row : table.relation.rows()) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      obj[schema[c].name] = ToJson(row[c]);
    }
    Json mask = Json::array();
    for (std::size_t d : table.dimensions) mask.push_back(row[d].is_all());
    obj["grouping"] = std::move(mask);
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

Relation ParseJsonResult(std::string_view json,
                         std::span<const std::string> dimensions) {
  Json rows;
  try {
    rows = Json::parse(json);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("malformed JSON: ") + e.what());
  }
  if (!rows.is_array()) Fail(ErrorCode::kInvalidArgument, "expected an array");

  std::vector<std::string> names;
  std::vector<std::vector<Value>> cols;
  for (const Json& obj : rows) {
    if (!obj.is_object() || !obj.contains("grouping") ||
        !obj["grouping"].is_array() ||
        obj["grouping"].size() != dimensions.size()) {
      Fail(ErrorCode::kInvalidArgument, "malformed row " + obj.dump());
    }
    if (names.empty()) {
      for (const auto& [k, v] : obj.items()) {
        if (k != "grouping") names.push_back(k);
      }
      cols.resize(names.size());
    }
    if (obj.size() != names.size() + 1) {
      Fail(ErrorCode::kInvalidArgument, "ragged row " + obj.dump());
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (!obj.contains(names[c])) {
        Fail(ErrorCode::kInvalidArgument, "row lacks '" + names[c] + "'");
      }
      cols[c].push_back(FromJson(obj[names[c]]));
    }
  }

  std::vector<Column> columns;
  for (std::size_t c = 0; c < names.size(); ++c) {
    bool any = false, ints = true, nums = true, bools = true;
    for (const Value& v : cols[c]) {
      if (v.is_null()) continue;
      any = true;
      ints = ints && v.kind() == ValueKind::kInteger;
      nums = nums && v.is_numeric();
      bools = bools && v.kind() == ValueKind::kBoolean;
    }
    DataType type = !any   ? DataType::kText
                    : ints ? DataType::kInteger
                    : nums ? DataType::kReal
                    : bools ? DataType::kBoolean
                            : DataType::kText;
    columns.push_back({names[c], type, {}});
  }
  Schema schema(std::move(columns));
  std::vector<std::size_t> dims;
  for (const std::string& d : dimensions) dims.push_back(schema.IndexOf(d));

  Relation out{schema};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Tuple row;
    for (std::size_t c = 0; c < names.size(); ++c) row.push_back(cols[c][r]);
    const Json& mask = rows[r]["grouping"];
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (mask[i].is_boolean() && mask[i].get<bool>()) {
        row[dims[i]] = Value::All();
      }
    }
    out.Append(std::move(row));
  }
  return out;
}

Crosstab BuildCrosstab(const ResultTable& table,
                       const CrosstabOptions& options) {
  const Relation& rel = table.relation;
  const Schema& schema = rel.schema();
  const std::size_t rc = ColumnIndex(schema, options.rows);
  const std::size_t cc = ColumnIndex(schema, options.cols);
  if (rc == cc) {
    Fail(ErrorCode::kNotTwoDimensional, "rows and columns name the same column");
  }
  auto is_dim = [&](std::size_t c) {
    return std::find(table.dimensions.begin(), table.dimensions.end(), c) !=
           table.dimensions.end();
  };
  for (std::size_t c : {rc, cc}) {
    if (!is_dim(c)) {
      Fail(ErrorCode::kNotTwoDimensional,
           "'" + schema[c].name + "' is not a grouping column");
    }
  }

  std::vector<std::pair<std::size_t, Value>> pins;
  std::string corner;
  for (const auto& [name, text] : options.fixes) {
    std::size_t c = ColumnIndex(schema, name);
    if (c == rc || c == cc) {
      Fail(ErrorCode::kNotTwoDimensional,
           "cannot fix '" + name + "': it is a crosstab axis");
    }
    pins.emplace_back(c, ParseCoordinate(text, schema[c].type));
    if (!corner.empty()) corner += ", ";
    corner += DisplayString(pins.back().second);
  }
  if (corner.empty()) corner = schema[rc].name;

  std::vector<std::size_t> measures;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (is_dim(c) || IsFlagColumn(table, c)) continue;
    measures.push_back(c);
  }
  for (std::size_t d : table.dimensions) {
    bool pinned = std::any_of(pins.begin(), pins.end(),
                              [d](const auto& p) { return p.first == d; });
    if (d != rc && d != cc && !pinned) {
      Fail(ErrorCode::kNotTwoDimensional,
           "grouping column '" + schema[d].name +
               "' is neither an axis nor fixed (use --fix " + schema[d].name +
               "=value)");
    }
  }
  if (measures.size() != 1) {
    Fail(ErrorCode::kMultipleAggregates,
         "a crosstab shows exactly one aggregate, the result has " +
             std::to_string(measures.size()));
  }
  const std::size_t mc = measures.front();

  std::set<Value, ValueLess> row_values, col_values;
  std::map<std::pair<Value, Value>, Value, decltype([](const auto& a,
                                                       const auto& b) {
             int c = CompareTotal(a.first, b.first);
             return c != 0 ? c < 0 : CompareTotal(a.second, b.second) < 0;
           })>
      cells;
  for (const Tuple& row : rel.rows()) {
    bool keep = std::all_of(pins.begin(), pins.end(), [&](const auto& p) {
      return row[p.first] == p.second;
    });
    if (!keep) continue;
    if (!cells.emplace(std::pair(row[rc], row[cc]), row[mc]).second) {
      Fail(ErrorCode::kNotTwoDimensional,
           "more than one row for (" + DisplayString(row[rc]) + ", " +
               DisplayString(row[cc]) + ")");
    }
    if (!row[rc].is_all()) row_values.insert(row[rc]);
    if (!row[cc].is_all()) col_values.insert(row[cc]);
  }
  row_values.insert(Value::All());
  col_values.insert(Value::All());
  // ValueLess puts All first; totals go last.
  auto ordered = [](const std::set<Value, ValueLess>& s) {
    std::vector<Value> v(s.begin(), s.end());
    std::stable_partition(v.begin(), v.end(),
                          [](const Value& x) { return !x.is_all(); });
    return v;
  };
  Crosstab grid{corner, ordered(row_values), ordered(col_values), {}};
  for (const Value& r : grid.row_values) {
    std::vector<std::optional<Value>> line;
    for (const Value& c : grid.col_values) {
      auto it = cells.find(std::pair(r, c));
      line.push_back(it == cells.end() ? std::nullopt
                                       : std::optional<Value>(it->second));
    }
    grid.cells.push_back(std::move(line));
  }
  return grid;
}

std::string FormatCrosstab(const Crosstab& grid) {
  auto label = [](const Value& v) {
    return v.is_all() ? std::string("total (ALL)") : DisplayString(v);
  };
  std::vector<std::vector<std::string>> text;
  std::vector<std::vector<bool>> right;
  text.push_back({grid.corner});
  right.push_back({false});
  for (const Value& c : grid.col_values) {
    text[0].push_back(label(c));
    right[0].push_back(true);
  }
  for (std::size_t r = 0; r < grid.row_values.size(); ++r) {
    std::vector<std::string> line = {label(grid.row_values[r])};
    std::vector<bool> align = {false};
    for (const std::optional<Value>& cell : grid.cells[r]) {
      line.push_back(cell ? DisplayString(*cell) : "");
      align.push_back(true);
    }
    text.push_back(std::move(line));
    right.push_back(std::move(align));
  }
  return Align(text, right, /*rule_after_header=*/false);
}

std::string RenderCrosstab(const ResultTable& table,
                           const CrosstabOptions& options) {
  return FormatCrosstab(BuildCrosstab(table, options));
}

std::string Render(const ResultTable& table, Format format,
                   const CrosstabOptions& crosstab) {
  switch (format) {
    case Format::kTable: return RenderTable(table.relation);
    case Format::kGrouping: return RenderTable(WithGroupingFlags(table));
    case Format::kCsv: return FormatCsv(WithGroupingFlags(table));
    case Format::kJson: return RenderJson(table);
    case Format::kCrosstab: return RenderCrosstab(table, crosstab);
  }
  return {};
}

}  // namespace datacube::cli
