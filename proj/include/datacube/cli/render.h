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

#ifndef DATACUBE_CLI_RENDER_H_
#define DATACUBE_CLI_RENDER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "datacube/grouping/grouping.h"
#include "datacube/model/relation.h"
#include "datacube/query/query.h"

namespace datacube::cli {

enum class Format { kTable, kGrouping, kCsv, kJson, kCrosstab };

// Throws kInvalidArgument.
Format ParseFormat(std::string_view name);
std::string_view FormatName(Format format);

// A result ready for display, with All markers in place.
struct ResultTable {
  Relation relation;
  // Output columns holding grouping keys, in grouping order.
  std::vector<std::size_t> dimensions;
  // GROUPING() columns the result already carries.
  std::vector<GroupingColumn> flags;
};

ResultTable FromCube(const CubeResult& result);
ResultTable FromQuery(const QueryResult& result);

// How a value reads in the aligned table: All is ALL, Null is NULL, and
// Text that would read as either marker is double-quoted.
std::string DisplayString(const Value& v);

// Aligned text table; numbers right-aligned.
std::string RenderTable(const Relation& relation);

// All replaced by Null, plus a Boolean "GROUPING(<name>)" column for each
// dimension that has no flag column yet.
Relation WithGroupingFlags(const ResultTable& table);
// Inverse of WithGroupingFlags: every column named GROUPING(<c>) puts All
// back into column c where true and is then dropped.
Relation RestoreAllTokens(const Relation& with_flags);

// An array of row objects. All becomes null; each object carries a
// "grouping" array with one Boolean per dimension.
std::string RenderJson(const ResultTable& table);
// Reads RenderJson output back. `dimensions` names the columns the
// grouping arrays refer to. Column types are inferred from the values.
// Throws kInvalidArgument on malformed input.
Relation ParseJsonResult(std::string_view json,
                         std::span<const std::string> dimensions);

struct CrosstabOptions {
  std::string rows;
  std::string cols;
  // column = value pairs pinning every other dimension. ALL pins the All
  // marker, NULL pins Null.
  std::vector<std::pair<std::string, std::string>> fixes;
};

// A two-dimensional slice laid out as a grid. Row and column values are
// sorted with All (the totals) last; `cells[r][c]` is empty where the
// result has no row.
struct Crosstab {
  std::string corner;
  std::vector<Value> row_values;
  std::vector<Value> col_values;
  std::vector<std::vector<std::optional<Value>>> cells;
};

// Throws kUnknownColumn, kNotTwoDimensional, kMultipleAggregates,
// kTypeMismatch.
Crosstab BuildCrosstab(const ResultTable& table,
                       const CrosstabOptions& options);

// Row dimension down the left, column dimension across the top, with
// "total (ALL)" as the last row and column. Missing cells are blank.
std::string FormatCrosstab(const Crosstab& grid);
std::string RenderCrosstab(const ResultTable& table,
                           const CrosstabOptions& options);

// Dispatch on `format`. `crosstab` is only consulted for kCrosstab.
std::string Render(const ResultTable& table, Format format,
                   const CrosstabOptions& crosstab = {});

}  // namespace datacube::cli

#endif  // DATACUBE_CLI_RENDER_H_
