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

#ifndef DATACUBE_MODEL_RELATION_H_
#define DATACUBE_MODEL_RELATION_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "datacube/model/value.h"

namespace datacube {

// ASCII case-insensitive comparison; identifiers and keywords are matched
// this way throughout.
bool EqualsIgnoreCase(std::string_view a, std::string_view b);
std::string ToLower(std::string_view s);
std::string ToUpper(std::string_view s);

struct Column {
  std::string name;
  DataType type = DataType::kText;
  // Table names or aliases this column can be addressed through
  // ("sales.units"). Empty for computed columns.
  std::vector<std::string> qualifiers;

  bool HasQualifier(std::string_view q) const;
};

// Ordered list of columns. Lookup is case-insensitive and returns the
// first match, so internal evaluation scopes may deliberately shadow
// columns by placing them earlier.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Column> columns) : columns_(std::move(columns)) {}

  std::size_t size() const noexcept { return columns_.size(); }
  bool empty() const noexcept { return columns_.empty(); }
  const Column& operator[](std::size_t i) const { return columns_[i]; }
  const std::vector<Column>& columns() const noexcept { return columns_; }

  std::optional<std::size_t> Find(std::string_view name,
                                  std::string_view qualifier = {}) const;
  // Throws kUnknownColumn.
  std::size_t IndexOf(std::string_view name,
                      std::string_view qualifier = {}) const;

  void Add(Column column) { columns_.push_back(std::move(column)); }

  // Copy with every column's qualifier list replaced by {qualifier}.
  Schema Requalified(const std::string& qualifier) const;

  friend bool operator==(const Schema& a, const Schema& b);

 private:
  std::vector<Column> columns_;
};

// A schema plus an ordered multiset of rows. Row order is preserved as
// loaded; the cumulative functions depend on it.
class Relation {
 public:
  Relation() = default;
  // Validates column-name uniqueness. Throws kDuplicateName.
  explicit Relation(Schema schema);
  // Validates every row. Throws kArityMismatch / kTypeMismatch.
  Relation(Schema schema, std::vector<Tuple> rows);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<Tuple>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const Tuple& operator[](std::size_t i) const { return rows_[i]; }

  // Appends after validating arity and column types. An Integer stored
  // into a Real column is widened.
  void Append(Tuple row);

  // Checks `row` against the schema, widening Integer to Real where the
  // column is Real. Throws kArityMismatch / kTypeMismatch.
  Tuple Conform(Tuple row) const;

 private:
  Schema schema_;
  std::vector<Tuple> rows_;
};

}  // namespace datacube

#endif  // DATACUBE_MODEL_RELATION_H_
