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

#include "datacube/model/relation.h"

#include <algorithm>
#include <cctype>

#include "datacube/error.h"

namespace datacube {

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string ToUpper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool Column::HasQualifier(std::string_view q) const {
  return std::any_of(qualifiers.begin(), qualifiers.end(),
                     [&](const std::string& s) { return EqualsIgnoreCase(s, q); });
}

std::optional<std::size_t> Schema::Find(std::string_view name,
                                        std::string_view qualifier) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const Column& c = columns_[i];
    if (!EqualsIgnoreCase(c.name, name)) continue;
    if (!qualifier.empty() && !c.HasQualifier(qualifier)) continue;
    return i;
  }
  return std::nullopt;
}

std::size_t Schema::IndexOf(std::string_view name,
                            std::string_view qualifier) const {
  if (auto i = Find(name, qualifier)) return *i;
  std::string full = qualifier.empty()
                         ? std::string(name)
                         : std::string(qualifier) + "." + std::string(name);
  Fail(ErrorCode::kUnknownColumn, "no column named " + full);
}

Schema Schema::Requalified(const std::string& qualifier) const {
  Schema out = *this;
  for (Column& c : out.columns_) c.qualifiers = {qualifier};
  return out;
}

bool operator==(const Schema& a, const Schema& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].type != b[i].type) return false;
  }
  return true;
}

namespace {

// Two columns clash when they share a name and cannot be told apart by a
// qualifier.
bool Clash(const Column& a, const Column& b) {
  if (!EqualsIgnoreCase(a.name, b.name)) return false;
  if (a.qualifiers.empty() || b.qualifiers.empty()) return true;
  for (const std::string& q : a.qualifiers) {
    if (b.HasQualifier(q)) return true;
  }
  return false;
}

}  // namespace

Relation::Relation(Schema schema) : schema_(std::move(schema)) {
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    for (std::size_t j = i + 1; j < schema_.size(); ++j) {
      if (Clash(schema_[i], schema_[j])) {
        Fail(ErrorCode::kDuplicateName,
             "duplicate column name " + schema_[j].name);
      }
    }
  }
}

Relation::Relation(Schema schema, std::vector<Tuple> rows)
    : Relation(std::move(schema)) {
  rows_.reserve(rows.size());
  for (Tuple& row : rows) Append(std::move(row));
}

Tuple Relation::Conform(Tuple row) const {
  if (row.size() != schema_.size()) {
    Fail(ErrorCode::kArityMismatch,
         "row has " + std::to_string(row.size()) + " values, schema has " +
             std::to_string(schema_.size()));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    DataType type = schema_[i].type;
    if (!ConformsTo(row[i], type)) {
      Fail(ErrorCode::kTypeMismatch,
           "value " + row[i].ToString() + " does not fit column " +
               schema_[i].name + " of type " +
               std::string(DataTypeName(type)));
    }
    if (type == DataType::kReal && row[i].kind() == ValueKind::kInteger) {
      row[i] = Value::Real(static_cast<double>(row[i].as_int()));
    }
  }
  return row;
}

void Relation::Append(Tuple row) { rows_.push_back(Conform(std::move(row))); }

}  // namespace datacube
