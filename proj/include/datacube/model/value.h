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

#ifndef DATACUBE_MODEL_VALUE_H_
#define DATACUBE_MODEL_VALUE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace datacube {

// Declared column types. Null and All are markers that may appear in a
// column of any type, so they have no DataType of their own.
enum class DataType { kBoolean, kInteger, kReal, kText };

std::string_view DataTypeName(DataType type);
bool IsNumeric(DataType type);

enum class ValueKind { kNull, kAll, kBoolean, kInteger, kReal, kText };

// A tagged scalar. Besides ordinary data it carries two markers:
//   Null - missing data, as in SQL.
//   All  - "aggregated over every value of this column"; produced only by
//          the grouping operators, never present in base data.
// The two markers are distinct: a group whose key is Null never collides
// with a super-aggregate row.
class Value {
 public:
  Value() = default;  // Null

  static Value Null() { return Value(); }
  static Value All() { return Value(AllTag{}); }
  static Value Bool(bool b) { return Value(b); }
  static Value Int(std::int64_t i) { return Value(i); }
  static Value Real(double d) { return Value(d); }
  static Value Text(std::string s) { return Value(std::move(s)); }

  ValueKind kind() const noexcept {
    return static_cast<ValueKind>(data_.index());
  }
  bool is_null() const noexcept { return kind() == ValueKind::kNull; }
  bool is_all() const noexcept { return kind() == ValueKind::kAll; }
  // Null or All.
  bool is_marker() const noexcept { return data_.index() <= 1; }
  bool is_numeric() const noexcept {
    return kind() == ValueKind::kInteger || kind() == ValueKind::kReal;
  }

  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_real() const { return std::get<double>(data_); }
  const std::string& as_text() const { return std::get<std::string>(data_); }
  // Integer or Real widened to double.
  double as_number() const;

  // Structural equality: same variant and same payload. Integer 1 and
  // Real 1.0 are different values here; SQL comparison lives in
  // CompareForSql.
  friend bool operator==(const Value& a, const Value& b) {
    return a.data_ == b.data_;
  }

  // Display form: NULL, ALL, true/false, decimal numbers, raw text.
  std::string ToString() const;

  std::size_t Hash() const noexcept;

 private:
  struct NullTag {
    friend bool operator==(NullTag, NullTag) { return true; }
  };
  struct AllTag {
    friend bool operator==(AllTag, AllTag) { return true; }
  };

  explicit Value(AllTag t) : data_(t) {}
  explicit Value(bool b) : data_(b) {}
  explicit Value(std::int64_t i) : data_(i) {}
  explicit Value(double d) : data_(d) {}
  explicit Value(std::string s) : data_(std::move(s)) {}

  std::variant<NullTag, AllTag, bool, std::int64_t, double, std::string> data_;
};

// Strict total order used only for deterministic sorting:
//   Null < All < Boolean < numeric < Text.
// Integer and Real compare numerically; on a numeric tie Integer sorts first.
// Returns <0, 0, >0.
int CompareTotal(const Value& a, const Value& b);

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const {
    return CompareTotal(a, b) < 0;
  }
};

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept { return v.Hash(); }
};

using Tuple = std::vector<Value>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept;
};

// True if `value` is storable in a column of `type`: markers always are,
// an Integer is accepted by a Real column.
bool ConformsTo(const Value& value, DataType type);

// The DataType a non-marker value naturally has.
DataType TypeOf(const Value& value);

bool is_all(const Value& v);

// Debug form: Text is single-quoted so it is never confused with markers.
std::ostream& operator<<(std::ostream& os, const Value& v);

}  // namespace datacube

#endif  // DATACUBE_MODEL_VALUE_H_
