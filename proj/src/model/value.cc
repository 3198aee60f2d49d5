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

#include "datacube/model/value.h"

#include <charconv>
#include <cmath>

#include "datacube/error.h"

namespace datacube {

std::string_view DataTypeName(DataType type) {
  switch (type) {
    case DataType::kBoolean: return "BOOLEAN";
    case DataType::kInteger: return "INTEGER";
    case DataType::kReal: return "REAL";
    case DataType::kText: return "TEXT";
  }
  return "?";
}

bool IsNumeric(DataType type) {
  return type == DataType::kInteger || type == DataType::kReal;
}

double Value::as_number() const {
  if (kind() == ValueKind::kInteger) return static_cast<double>(as_int());
  return as_real();
}

std::string Value::ToString() const {
  switch (kind()) {
    case ValueKind::kNull: return "NULL";
    case ValueKind::kAll: return "ALL";
    case ValueKind::kBoolean: return as_bool() ? "true" : "false";
    case ValueKind::kInteger: return std::to_string(as_int());
    case ValueKind::kReal: {
      double d = as_real();
      if (std::isnan(d)) return "nan";
      if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), d);
      return std::string(buf, res.ptr);
    }
    case ValueKind::kText: return as_text();
  }
  return {};
}

std::size_t Value::Hash() const noexcept {
  std::size_t seed = data_.index() * 0x9e3779b97f4a7c15ULL;
  std::size_t h = 0;
  switch (kind()) {
    case ValueKind::kNull:
    case ValueKind::kAll: break;
    case ValueKind::kBoolean: h = std::hash<bool>{}(as_bool()); break;
    case ValueKind::kInteger: h = std::hash<std::int64_t>{}(as_int()); break;
    case ValueKind::kReal: h = std::hash<double>{}(as_real()); break;
    case ValueKind::kText: h = std::hash<std::string>{}(as_text()); break;
  }
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

namespace {

// Rank of the variant in the sort order; Integer and Real share a rank.
int SortClass(ValueKind k) {
  switch (k) {
    case ValueKind::kNull: return 0;
    case ValueKind::kAll: return 1;
    case ValueKind::kBoolean: return 2;
    case ValueKind::kInteger:
    case ValueKind::kReal: return 3;
    case ValueKind::kText: return 4;
  }
  return 5;
}

template <typename T>
int Cmp(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

// NaN sorts after every other number and equal to itself.
int CompareDoubles(double a, double b) {
  bool an = std::isnan(a), bn = std::isnan(b);
  if (an || bn) return Cmp(an, bn);
  return Cmp(a, b);
}

}  // namespace

int CompareTotal(const Value& a, const Value& b) {
  int ca = SortClass(a.kind()), cb = SortClass(b.kind());
  if (ca != cb) return Cmp(ca, cb);
  switch (a.kind()) {
    case ValueKind::kNull:
    case ValueKind::kAll: return 0;
    case ValueKind::kBoolean: return Cmp(a.as_bool(), b.as_bool());
    case ValueKind::kText: return a.as_text().compare(b.as_text()) < 0
                                      ? -1
                                      : (a.as_text() == b.as_text() ? 0 : 1);
    case ValueKind::kInteger:
    case ValueKind::kReal: {
      if (a.kind() == ValueKind::kInteger && b.kind() == ValueKind::kInteger) {
        return Cmp(a.as_int(), b.as_int());
      }
      int c = CompareDoubles(a.as_number(), b.as_number());
      if (c != 0) return c;
      if (a.kind() == ValueKind::kInteger && b.kind() == ValueKind::kInteger) {
        return 0;
      }
      if (a.kind() == ValueKind::kReal && b.kind() == ValueKind::kReal) {
        return 0;
      }
      // Integer and Real numerically equal as doubles. Break the tie by
      // exact value first so the order stays transitive for large integers,
      // then by variant.
      const Value& i = a.kind() == ValueKind::kInteger ? a : b;
      const Value& r = a.kind() == ValueKind::kInteger ? b : a;
      long double exact_i = static_cast<long double>(i.as_int());
      long double exact_r = static_cast<long double>(r.as_real());
      int exact = Cmp(exact_i, exact_r);
      if (exact == 0) exact = -1;  // Integer first
      return a.kind() == ValueKind::kInteger ? exact : -exact;
    }
  }
  return 0;
}

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
  std::size_t seed = t.size();
  for (const Value& v : t) {
    seed ^= v.Hash() + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  }
  return seed;
}

bool ConformsTo(const Value& value, DataType type) {
  switch (value.kind()) {
    case ValueKind::kNull:
    case ValueKind::kAll: return true;
    case ValueKind::kBoolean: return type == DataType::kBoolean;
    case ValueKind::kInteger:
      return type == DataType::kInteger || type == DataType::kReal;
    case ValueKind::kReal: return type == DataType::kReal;
    case ValueKind::kText: return type == DataType::kText;
  }
  return false;
}

DataType TypeOf(const Value& value) {
  switch (value.kind()) {
    case ValueKind::kBoolean: return DataType::kBoolean;
    case ValueKind::kInteger: return DataType::kInteger;
    case ValueKind::kReal: return DataType::kReal;
    case ValueKind::kText: return DataType::kText;
    default: break;
  }
  Fail(ErrorCode::kTypeMismatch, "marker value has no data type");
}

bool is_all(const Value& v) { return v.is_all(); }

std::ostream& operator<<(std::ostream& os, const Value& v) {
  if (v.kind() == ValueKind::kText) return os << '\'' << v.as_text() << '\'';
  return os << v.ToString();
}

}  // namespace datacube
