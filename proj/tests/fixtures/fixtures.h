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

#ifndef DATACUBE_TESTS_FIXTURES_FIXTURES_H_
#define DATACUBE_TESTS_FIXTURES_FIXTURES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "datacube/model/relation.h"

namespace datacube::testing {

inline Value T(const char* s) { return Value::Text(s); }
inline Value I(std::int64_t i) { return Value::Int(i); }
inline Value R(double d) { return Value::Real(d); }
inline const Value kAll = Value::All();
inline const Value kNull = Value::Null();

// Relative comparison for Real results, with a small absolute floor so
// values that should cancel to zero still compare equal.
inline bool Close(double a, double b, double rel = 1e-9) {
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(rel * scale, 1e-12);
}

// Integer values compare exactly; anything numeric falls back to Close.
inline bool SameResult(const Value& a, const Value& b) {
  if (a.kind() == ValueKind::kReal || b.kind() == ValueKind::kReal) {
    return a.is_numeric() && b.is_numeric() &&
           Close(a.as_number(), b.as_number());
  }
  return a == b;
}

inline Schema SalesSchema(const std::string& measure = "Units") {
  return Schema({{"Model", DataType::kText, {"Sales"}},
                 {"Year", DataType::kInteger, {"Sales"}},
                 {"Color", DataType::kText, {"Sales"}},
                 {measure, DataType::kInteger, {"Sales"}}});
}

// The eight-row car sales table (Chevy and Ford, 1994-1995, black/white).
inline Relation Sales8(const std::string& measure = "Units") {
  return Relation(SalesSchema(measure),
                  {{T("Chevy"), I(1994), T("black"), I(50)},
                   {T("Chevy"), I(1994), T("white"), I(40)},
                   {T("Chevy"), I(1995), T("black"), I(85)},
                   {T("Chevy"), I(1995), T("white"), I(115)},
                   {T("Ford"), I(1994), T("black"), I(50)},
                   {T("Ford"), I(1994), T("white"), I(10)},
                   {T("Ford"), I(1995), T("black"), I(85)},
                   {T("Ford"), I(1995), T("white"), I(75)}});
}

}  // namespace datacube::testing

#endif  // DATACUBE_TESTS_FIXTURES_FIXTURES_H_
