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

#include "datacube/model/scalar_function.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "datacube/error.h"
#include "datacube/model/relation.h"

namespace datacube {

void ScalarRegistry::Register(ScalarFunction fn) {
  std::string key = ToLower(fn.name);
  if (functions_.count(key) > 0) {
    Fail(ErrorCode::kDuplicateName, "scalar function " + fn.name +
                                        " is already registered");
  }
  if (!fn.fn || !fn.result_type || fn.min_arity > fn.max_arity) {
    Fail(ErrorCode::kInvalidSpec, "scalar function " + fn.name +
                                      " is incompletely defined");
  }
  functions_.emplace(std::move(key), std::move(fn));
}

const ScalarFunction* ScalarRegistry::Find(std::string_view name) const {
  auto it = functions_.find(ToLower(name));
  return it == functions_.end() ? nullptr : &it->second;
}

std::vector<std::string> ScalarRegistry::Names() const {
  std::vector<std::string> out;
  for (const auto& [key, fn] : functions_) out.push_back(fn.name);
  return out;
}

std::function<DataType(std::span<const DataType>)> ExpectArgs(
    std::string name, std::vector<std::vector<DataType>> accepted,
    DataType result) {
  return [name = std::move(name), accepted = std::move(accepted),
          result](std::span<const DataType> args) {
    for (std::size_t i = 0; i < args.size() && i < accepted.size(); ++i) {
      bool ok = false;
      for (DataType t : accepted[i]) ok = ok || t == args[i];
      if (!ok) {
        Fail(ErrorCode::kTypeMismatch,
             name + "() does not accept " +
                 std::string(DataTypeName(args[i])) + " as argument " +
                 std::to_string(i + 1));
      }
    }
    return result;
  };
}

namespace {

std::chrono::year_month_day CivilDay(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  auto secs = sys_seconds(seconds(epoch_seconds));
  return year_month_day(floor<days>(secs));
}

ScalarFunction TextFn(std::string name, std::string (*op)(std::string_view)) {
  ScalarFunction f;
  f.name = name;
  f.result_type = ExpectArgs(name, {{DataType::kText}}, DataType::kText);
  f.fn = [op](std::span<const Value> a) {
    return Value::Text(op(a[0].as_text()));
  };
  return f;
}

}  // namespace

ScalarRegistry ScalarRegistry::WithBuiltins() {
  ScalarRegistry r;
  r.Register(TextFn("upper", [](std::string_view s) { return ToUpper(s); }));
  r.Register(TextFn("lower", [](std::string_view s) { return ToLower(s); }));

  ScalarFunction length;
  length.name = "length";
  length.result_type =
      ExpectArgs("length", {{DataType::kText}}, DataType::kInteger);
  length.fn = [](std::span<const Value> a) {
    return Value::Int(static_cast<std::int64_t>(a[0].as_text().size()));
  };
  r.Register(std::move(length));

  ScalarFunction abs;
  abs.name = "abs";
  abs.result_type = [](std::span<const DataType> args) {
    if (!IsNumeric(args[0])) {
      Fail(ErrorCode::kTypeMismatch, "abs() requires a numeric argument");
    }
    return args[0];
  };
  abs.fn = [](std::span<const Value> a) {
    if (a[0].kind() == ValueKind::kInteger) {
      if (a[0].as_int() == INT64_MIN) {
        Fail(ErrorCode::kNumericOverflow, "abs() overflow");
      }
      return Value::Int(std::llabs(a[0].as_int()));
    }
    return Value::Real(std::abs(a[0].as_real()));
  };
  r.Register(std::move(abs));

  // Calendar functions over Integer Unix timestamps (seconds, UTC).
  ScalarFunction year;
  year.name = "year";
  year.result_type =
      ExpectArgs("year", {{DataType::kInteger}}, DataType::kInteger);
  year.fn = [](std::span<const Value> a) {
    return Value::Int(static_cast<int>(CivilDay(a[0].as_int()).year()));
  };
  r.Register(std::move(year));

  ScalarFunction month;
  month.name = "month";
  month.result_type =
      ExpectArgs("month", {{DataType::kInteger}}, DataType::kInteger);
  month.fn = [](std::span<const Value> a) {
    return Value::Int(
        static_cast<unsigned>(CivilDay(a[0].as_int()).month()));
  };
  r.Register(std::move(month));

  ScalarFunction day;
  day.name = "day";
  day.result_type = ExpectArgs("day", {{DataType::kInteger}}, DataType::kText);
  day.fn = [](std::span<const Value> a) {
    auto ymd = CivilDay(a[0].as_int());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                  static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return Value::Text(buf);
  };
  r.Register(std::move(day));
  return r;
}

}  // namespace datacube
