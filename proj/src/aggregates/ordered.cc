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

#include "datacube/aggregates/ordered.h"

#include <algorithm>
#include <string>

#include "datacube/error.h"

namespace datacube {
namespace {

void RejectAll(std::span<const Value> values) {
  for (const Value& v : values) {
    if (v.is_all()) {
      Fail(ErrorCode::kInvalidArgument, "ALL cannot be ranked or summed");
    }
  }
}

void RequireNumeric(std::span<const Value> values, const char* fn) {
  RejectAll(values);
  for (const Value& v : values) {
    if (!v.is_null() && !v.is_numeric()) {
      Fail(ErrorCode::kTypeMismatch,
           std::string(fn) + " needs numeric input, got " + v.ToString());
    }
  }
}

void CheckN(std::int64_t n) {
  if (n < 1) Fail(ErrorCode::kInvalidN, "n must be at least 1");
}

void CheckKeys(std::span<const Value> values, std::span<const Tuple> keys) {
  if (!keys.empty() && keys.size() != values.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "reset keys must have one entry per value");
  }
}

bool SpanStarts(std::span<const Tuple> keys, std::size_t i) {
  return i == 0 || (!keys.empty() && !(keys[i] == keys[i - 1]));
}

// Integer while every input is Integer, Real from the first Real on.
struct NumericSum {
  std::int64_t ints = 0;
  double reals = 0;
  bool any_real = false;

  void Add(const Value& v, int sign = 1) {
    if (v.kind() == ValueKind::kInteger) {
      std::int64_t d = sign * v.as_int();
      if (__builtin_add_overflow(ints, d, &ints)) {
        Fail(ErrorCode::kNumericOverflow, "integer overflow in running sum");
      }
    } else {
      reals += sign * v.as_real();
      any_real = true;
    }
  }
  Value Get() const {
    if (!any_real) return Value::Int(ints);
    return Value::Real(static_cast<double>(ints) + reals);
  }
  double AsDouble() const { return static_cast<double>(ints) + reals; }
};

std::vector<Value> Windowed(std::span<const Value> values, std::int64_t n,
                            std::span<const Tuple> keys, bool average) {
  CheckN(n);
  CheckKeys(values, keys);
  RequireNumeric(values, average ? "running_average" : "running_sum");
  std::vector<Value> out(values.size());
  std::size_t start = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (SpanStarts(keys, i)) start = i;
    std::size_t seen = i - start + 1;
    if (seen < static_cast<std::size_t>(n)) continue;
    // Recomputing the window keeps Real results independent of history.
    NumericSum sum;
    std::int64_t count = 0;
    for (std::size_t j = i + 1 - n; j <= i; ++j) {
      if (values[j].is_null()) continue;
      sum.Add(values[j]);
      ++count;
    }
    if (count == 0) continue;
    out[i] = average ? Value::Real(sum.AsDouble() / static_cast<double>(count))
                     : sum.Get();
  }
  return out;
}

}  // namespace

std::vector<Value> NTile(std::span<const Value> values, std::int64_t n) {
  CheckN(n);
  RejectAll(values);
  std::vector<Value> sorted;
  for (const Value& v : values) {
    if (!v.is_null()) sorted.push_back(v);
  }
  std::sort(sorted.begin(), sorted.end(), ValueLess());
  const auto m = static_cast<std::int64_t>(sorted.size());
  std::vector<Value> out;
  out.reserve(values.size());
  for (const Value& v : values) {
    if (v.is_null()) {
      out.push_back(Value::Null());
      continue;
    }
    auto lower = std::lower_bound(sorted.begin(), sorted.end(), v, ValueLess());
    std::int64_t r = (lower - sorted.begin()) + 1;
    // (r - 1) * n can overflow for absurd n; do it in 128 bits.
    __int128 bucket = static_cast<__int128>(r - 1) * n / m + 1;
    out.push_back(Value::Int(static_cast<std::int64_t>(bucket)));
  }
  return out;
}

Value Rank(std::span<const Value> values, const Value& target) {
  RejectAll(values);
  if (target.is_all()) {
    Fail(ErrorCode::kInvalidArgument, "ALL cannot be ranked");
  }
  if (target.is_null()) return Value::Null();
  std::int64_t below = 0;
  for (const Value& v : values) {
    if (!v.is_null() && CompareTotal(v, target) < 0) ++below;
  }
  return Value::Int(below + 1);
}

std::vector<Value> RankAll(std::span<const Value> values) {
  RejectAll(values);
  std::vector<Value> sorted;
  for (const Value& v : values) {
    if (!v.is_null()) sorted.push_back(v);
  }
  std::sort(sorted.begin(), sorted.end(), ValueLess());
  std::vector<Value> out;
  out.reserve(values.size());
  for (const Value& v : values) {
    if (v.is_null()) {
      out.push_back(Value::Null());
      continue;
    }
    auto lower = std::lower_bound(sorted.begin(), sorted.end(), v, ValueLess());
    out.push_back(Value::Int((lower - sorted.begin()) + 1));
  }
  return out;
}

std::vector<Value> RatioToTotal(std::span<const Value> values) {
  RequireNumeric(values, "ratio_to_total");
  double total = 0;
  for (const Value& v : values) {
    if (!v.is_null()) total += v.as_number();
  }
  std::vector<Value> out(values.size());
  if (total == 0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_null()) out[i] = Value::Real(values[i].as_number() / total);
  }
  return out;
}

std::vector<Value> Cumulative(std::span<const Value> values,
                              std::span<const Tuple> reset_keys) {
  CheckKeys(values, reset_keys);
  RequireNumeric(values, "cumulative");
  std::vector<Value> out(values.size());
  NumericSum sum;
  bool any = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (SpanStarts(reset_keys, i)) {
      sum = NumericSum{};
      any = false;
    }
    if (!values[i].is_null()) {
      sum.Add(values[i]);
      any = true;
    }
    if (any) out[i] = sum.Get();
  }
  return out;
}

std::vector<Value> RunningSum(std::span<const Value> values, std::int64_t n,
                              std::span<const Tuple> reset_keys) {
  return Windowed(values, n, reset_keys, false);
}

std::vector<Value> RunningAverage(std::span<const Value> values,
                                  std::int64_t n,
                                  std::span<const Tuple> reset_keys) {
  return Windowed(values, n, reset_keys, true);
}

}  // namespace datacube
