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

// The built-in aggregate library.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "datacube/aggregates/aggregate.h"
#include "datacube/error.h"

namespace datacube {
namespace {

constexpr Taxonomy kDist = Taxonomy::kDistributive;
constexpr Taxonomy kAlg = Taxonomy::kAlgebraic;
constexpr Taxonomy kHol = Taxonomy::kHolistic;

template <typename S>
S& St(std::any& a) {
  return std::any_cast<S&>(a);
}
template <typename S>
const S& St(const std::any& a) {
  return std::any_cast<const S&>(a);
}

DataType SameAsInput(std::optional<DataType> in) {
  return in.value_or(DataType::kInteger);
}
DataType AlwaysReal(std::optional<DataType>) { return DataType::kReal; }
DataType AlwaysInteger(std::optional<DataType>) { return DataType::kInteger; }

std::int64_t CheckedAdd(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    Fail(ErrorCode::kNumericOverflow, "integer overflow in aggregate");
  }
  return out;
}

// Neumaier-compensated running sum; keeps Real SUM and AVG stable across
// different merge orders.
struct KahanSum {
  double sum = 0;
  double comp = 0;

  void Add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  void Add(const KahanSum& o) {
    Add(o.sum);
    Add(o.comp);
  }
  double Value() const { return sum + comp; }
};

// ---- COUNT -----------------------------------------------------------------

AggregateDefinition CountDef(std::string name, NullPolicy policy) {
  AggregateDefinition d;
  d.name = std::move(name);
  d.result_type = AlwaysInteger;
  d.start = [] { return std::any(std::int64_t{0}); };
  d.next = [](std::any& s, const Value&) { ++St<std::int64_t>(s); };
  d.end = [](const std::any& s) { return Value::Int(St<std::int64_t>(s)); };
  // The super-aggregate of counts is their SUM.
  d.merge = [](std::any& s, const std::any& o) {
    St<std::int64_t>(s) += St<std::int64_t>(o);
  };
  d.retract = [](std::any& s, const Value&) { --St<std::int64_t>(s); };
  d.select_class = d.insert_class = d.delete_class = kDist;
  d.null_policy = policy;
  return d;
}

// ---- SUM -------------------------------------------------------------------

struct SumState {
  std::int64_t ints = 0;
  KahanSum reals;
  bool any_real = false;
  std::int64_t n = 0;
};

AggregateDefinition SumDef() {
  AggregateDefinition d;
  d.name = "sum";
  d.input = InputConstraint::kNumeric;
  d.result_type = SameAsInput;
  d.start = [] { return std::any(SumState{}); };
  d.next = [](std::any& a, const Value& v) {
    SumState& s = St<SumState>(a);
    if (v.kind() == ValueKind::kInteger) {
      s.ints = CheckedAdd(s.ints, v.as_int());
    } else {
      s.reals.Add(v.as_real());
      s.any_real = true;
    }
    ++s.n;
  };
  d.end = [](const std::any& a) {
    const SumState& s = St<SumState>(a);
    if (s.n == 0) return Value::Null();
    if (!s.any_real) return Value::Int(s.ints);
    return Value::Real(static_cast<double>(s.ints) + s.reals.Value());
  };
  d.merge = [](std::any& a, const std::any& b) {
    SumState& s = St<SumState>(a);
    const SumState& o = St<SumState>(b);
    s.ints = CheckedAdd(s.ints, o.ints);
    s.reals.Add(o.reals);
    s.any_real = s.any_real || o.any_real;
    s.n += o.n;
  };
  d.retract = [](std::any& a, const Value& v) {
    SumState& s = St<SumState>(a);
    if (v.kind() == ValueKind::kInteger) {
      s.ints = CheckedAdd(s.ints, -v.as_int());
    } else {
      s.reals.Add(-v.as_real());
    }
    --s.n;
  };
  d.select_class = d.insert_class = d.delete_class = kDist;
  return d;
}

// ---- MIN / MAX -------------------------------------------------------------

// Distributive for SELECT and INSERT, holistic for DELETE: losing the
// current extremum requires revisiting the base data.
AggregateDefinition ExtremumDef(std::string name, bool want_max) {
  using S = std::optional<Value>;
  AggregateDefinition d;
  d.name = std::move(name);
  d.result_type = SameAsInput;
  d.start = [] { return std::any(S{}); };
  auto better = [want_max](const Value& candidate, const Value& current) {
    int c = CompareTotal(candidate, current);
    return want_max ? c > 0 : c < 0;
  };
  d.next = [better](std::any& a, const Value& v) {
    S& s = St<S>(a);
    if (!s || better(v, *s)) s = v;
  };
  d.end = [](const std::any& a) { return St<S>(a).value_or(Value::Null()); };
  d.merge = [better](std::any& a, const std::any& b) {
    S& s = St<S>(a);
    const S& o = St<S>(b);
    if (o && (!s || better(*o, *s))) s = o;
  };
  d.select_class = d.insert_class = kDist;
  d.delete_class = kHol;
  return d;
}

// ---- AVG -------------------------------------------------------------------

struct AvgState {
  KahanSum sum;
  std::int64_t count = 0;
};

AggregateDefinition AvgDef() {
  AggregateDefinition d;
  d.name = "avg";
  d.input = InputConstraint::kNumeric;
  d.result_type = AlwaysReal;
  d.start = [] { return std::any(AvgState{}); };
  d.next = [](std::any& a, const Value& v) {
    AvgState& s = St<AvgState>(a);
    s.sum.Add(v.as_number());
    ++s.count;
  };
  d.end = [](const std::any& a) {
    const AvgState& s = St<AvgState>(a);
    if (s.count == 0) return Value::Null();
    return Value::Real(s.sum.Value() / static_cast<double>(s.count));
  };
  d.merge = [](std::any& a, const std::any& b) {
    AvgState& s = St<AvgState>(a);
    const AvgState& o = St<AvgState>(b);
    s.sum.Add(o.sum);
    s.count += o.count;
  };
  d.retract = [](std::any& a, const Value& v) {
    AvgState& s = St<AvgState>(a);
    s.sum.Add(-v.as_number());
    --s.count;
  };
  d.select_class = d.insert_class = d.delete_class = kAlg;
  return d;
}

// ---- STDDEV (population) -----------------------------------------------------

// Three-component scratchpad (count, mean, sum of squared deviations),
// updated with Welford's step and merged with the Chan et al. formula.
struct MomentState {
  std::int64_t n = 0;
  double mean = 0;
  double m2 = 0;
};

AggregateDefinition StddevDef() {
  AggregateDefinition d;
  d.name = "stddev";
  d.input = InputConstraint::kNumeric;
  d.result_type = AlwaysReal;
  d.start = [] { return std::any(MomentState{}); };
  d.next = [](std::any& a, const Value& v) {
    MomentState& s = St<MomentState>(a);
    double x = v.as_number();
    ++s.n;
    double delta = x - s.mean;
    s.mean += delta / static_cast<double>(s.n);
    s.m2 += delta * (x - s.mean);
  };
  d.end = [](const std::any& a) {
    const MomentState& s = St<MomentState>(a);
    if (s.n == 0) return Value::Null();
    return Value::Real(std::sqrt(std::max(0.0, s.m2 / static_cast<double>(s.n))));
  };
  d.merge = [](std::any& a, const std::any& b) {
    MomentState& s = St<MomentState>(a);
    const MomentState& o = St<MomentState>(b);
    if (o.n == 0) return;
    if (s.n == 0) {
      s = o;
      return;
    }
    double na = static_cast<double>(s.n), nb = static_cast<double>(o.n);
    double n = na + nb;
    double delta = o.mean - s.mean;
    s.mean += delta * nb / n;
    s.m2 += o.m2 + delta * delta * na * nb / n;
    s.n += o.n;
  };
  d.retract = [](std::any& a, const Value& v) {
    MomentState& s = St<MomentState>(a);
    double x = v.as_number();
    if (s.n <= 1) {
      s = MomentState{};
      return;
    }
    double old_mean = s.mean;
    --s.n;
    s.mean = (old_mean * static_cast<double>(s.n + 1) - x) /
             static_cast<double>(s.n);
    s.m2 -= (x - old_mean) * (x - s.mean);
    if (s.m2 < 0) s.m2 = 0;
  };
  d.select_class = d.insert_class = d.delete_class = kAlg;
  return d;
}

// ---- MEDIAN / MODE -----------------------------------------------------------

// Holistic: the scratchpad is the full multiset of accepted values.
AggregateDefinition MedianDef() {
  using S = std::vector<double>;
  AggregateDefinition d;
  d.name = "median";
  d.input = InputConstraint::kNumeric;
  d.result_type = AlwaysReal;
  d.start = [] { return std::any(S{}); };
  d.next = [](std::any& a, const Value& v) {
    St<S>(a).push_back(v.as_number());
  };
  d.end = [](const std::any& a) {
    S values = St<S>(a);
    if (values.empty()) return Value::Null();
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return Value::Real(values[mid]);
    return Value::Real((values[mid - 1] + values[mid]) / 2.0);
  };
  d.select_class = d.insert_class = d.delete_class = kHol;
  return d;
}

AggregateDefinition ModeDef() {
  using S = std::map<Value, std::int64_t, ValueLess>;
  AggregateDefinition d;
  d.name = "mode";
  d.result_type = SameAsInput;
  d.start = [] { return std::any(S{}); };
  d.next = [](std::any& a, const Value& v) { ++St<S>(a)[v]; };
  // Most frequent value; ties go to the smallest value.
  d.end = [](const std::any& a) {
    const S& counts = St<S>(a);
    Value best;
    std::int64_t best_count = 0;
    for (const auto& [v, c] : counts) {
      if (c > best_count) {
        best = v;
        best_count = c;
      }
    }
    return best;
  };
  d.select_class = d.insert_class = d.delete_class = kHol;
  return d;
}

}  // namespace

AggregateRegistry AggregateRegistry::WithBuiltins() {
  AggregateRegistry r;
  r.Register(CountDef("count", NullPolicy::kSkipNulls));
  r.Register(CountDef("count_rows", NullPolicy::kCountNulls));
  r.Register(SumDef());
  r.Register(ExtremumDef("min", false));
  r.Register(ExtremumDef("max", true));
  r.Register(AvgDef());
  r.Register(StddevDef());
  r.Register(MedianDef());
  r.Register(ModeDef());
  return r;
}

}  // namespace datacube
