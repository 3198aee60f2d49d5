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

#include "datacube/aggregates/aggregate.h"

#include <algorithm>
#include <any>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "datacube/error.h"
#include "fixtures/fixtures.h"
#include "gtest/gtest.h"

namespace datacube {
namespace {

using testing::Close;
using testing::I;
using testing::kAll;
using testing::kNull;
using testing::R;
using testing::SameResult;
using testing::T;

const AggregateRegistry& Builtins() {
  static const AggregateRegistry* r =
      new AggregateRegistry(AggregateRegistry::WithBuiltins());
  return *r;
}

Value FoldNamed(std::string_view name, const std::vector<Value>& values) {
  return Fold(*Builtins().Get(name), values);
}

Scratchpad PadOf(const AggregateFunction& fn,
                 const std::vector<Value>& values) {
  Scratchpad pad = fn.Start();
  for (const Value& v : values) fn.Next(pad, v);
  return pad;
}

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kNotFound;
}

// (sum, count) scratchpad, the textbook algebraic aggregate.
AggregateDefinition Mean2() {
  struct S {
    double sum = 0;
    std::int64_t n = 0;
  };
  AggregateDefinition d;
  d.name = "mean2";
  d.input = InputConstraint::kNumeric;
  d.result_type = [](std::optional<DataType>) { return DataType::kReal; };
  d.start = [] { return std::any(S{}); };
  d.next = [](std::any& a, const Value& v) {
    auto& s = std::any_cast<S&>(a);
    s.sum += v.as_number();
    ++s.n;
  };
  d.end = [](const std::any& a) {
    const auto& s = std::any_cast<const S&>(a);
    return s.n == 0 ? Value::Null() : Value::Real(s.sum / s.n);
  };
  d.merge = [](std::any& a, const std::any& b) {
    auto& s = std::any_cast<S&>(a);
    const auto& o = std::any_cast<const S&>(b);
    s.sum += o.sum;
    s.n += o.n;
  };
  d.select_class = Taxonomy::kAlgebraic;
  d.insert_class = Taxonomy::kAlgebraic;
  d.delete_class = Taxonomy::kHolistic;
  return d;
}

TEST(FoldTest, SumOfChevyModel) {
  EXPECT_EQ(FoldNamed("SUM", {I(50), I(40), I(85), I(115)}), I(290));
}

TEST(FoldTest, EmptyGroupConventions) {
  EXPECT_EQ(FoldNamed("count", {}), I(0));
  EXPECT_EQ(FoldNamed("count_rows", {}), I(0));
  for (const char* name : {"sum", "min", "max", "avg", "stddev", "median",
                           "mode"}) {
    EXPECT_EQ(FoldNamed(name, {}), kNull) << name;
  }
}

TEST(FoldTest, MedianMatchesSortOracle) {
  std::vector<Value> in = {I(1), I(3), I(2)};
  std::vector<double> sorted;
  for (const Value& v : in) sorted.push_back(v.as_number());
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(FoldNamed("median", in), R(sorted[sorted.size() / 2]));
  EXPECT_EQ(FoldNamed("median", {I(4), I(1), I(3), I(2)}), R(2.5));
}

TEST(FoldTest, NullsAreSkippedExceptByCountRows) {
  std::vector<Value> in = {I(4), kNull, I(6), kNull};
  EXPECT_EQ(FoldNamed("count", in), I(2));
  EXPECT_EQ(FoldNamed("count_rows", in), I(4));
  EXPECT_EQ(FoldNamed("sum", in), I(10));
  EXPECT_EQ(FoldNamed("avg", in), R(5.0));
  EXPECT_EQ(FoldNamed("min", in), I(4));
  EXPECT_EQ(FoldNamed("max", {kNull}), kNull);
}

TEST(FoldTest, ResultTypes) {
  EXPECT_EQ(FoldNamed("sum", {I(1), R(0.5)}), R(1.5));
  EXPECT_EQ(FoldNamed("avg", {I(1), I(2)}), R(1.5));
  EXPECT_EQ(FoldNamed("max", {T("black"), T("white")}), T("white"));
  EXPECT_EQ(FoldNamed("min", {I(3), R(2.5)}), R(2.5));
  auto sum = Builtins().Get("sum");
  EXPECT_EQ(sum->ResultType(DataType::kInteger), DataType::kInteger);
  EXPECT_EQ(sum->ResultType(DataType::kReal), DataType::kReal);
  EXPECT_EQ(Builtins().Get("count")->ResultType(DataType::kText),
            DataType::kInteger);
  EXPECT_EQ(CodeOf([&] { sum->ResultType(DataType::kText); }),
            ErrorCode::kTypeMismatch);
}

TEST(FoldTest, RejectsBadInput) {
  EXPECT_EQ(CodeOf([] { FoldNamed("sum", {T("x")}); }),
            ErrorCode::kTypeMismatch);
  EXPECT_EQ(CodeOf([] { FoldNamed("count", {kAll}); }),
            ErrorCode::kInvalidArgument);
  std::int64_t big = std::numeric_limits<std::int64_t>::max();
  EXPECT_EQ(CodeOf([&] { FoldNamed("sum", {I(big), I(1)}); }),
            ErrorCode::kNumericOverflow);
}

TEST(FoldTest, StddevIsPopulation) {
  std::vector<double> xs = {2, 4, 4, 4, 5, 5, 7, 9};
  std::vector<Value> in;
  double mean = 0;
  for (double x : xs) {
    in.push_back(R(x));
    mean += x;
  }
  mean /= xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  Value got = FoldNamed("stddev", in);
  EXPECT_TRUE(Close(got.as_real(), std::sqrt(ss / xs.size())));
  EXPECT_EQ(FoldNamed("stddev", {I(7)}), R(0.0));
}

TEST(FoldTest, ModePrefersSmallestOnTie) {
  EXPECT_EQ(FoldNamed("mode", {T("b"), T("a"), T("b"), T("a"), T("c")}),
            T("a"));
  EXPECT_EQ(FoldNamed("mode", {I(3), I(3), I(1)}), I(3));
}

TEST(RegistryTest, RegisterAlgebraicUserAggregate) {
  AggregateRegistry r = AggregateRegistry::WithBuiltins();
  r.Register(Mean2());
  auto fn = r.Get("MEAN2");
  EXPECT_EQ(fn->classify().select, Taxonomy::kAlgebraic);
  EXPECT_EQ(Fold(*fn, std::vector<Value>{I(1), I(2)}), R(1.5));
}

TEST(RegistryTest, HolisticWithoutMergeIsAccepted) {
  AggregateRegistry r;
  AggregateDefinition d;
  d.name = "my_median";
  d.result_type = [](std::optional<DataType>) { return DataType::kReal; };
  d.start = [] { return std::any(std::vector<double>{}); };
  d.next = [](std::any& a, const Value& v) {
    std::any_cast<std::vector<double>&>(a).push_back(v.as_number());
  };
  d.end = [](const std::any&) { return Value::Null(); };
  EXPECT_NE(r.Register(d), nullptr);
  EXPECT_TRUE(r.Get("my_median")->holistic());
}

TEST(RegistryTest, DuplicateNamesAreCaseInsensitive) {
  AggregateRegistry r = AggregateRegistry::WithBuiltins();
  AggregateDefinition d = Mean2();
  d.name = "sum";
  EXPECT_EQ(CodeOf([&] { r.Register(d); }), ErrorCode::kDuplicateName);
  d.name = "Sum";
  EXPECT_EQ(CodeOf([&] { r.Register(d); }), ErrorCode::kDuplicateName);
}

TEST(RegistryTest, ValidationErrors) {
  AggregateRegistry r;
  AggregateDefinition no_merge = Mean2();
  no_merge.merge = nullptr;
  EXPECT_EQ(CodeOf([&] { r.Register(no_merge); }), ErrorCode::kMissingMerge);

  AggregateDefinition no_retract = Mean2();
  no_retract.delete_class = Taxonomy::kAlgebraic;
  EXPECT_EQ(CodeOf([&] { r.Register(no_retract); }),
            ErrorCode::kMissingRetract);

  AggregateDefinition no_end = Mean2();
  no_end.end = nullptr;
  EXPECT_EQ(CodeOf([&] { r.Register(no_end); }), ErrorCode::kInvalidSpec);

  EXPECT_EQ(CodeOf([] { Builtins().Get("nope"); }),
            ErrorCode::kUnknownAggregate);
  EXPECT_EQ(Builtins().Find("nope"), nullptr);
}

TEST(ClassifyTest, BuiltinTriples) {
  constexpr auto D = Taxonomy::kDistributive;
  constexpr auto A = Taxonomy::kAlgebraic;
  constexpr auto H = Taxonomy::kHolistic;
  EXPECT_EQ(Classify(Builtins(), "max"), (Classification{D, D, H}));
  EXPECT_EQ(Classify(Builtins(), "min"), (Classification{D, D, H}));
  EXPECT_EQ(Classify(Builtins(), "sum").del, D);
  EXPECT_EQ(Classify(Builtins(), "count"), (Classification{D, D, D}));
  EXPECT_EQ(Classify(Builtins(), "avg"), (Classification{A, A, A}));
  EXPECT_EQ(Classify(Builtins(), "stddev"), (Classification{A, A, A}));
  EXPECT_EQ(Classify(Builtins(), "median"), (Classification{H, H, H}));
  EXPECT_EQ(Classify(Builtins(), "mode"), (Classification{H, H, H}));
  EXPECT_EQ(CodeOf([] { Classify(Builtins(), "rank"); }),
            ErrorCode::kUnknownAggregate);
  EXPECT_EQ(TaxonomyName(A), "Algebraic");
}

TEST(MergeTest, SumOfHalves) {
  const auto& sum = *Builtins().Get("sum");
  Scratchpad pad = MergeScratchpads(sum, PadOf(sum, {I(50), I(40)}),
                                    PadOf(sum, {I(85), I(115)}));
  EXPECT_EQ(sum.End(pad), I(290));
}

TEST(MergeTest, AvgWithEmptyIsIdentity) {
  const auto& avg = *Builtins().Get("avg");
  Scratchpad pad =
      MergeScratchpads(avg, PadOf(avg, {I(1), I(2)}), PadOf(avg, {}));
  EXPECT_EQ(avg.End(pad), R(1.5));
}

TEST(MergeTest, MinMatchesConcatenatedFold) {
  const auto& min = *Builtins().Get("min");
  Scratchpad pad =
      MergeScratchpads(min, PadOf(min, {I(7), I(9)}), PadOf(min, {I(3)}));
  EXPECT_EQ(min.End(pad), Fold(min, std::vector<Value>{I(7), I(9), I(3)}));
  EXPECT_EQ(min.End(pad), I(3));
}

TEST(MergeTest, Errors) {
  const auto& median = *Builtins().Get("median");
  const auto& sum = *Builtins().Get("sum");
  const auto& avg = *Builtins().Get("avg");
  EXPECT_EQ(CodeOf([&] {
              MergeScratchpads(median, median.Start(), median.Start());
            }),
            ErrorCode::kHolisticMerge);
  EXPECT_EQ(CodeOf([&] { MergeScratchpads(avg, avg.Start(), sum.Start()); }),
            ErrorCode::kSpecMismatch);
  Scratchpad pad = sum.Start();
  EXPECT_EQ(CodeOf([&] { avg.Next(pad, I(1)); }), ErrorCode::kSpecMismatch);
}

TEST(RetractTest, UndoesNext) {
  std::vector<Value> all = {I(5), I(8), I(-2), I(11)};
  std::vector<Value> rest = {I(5), I(-2), I(11)};
  for (const char* name : {"count", "count_rows", "sum", "avg", "stddev"}) {
    const auto& fn = *Builtins().Get(name);
    Scratchpad pad = PadOf(fn, all);
    fn.Retract(pad, I(8));
    EXPECT_TRUE(SameResult(fn.End(pad), Fold(fn, rest))) << name;
  }
  const auto& sum = *Builtins().Get("sum");
  Scratchpad pad = PadOf(sum, {I(3)});
  sum.Retract(pad, I(3));
  EXPECT_EQ(sum.End(pad), kNull);
}

TEST(RetractTest, HolisticDeleteRefuses) {
  for (const char* name : {"max", "min", "median"}) {
    const auto& fn = *Builtins().Get(name);
    Scratchpad pad = PadOf(fn, {I(1)});
    EXPECT_EQ(CodeOf([&] { fn.Retract(pad, I(1)); }),
              ErrorCode::kHolisticAggregate)
        << name;
  }
}

TEST(DistinctTest, CountsDistinctValues) {
  auto count_distinct = MakeDistinct(Builtins().Get("count"));
  EXPECT_TRUE(count_distinct->holistic());
  EXPECT_EQ(Fold(*count_distinct,
                 std::vector<Value>{I(1), I(1), I(2), kNull, I(2)}),
            I(2));
  auto sum_distinct = MakeDistinct(Builtins().Get("sum"));
  EXPECT_EQ(Fold(*sum_distinct, std::vector<Value>{I(3), I(3), I(4)}), I(7));
}

// ---- properties ----------------------------------------------------------

std::vector<Value> RandomStream(std::mt19937_64& rng, bool reals) {
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> v(-1000, 1000);
  std::bernoulli_distribution null_p(0.1);
  std::vector<Value> out(len(rng));
  for (Value& x : out) {
    if (null_p(rng)) continue;
    // Quarter steps are exact in binary, so only rounding in the
    // aggregate itself can move the result.
    x = reals ? R(v(rng) * 0.25) : I(v(rng));
  }
  return out;
}

constexpr const char* kMergeable[] = {"count", "count_rows", "sum", "min",
                                      "max",   "avg",        "stddev"};

TEST(MergePropertyTest, SplitAnywhereMatchesWholeFold) {
  std::mt19937_64 rng(20260101);
  for (int iter = 0; iter < 500; ++iter) {
    bool reals = iter % 2 == 1;
    std::vector<Value> whole = RandomStream(rng, reals);
    std::uniform_int_distribution<std::size_t> cut(0, whole.size());
    std::size_t at = cut(rng);
    std::vector<Value> left(whole.begin(), whole.begin() + at);
    std::vector<Value> right(whole.begin() + at, whole.end());
    for (const char* name : kMergeable) {
      const auto& fn = *Builtins().Get(name);
      Value merged =
          fn.End(MergeScratchpads(fn, PadOf(fn, left), PadOf(fn, right)));
      Value expected = Fold(fn, whole);
      ASSERT_TRUE(SameResult(merged, expected))
          << name << " iter " << iter << ": " << merged << " vs " << expected;
    }
  }
}

TEST(MergePropertyTest, MergeIsAssociative) {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 300; ++iter) {
    bool reals = iter % 2 == 0;
    auto a = RandomStream(rng, reals);
    auto b = RandomStream(rng, reals);
    auto c = RandomStream(rng, reals);
    for (const char* name : kMergeable) {
      const auto& fn = *Builtins().Get(name);
      Value left = fn.End(MergeScratchpads(
          fn, MergeScratchpads(fn, PadOf(fn, a), PadOf(fn, b)), PadOf(fn, c)));
      Value right = fn.End(MergeScratchpads(
          fn, PadOf(fn, a), MergeScratchpads(fn, PadOf(fn, b), PadOf(fn, c))));
      ASSERT_TRUE(SameResult(left, right)) << name << " iter " << iter;
    }
  }
}

TEST(MergePropertyTest, CountCombinesWithSum) {
  std::mt19937_64 rng(5);
  const auto& count = *Builtins().Get("count");
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<Value> whole;
    std::vector<Value> sub_counts;
    std::uniform_int_distribution<int> parts(1, 6);
    for (int p = parts(rng); p > 0; --p) {
      auto part = RandomStream(rng, false);
      sub_counts.push_back(Fold(count, part));
      whole.insert(whole.end(), part.begin(), part.end());
    }
    EXPECT_EQ(FoldNamed("sum", sub_counts), Fold(count, whole));
  }
}

TEST(MergePropertyTest, PartitionsFoldInParallel) {
  std::mt19937_64 rng(99);
  std::vector<std::vector<Value>> parts(4);
  std::vector<Value> whole;
  for (auto& p : parts) {
    p = RandomStream(rng, true);
    whole.insert(whole.end(), p.begin(), p.end());
  }
  const auto& avg = *Builtins().Get("avg");
  std::vector<Scratchpad> pads(parts.size(), avg.Start());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    threads.emplace_back([&, i] {
      for (const Value& v : parts[i]) avg.Next(pads[i], v);
    });
  }
  for (auto& t : threads) t.join();
  Scratchpad total = avg.Start();
  for (const auto& p : pads) avg.Merge(total, p);
  EXPECT_TRUE(SameResult(avg.End(total), Fold(avg, whole)));
}

}  // namespace
}  // namespace datacube
