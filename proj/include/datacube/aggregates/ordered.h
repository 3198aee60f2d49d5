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

#ifndef DATACUBE_AGGREGATES_ORDERED_H_
#define DATACUBE_AGGREGATES_ORDERED_H_

#include <cstdint>
#include <span>
#include <vector>

#include "datacube/model/value.h"

namespace datacube {

// Order-dependent functions. Each one sees the whole input column at once
// and returns one output per input position. None accepts All (throws
// kInvalidArgument); the numeric ones throw kTypeMismatch on other input.

// Splits the non-null values into n ranges of roughly equal population.
// A value with rank r among m non-null values lands in
// floor((r - 1) * n / m) + 1; equal values share the rank of the first of
// them. Null maps to Null. Throws kInvalidN when n < 1.
std::vector<Value> NTile(std::span<const Value> values, std::int64_t n);

// 1 + the number of non-null values strictly below `target`; Null when
// `target` is Null.
Value Rank(std::span<const Value> values, const Value& target);
// Rank of every position in turn.
std::vector<Value> RankAll(std::span<const Value> values);

// value / sum(values); Null for Null input or a zero total.
std::vector<Value> RatioToTotal(std::span<const Value> values);

// The running family walks `values` in order. When `reset_keys` is
// non-empty it must have one entry per value; state restarts whenever the
// key differs from the previous position's key.

// Prefix sums. Nulls contribute nothing; output is Null until the first
// non-null value of the current span.
std::vector<Value> Cumulative(std::span<const Value> values,
                              std::span<const Tuple> reset_keys = {});
// Sum over the last n positions. The first n - 1 outputs of each span are
// Null. Throws kInvalidN when n < 1.
std::vector<Value> RunningSum(std::span<const Value> values, std::int64_t n,
                              std::span<const Tuple> reset_keys = {});
std::vector<Value> RunningAverage(std::span<const Value> values,
                                  std::int64_t n,
                                  std::span<const Tuple> reset_keys = {});

}  // namespace datacube

#endif  // DATACUBE_AGGREGATES_ORDERED_H_
