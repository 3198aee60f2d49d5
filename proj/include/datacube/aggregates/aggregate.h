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

#ifndef DATACUBE_AGGREGATES_AGGREGATE_H_
#define DATACUBE_AGGREGATES_AGGREGATE_H_

#include <any>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datacube/model/value.h"

namespace datacube {

// How much state a sub-aggregate needs so that super-aggregates can be
// built from it:
//   Distributive - the sub-aggregate value itself (SUM, COUNT, MIN, MAX);
//   Algebraic    - a fixed-size tuple (AVG keeps sum and count);
//   Holistic     - unbounded state (MEDIAN, MODE).
// The class is declared, not inferred, and may differ per operation kind.
enum class Taxonomy { kDistributive, kAlgebraic, kHolistic };

std::string_view TaxonomyName(Taxonomy t);

struct Classification {
  Taxonomy select = Taxonomy::kHolistic;
  Taxonomy insert = Taxonomy::kHolistic;
  Taxonomy del = Taxonomy::kHolistic;

  friend bool operator==(const Classification&,
                         const Classification&) = default;
};

enum class InputConstraint { kAny, kNumeric };
enum class NullPolicy { kSkipNulls, kCountNulls };

// A user-definable aggregate: the start/next/end lifecycle plus the
// optional merge (super-aggregation) and retract (deletion) callbacks.
// State is type-erased; each callback may assume it only ever sees state
// produced by its own `start`.
struct AggregateDefinition {
  std::string name;
  InputConstraint input = InputConstraint::kAny;
  // Output type given the argument type (nullopt for COUNT(*)).
  std::function<DataType(std::optional<DataType>)> result_type;

  std::function<std::any()> start;
  std::function<void(std::any&, const Value&)> next;
  std::function<Value(const std::any&)> end;
  // Folds the right-hand sub-aggregate into the left-hand one. Required
  // exactly when select_class is not Holistic.
  std::function<void(std::any&, const std::any&)> merge;
  // Removes one previously accepted value. Required exactly when
  // delete_class is not Holistic.
  std::function<void(std::any&, const Value&)> retract;

  Taxonomy select_class = Taxonomy::kHolistic;
  Taxonomy insert_class = Taxonomy::kHolistic;
  Taxonomy delete_class = Taxonomy::kHolistic;
  // Cumulative-family functions only make sense over ordered output.
  bool ordered = false;
  NullPolicy null_policy = NullPolicy::kSkipNulls;
};

class AggregateFunction;

// Per-group state between Start() and End(). Copyable, so a parent cell's
// scratchpad can seed a super-aggregate before merging siblings into it.
class Scratchpad {
 public:
  const AggregateFunction* owner() const noexcept { return owner_; }
  const std::any& state() const noexcept { return state_; }

 private:
  friend class AggregateFunction;
  Scratchpad(const AggregateFunction* owner, std::any state)
      : owner_(owner), state_(std::move(state)) {}

  const AggregateFunction* owner_;
  std::any state_;
};

// A validated, immutable aggregate. Safe to share between threads; the
// scratchpads it produces are single-owner.
class AggregateFunction {
 public:
  // Throws kInvalidSpec, kMissingMerge, kMissingRetract.
  explicit AggregateFunction(AggregateDefinition def);

  AggregateFunction(const AggregateFunction&) = delete;
  AggregateFunction& operator=(const AggregateFunction&) = delete;

  const std::string& name() const noexcept { return def_.name; }
  const AggregateDefinition& definition() const noexcept { return def_; }
  Classification classify() const noexcept {
    return {def_.select_class, def_.insert_class, def_.delete_class};
  }
  bool holistic() const noexcept {
    return def_.select_class == Taxonomy::kHolistic;
  }
  bool can_retract() const noexcept {
    return def_.delete_class != Taxonomy::kHolistic;
  }
  bool counts_nulls() const noexcept {
    return def_.null_policy == NullPolicy::kCountNulls;
  }

  // Throws kTypeMismatch if the input constraint rejects `input`.
  DataType ResultType(std::optional<DataType> input) const;

  Scratchpad Start() const;
  // Skips Null under kSkipNulls. All must never reach an aggregate
  // (kInvalidArgument); non-numeric input to a numeric aggregate is
  // kTypeMismatch.
  void Next(Scratchpad& pad, const Value& v) const;
  Value End(const Scratchpad& pad) const;
  // Throws kHolisticMerge or kSpecMismatch.
  void Merge(Scratchpad& into, const Scratchpad& from) const;
  // Throws kHolisticAggregate when deletion is holistic.
  void Retract(Scratchpad& pad, const Value& v) const;

 private:
  void CheckOwner(const Scratchpad& pad) const;
  bool Accepts(const Value& v) const;

  AggregateDefinition def_;
};

using AggregateFunctionPtr = std::shared_ptr<const AggregateFunction>;

class AggregateRegistry {
 public:
  // Throws kDuplicateName (case-insensitive) plus the validation errors of
  // AggregateFunction.
  AggregateFunctionPtr Register(AggregateDefinition def);
  AggregateFunctionPtr Find(std::string_view name) const;
  // Throws kUnknownAggregate.
  AggregateFunctionPtr Get(std::string_view name) const;
  std::vector<std::string> Names() const;

  // COUNT, COUNT_ROWS (the COUNT(*) form), SUM, MIN, MAX, AVG, STDDEV,
  // MEDIAN, MODE.
  static AggregateRegistry WithBuiltins();

 private:
  std::map<std::string, AggregateFunctionPtr> functions_;
};

// end(start(); next(v) for v in values).
Value Fold(const AggregateFunction& fn, std::span<const Value> values);

// Folds `from` into `into` and returns the result.
Scratchpad MergeScratchpads(const AggregateFunction& fn, Scratchpad into,
                            const Scratchpad& from);

// Throws kUnknownAggregate.
Classification Classify(const AggregateRegistry& registry,
                        std::string_view name);

// Aggregate over the distinct accepted values of `base`. Always holistic.
AggregateFunctionPtr MakeDistinct(const AggregateFunctionPtr& base);

}  // namespace datacube

#endif  // DATACUBE_AGGREGATES_AGGREGATE_H_
