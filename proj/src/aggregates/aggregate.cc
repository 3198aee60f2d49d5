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

#include <set>

#include "datacube/error.h"
#include "datacube/model/relation.h"

namespace datacube {

std::string_view TaxonomyName(Taxonomy t) {
  switch (t) {
    case Taxonomy::kDistributive: return "Distributive";
    case Taxonomy::kAlgebraic: return "Algebraic";
    case Taxonomy::kHolistic: return "Holistic";
  }
  return "?";
}

AggregateFunction::AggregateFunction(AggregateDefinition def)
    : def_(std::move(def)) {
  if (def_.name.empty() || !def_.start || !def_.next || !def_.end ||
      !def_.result_type) {
    Fail(ErrorCode::kInvalidSpec,
         "aggregate '" + def_.name + "' needs a name, start, next, end "
         "and result type");
  }
  bool mergeable = def_.select_class != Taxonomy::kHolistic;
  if (mergeable && !def_.merge) {
    Fail(ErrorCode::kMissingMerge,
         def_.name + " is " + std::string(TaxonomyName(def_.select_class)) +
             " but has no merge callback");
  }
  if (!mergeable && def_.merge) {
    Fail(ErrorCode::kInvalidSpec,
         def_.name + " is holistic and must not declare a merge callback");
  }
  if (def_.delete_class != Taxonomy::kHolistic && !def_.retract) {
    Fail(ErrorCode::kMissingRetract,
         def_.name + " claims non-holistic deletion but has no retract");
  }
  if (def_.insert_class == Taxonomy::kHolistic &&
      def_.select_class != Taxonomy::kHolistic) {
    // Inserting one value is a merge of a singleton, so a mergeable
    // function cannot be insert-holistic.
    Fail(ErrorCode::kInvalidSpec,
         def_.name + " is mergeable but declares holistic insertion");
  }
}

DataType AggregateFunction::ResultType(std::optional<DataType> input) const {
  if (def_.input == InputConstraint::kNumeric && input && !IsNumeric(*input)) {
    Fail(ErrorCode::kTypeMismatch,
         def_.name + "() requires a numeric argument, got " +
             std::string(DataTypeName(*input)));
  }
  return def_.result_type(input);
}

Scratchpad AggregateFunction::Start() const {
  return Scratchpad(this, def_.start());
}

void AggregateFunction::CheckOwner(const Scratchpad& pad) const {
  if (pad.owner_ != this) {
    Fail(ErrorCode::kSpecMismatch,
         "scratchpad of " +
             (pad.owner_ ? pad.owner_->name() : std::string("<none>")) +
             " passed to " + def_.name);
  }
}

bool AggregateFunction::Accepts(const Value& v) const {
  if (v.is_all()) {
    Fail(ErrorCode::kInvalidArgument,
         "ALL was fed to aggregate " + def_.name);
  }
  if (v.is_null()) return def_.null_policy == NullPolicy::kCountNulls;
  if (def_.input == InputConstraint::kNumeric && !v.is_numeric()) {
    Fail(ErrorCode::kTypeMismatch,
         def_.name + "() cannot aggregate " + v.ToString());
  }
  return true;
}

void AggregateFunction::Next(Scratchpad& pad, const Value& v) const {
  CheckOwner(pad);
  if (Accepts(v)) def_.next(pad.state_, v);
}

Value AggregateFunction::End(const Scratchpad& pad) const {
  CheckOwner(pad);
  return def_.end(pad.state_);
}

void AggregateFunction::Merge(Scratchpad& into, const Scratchpad& from) const {
  if (!def_.merge) {
    Fail(ErrorCode::kHolisticMerge,
         def_.name + " is holistic; its scratchpads cannot be merged");
  }
  CheckOwner(into);
  CheckOwner(from);
  def_.merge(into.state_, from.state_);
}

void AggregateFunction::Retract(Scratchpad& pad, const Value& v) const {
  if (!def_.retract) {
    Fail(ErrorCode::kHolisticAggregate,
         def_.name + " is holistic for deletion");
  }
  CheckOwner(pad);
  if (Accepts(v)) def_.retract(pad.state_, v);
}

AggregateFunctionPtr AggregateRegistry::Register(AggregateDefinition def) {
  std::string key = ToLower(def.name);
  if (functions_.count(key) > 0) {
    Fail(ErrorCode::kDuplicateName,
         "aggregate " + def.name + " is already registered");
  }
  auto fn = std::make_shared<const AggregateFunction>(std::move(def));
  functions_.emplace(std::move(key), fn);
  return fn;
}

AggregateFunctionPtr AggregateRegistry::Find(std::string_view name) const {
  auto it = functions_.find(ToLower(name));
  return it == functions_.end() ? nullptr : it->second;
}

AggregateFunctionPtr AggregateRegistry::Get(std::string_view name) const {
  if (auto fn = Find(name)) return fn;
  Fail(ErrorCode::kUnknownAggregate,
       "no aggregate named " + std::string(name));
}

std::vector<std::string> AggregateRegistry::Names() const {
  std::vector<std::string> out;
  for (const auto& [key, fn] : functions_) out.push_back(fn->name());
  return out;
}

Value Fold(const AggregateFunction& fn, std::span<const Value> values) {
  Scratchpad pad = fn.Start();
  for (const Value& v : values) fn.Next(pad, v);
  return fn.End(pad);
}

Scratchpad MergeScratchpads(const AggregateFunction& fn, Scratchpad into,
                            const Scratchpad& from) {
  fn.Merge(into, from);
  return into;
}

Classification Classify(const AggregateRegistry& registry,
                        std::string_view name) {
  return registry.Get(name)->classify();
}

AggregateFunctionPtr MakeDistinct(const AggregateFunctionPtr& base) {
  using Set = std::set<Value, ValueLess>;
  AggregateDefinition def;
  def.name = base->name() + "(DISTINCT)";
  def.input = base->definition().input;
  def.result_type = base->definition().result_type;
  def.start = [] { return std::any(Set{}); };
  def.next = [](std::any& s, const Value& v) {
    std::any_cast<Set&>(s).insert(v);
  };
  def.end = [base](const std::any& s) {
    const Set& set = std::any_cast<const Set&>(s);
    std::vector<Value> values(set.begin(), set.end());
    return Fold(*base, values);
  };
  def.null_policy = NullPolicy::kSkipNulls;
  return std::make_shared<const AggregateFunction>(std::move(def));
}

}  // namespace datacube
