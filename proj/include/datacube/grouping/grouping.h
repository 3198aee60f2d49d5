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

#ifndef DATACUBE_GROUPING_GROUPING_H_
#define DATACUBE_GROUPING_GROUPING_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "datacube/aggregates/aggregate.h"
#include "datacube/model/evaluator.h"
#include "datacube/model/expression.h"
#include "datacube/model/relation.h"
#include "datacube/model/scalar_function.h"

namespace datacube {

// One entry of an aggregation list: an expression over the source schema
// and the name of the output column it produces. An empty alias means
// "derive one": the column name for a plain reference, the SQL text
// otherwise.
struct GroupingItem {
  ExprPtr expr;
  std::string alias;
};

struct AggregateItem {
  AggregateFunctionPtr function;
  // Null for the COUNT(*) form; only allowed for functions that count
  // Nulls.
  ExprPtr argument;
  std::string alias;
};

// A non-grouped column that is functionally dependent on the grouping
// columns listed in `determinants` (indices into the combined grouping
// list). It is Null on rows where any determinant is All.
struct DecorationItem {
  ExprPtr expr;
  std::string alias;
  std::vector<std::size_t> determinants;
};

struct GroupingSpec {
  std::vector<GroupingItem> group_by;
  std::vector<GroupingItem> rollup;
  std::vector<GroupingItem> cube;
  std::vector<AggregateItem> aggregates;
  std::vector<DecorationItem> decorations;
  // Whether the consumer defines an output order; required by aggregates
  // declared as ordered.
  bool ordered_output = false;
};

// Bit i is set when grouping column i (group_by, then rollup, then cube
// order) holds All.
class GroupingMask {
 public:
  constexpr GroupingMask() = default;
  constexpr explicit GroupingMask(std::uint64_t bits) : bits_(bits) {}

  bool all(std::size_t column) const { return (bits_ >> column) & 1; }
  void set_all(std::size_t column) { bits_ |= std::uint64_t{1} << column; }
  bool core() const { return bits_ == 0; }
  std::size_t count() const;
  std::uint64_t bits() const { return bits_; }
  // Indices of the columns that are not All, ascending.
  std::vector<std::size_t> Present(std::size_t width) const;
  // "(Model, Year, ALL)"-style rendering against column names.
  std::string Describe(std::span<const std::string> names) const;

  friend bool operator==(GroupingMask, GroupingMask) = default;

 private:
  std::uint64_t bits_ = 0;
};

// Every grouping set of a compound spec: the full group_by list, each
// prefix of the rollup list, and each subset of the cube list.
// (|rollup| + 1) * 2^|cube| sets, the core (mask 0) first.
std::vector<GroupingMask> GroupingSets(std::size_t group_by,
                                       std::size_t rollup, std::size_t cube);

enum class CubeStrategy { kAuto, kNaive, kCascade };

// How one grouping set was computed, for EXPLAIN-style reporting.
struct NodePlan {
  GroupingMask mask;
  // The set it was merged from; nullopt when computed from base rows.
  std::optional<GroupingMask> parent;
  std::size_t rows = 0;
};

struct CubeStats {
  CubeStrategy strategy = CubeStrategy::kNaive;
  std::size_t base_rows = 0;
  // Rows each aggregate folded in, summed over aggregates and grouping sets.
  std::size_t rows_folded = 0;
  std::size_t merges = 0;
  std::vector<NodePlan> nodes;
};

struct CubeResult {
  // Grouping columns, then decorations, then aggregates.
  Relation relation;
  std::vector<GroupingMask> masks;
  std::size_t grouping_width = 0;
  // Per grouping column, the distinct values seen in the source.
  std::vector<std::set<Value, ValueLess>> all_sets;
  std::vector<GroupingMask> grouping_sets;
  CubeStats stats;
  // Coordinate tuple (with All markers) to row index.
  std::unordered_map<Tuple, std::size_t, TupleHash> index;
  // Grouping keys of every source row, used to answer ALL() per cell.
  std::shared_ptr<const std::vector<Tuple>> source_keys;

  std::optional<std::size_t> Find(const Tuple& coords) const;
};

// Throws kArityMismatch or kNotFound.
const Tuple& CellLookup(const CubeResult& result, const Tuple& coords);

// The set of source values an All cell stands for: the distinct values of
// that grouping column among the source rows aggregated into the row.
// nullopt when the cell is not All. Throws kIndexOutOfRange.
std::optional<std::set<Value, ValueLess>> AllSet(const CubeResult& result,
                                                 std::size_t row,
                                                 std::size_t column);

// Tracks a decoration's value across the rows of a cell. Two different
// values mark the cell as conflicting; that is only an error when all of
// the decoration's determinants are present.
struct DecorationState {
  std::optional<Value> value;
  bool conflict = false;

  void Add(const Value& v);
  void Merge(const DecorationState& other);
};

// Per-cell state: one scratchpad per aggregate plus decoration trackers
// and the number of base rows folded in.
struct CellState {
  std::vector<Scratchpad> pads;
  std::vector<DecorationState> decorations;
  std::int64_t rows = 0;
};

// A GroupingSpec resolved against a source schema. Immutable once built;
// shared by the one-shot operators and by materialized cubes.
class GroupingPlan {
 public:
  // Throws kUnknownColumn, kUnknownFunction, kTypeMismatch, kDuplicateName,
  // kOverlappingLists, kInvalidSpec, kOrderedAggregateWithoutOrder.
  GroupingPlan(const Schema& source, GroupingSpec spec,
               const ScalarRegistry& scalars);

  const GroupingSpec& spec() const { return spec_; }
  const Schema& source_schema() const { return source_; }
  const Schema& output_schema() const { return output_; }
  std::size_t width() const { return width_; }
  const std::vector<std::string>& grouping_names() const { return names_; }
  const std::vector<GroupingMask>& grouping_sets() const { return sets_; }
  // True when some aggregate cannot merge scratchpads.
  bool holistic() const { return holistic_; }

  // Grouping key, aggregate inputs and decoration values of one row.
  struct RowValues {
    Tuple key;
    Tuple inputs;
    Tuple decorations;
  };
  RowValues Evaluate(std::span<const Value> row) const;

  CellState NewCell() const;
  void Accumulate(CellState& cell, const RowValues& row) const;
  // Throws kHolisticMerge for holistic plans.
  void Merge(CellState& into, const CellState& from) const;
  // Key with the masked columns replaced by All.
  Tuple Project(const Tuple& key, GroupingMask mask) const;
  // Output tuple for a cell. Throws kDependencyViolated.
  Tuple Finish(const Tuple& coords, GroupingMask mask,
               const CellState& cell) const;

 private:
  GroupingSpec spec_;
  Schema source_;
  Schema output_;
  std::size_t width_ = 0;
  std::vector<std::string> names_;
  std::vector<GroupingMask> sets_;
  std::vector<BoundExpr> keys_;
  std::vector<std::optional<BoundExpr>> args_;
  std::vector<BoundExpr> decorations_;
  bool holistic_ = false;
};

// Row order of every result: grouping columns ascending under the total
// value order, with All after the concrete values of its column. For a
// rollup this is drill-down order, each subtotal after its detail rows.
bool CoordinateLess(const Tuple& a, const Tuple& b);

// The grouping-set union over `rel`. kAuto picks the cascade unless an
// aggregate is holistic; asking for kCascade with a holistic aggregate
// throws kHolisticAggregate.
CubeResult Compute(const Relation& rel, const GroupingPlan& plan,
                   CubeStrategy strategy = CubeStrategy::kAuto);

// The operators. Each one checks that only its own lists are in use
// (kInvalidSpec otherwise) and then delegates to Compute.
CubeResult GroupBy(const Relation& rel, const GroupingSpec& spec,
                   const ScalarRegistry& scalars);
CubeResult Rollup(const Relation& rel, const GroupingSpec& spec,
                  const ScalarRegistry& scalars);
CubeResult Cube(const Relation& rel, const GroupingSpec& spec,
                const ScalarRegistry& scalars);
CubeResult CubeNaive(const Relation& rel, const GroupingSpec& spec,
                     const ScalarRegistry& scalars);
CubeResult CubeCascade(const Relation& rel, const GroupingSpec& spec,
                       const ScalarRegistry& scalars);
CubeResult Compound(const Relation& rel, const GroupingSpec& spec,
                    const ScalarRegistry& scalars);

// Registry with the built-in scalar functions, for callers that need no
// others.
const ScalarRegistry& BuiltinScalars();

}  // namespace datacube

#endif  // DATACUBE_GROUPING_GROUPING_H_
