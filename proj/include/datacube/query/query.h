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

#ifndef DATACUBE_QUERY_QUERY_H_
#define DATACUBE_QUERY_QUERY_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datacube/grouping/grouping.h"
#include "datacube/model/relation.h"
#include "datacube/query/ast.h"
#include "datacube/query/catalog.h"

namespace datacube {

// How super-aggregate coordinates appear in results.
//   kAllTokens     - the All marker itself.
//   kNullEmulation - Null; GROUPING() columns tell them apart from data
//                    Nulls.
enum class OutputMode { kAllTokens, kNullEmulation };

struct QueryOptions {
  OutputMode mode = OutputMode::kAllTokens;
  CubeStrategy strategy = CubeStrategy::kAuto;
};

// An output column holding a grouping key, paired with the output column
// holding GROUPING() of the same key.
struct GroupingColumn {
  std::size_t value_column = 0;
  std::size_t flag_column = 0;
};

struct QueryResult {
  Relation relation;
  // Grouping set of every output row. Empty for ungrouped queries and
  // unions.
  std::vector<GroupingMask> masks;
  std::vector<std::string> grouping_names;
  std::vector<GroupingColumn> grouping_columns;
  // Per SELECT that grouped, how the grouping sets were computed.
  std::vector<CubeStats> stats;
};

struct QueryPlan;

// A validated query. Names and types are resolved against the catalog it
// was prepared with; executing it against a catalog whose tables have
// different schemas throws kSchemaMismatch. Immutable and thread-safe.
class PreparedQuery {
 public:
  const Query& ast() const;
  const Schema& output_schema() const;

  QueryResult Execute(const Catalog& catalog,
                      const QueryOptions& options = {}) const;

  // Canonical SQL, grouping sets, aggregates with their classes and the
  // strategy. Executes the query to report the per-node lattice.
  std::string Explain(const Catalog& catalog,
                      const QueryOptions& options = {}) const;

 private:
  friend PreparedQuery Prepare(const Query&, const Catalog&);
  std::shared_ptr<const QueryPlan> plan_;
};

// Validation. Throws kUnknownTable, kUnknownColumn, kUnknownFunction,
// kTypeMismatch, kArityMismatch, kGroupingOfNonGroupColumn,
// kNotFunctionallyDependent, kUnsupportedFeature, kOverlappingLists,
// kOrderedAggregateWithoutOrder, kInvalidN, kInvalidArgument.
PreparedQuery Prepare(const Query& query, const Catalog& catalog);
PreparedQuery Prepare(std::string_view sql, const Catalog& catalog);

QueryResult Execute(std::string_view sql, const Catalog& catalog,
                    const QueryOptions& options = {});

// Replaces every All with Null.
Relation ToNullEmulation(const Relation& relation);
// Puts All back in each value column whose flag column is true.
Relation ToAllTokens(const Relation& relation,
                     std::span<const GroupingColumn> columns);

// Names of the relation-wide and running functions the planner handles
// itself: N_tile, Rank, Ratio_To_Total, Cumulative, Running_Sum,
// Running_Average.
bool IsOrderedFunction(std::string_view name);

}  // namespace datacube

#endif  // DATACUBE_QUERY_QUERY_H_
