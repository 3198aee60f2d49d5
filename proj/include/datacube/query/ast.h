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

#ifndef DATACUBE_QUERY_AST_H_
#define DATACUBE_QUERY_AST_H_

#include <memory>
#include <string>
#include <vector>

#include "datacube/model/expression.h"

namespace datacube {

struct Query;

struct SelectItem {
  ExprPtr expr;
  std::string alias;  // empty when absent
};

// One entry of a GROUP BY, ROLLUP or CUBE list.
struct AggregationItem {
  ExprPtr expr;
  std::string alias;
  // Parsed so it can be reported; execution rejects it.
  std::string collation;
};

struct JoinClause {
  std::string table;
  std::string alias;
  std::vector<std::string> using_columns;
};

// FROM target: a named table or a parenthesised query, plus inner joins.
struct TableRef {
  std::string table;
  std::shared_ptr<const Query> subquery;
  std::string alias;
  std::vector<JoinClause> joins;
};

struct GroupByClause {
  bool present = false;
  std::vector<AggregationItem> group_by;
  std::vector<AggregationItem> rollup;
  std::vector<AggregationItem> cube;
};

struct SelectStmt {
  std::vector<SelectItem> items;
  TableRef from;
  ExprPtr where;
  GroupByClause grouping;
  ExprPtr having;
};

struct OrderItem {
  ExprPtr expr;  // an output column name or a 1-based position
  bool descending = false;
};

// SELECT {UNION [ALL] SELECT} [ORDER BY ...]. `union_all[i]` joins
// selects[i] and selects[i + 1].
struct Query {
  std::vector<SelectStmt> selects;
  std::vector<bool> union_all;
  std::vector<OrderItem> order_by;
};

// Canonical text; Parse(ToSql(q)) yields a query SameQuery to q.
std::string ToSql(const Query& query);
std::string ToSql(const SelectStmt& select);

// Structural equality with exact identifier case.
bool SameQuery(const Query& a, const Query& b);

}  // namespace datacube

#endif  // DATACUBE_QUERY_AST_H_
