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

#include "datacube/query/ast.h"

namespace datacube {
namespace {

std::string Ident(const std::string& s) { return QuoteIdentifierIfNeeded(s); }

std::string ListSql(const std::vector<AggregationItem>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += ToSql(items[i].expr);
    if (!items[i].alias.empty()) out += " AS " + Ident(items[i].alias);
    if (!items[i].collation.empty()) {
      out += " COLLATE " + Ident(items[i].collation);
    }
  }
  return out;
}

bool SameItems(const std::vector<AggregationItem>& a,
               const std::vector<AggregationItem>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!SameExpr(a[i].expr, b[i].expr) || a[i].alias != b[i].alias ||
        a[i].collation != b[i].collation) {
      return false;
    }
  }
  return true;
}

bool SameOptionalExpr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return SameExpr(a, b);
}

bool SameSource(const TableRef& a, const TableRef& b) {
  if (a.table != b.table || a.alias != b.alias) return false;
  if (!a.subquery != !b.subquery) return false;
  if (a.subquery && !SameQuery(*a.subquery, *b.subquery)) return false;
  if (a.joins.size() != b.joins.size()) return false;
  for (std::size_t i = 0; i < a.joins.size(); ++i) {
    const JoinClause& x = a.joins[i];
    const JoinClause& y = b.joins[i];
    if (x.table != y.table || x.alias != y.alias ||
        x.using_columns != y.using_columns) {
      return false;
    }
  }
  return true;
}

bool SameSelect(const SelectStmt& a, const SelectStmt& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (!SameExpr(a.items[i].expr, b.items[i].expr) ||
        a.items[i].alias != b.items[i].alias) {
      return false;
    }
  }
  return SameSource(a.from, b.from) && SameOptionalExpr(a.where, b.where) &&
         a.grouping.present == b.grouping.present &&
         SameItems(a.grouping.group_by, b.grouping.group_by) &&
         SameItems(a.grouping.rollup, b.grouping.rollup) &&
         SameItems(a.grouping.cube, b.grouping.cube) &&
         SameOptionalExpr(a.having, b.having);
}

}  // namespace

std::string ToSql(const SelectStmt& s) {
  std::string out = "SELECT ";
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i > 0) out += ", ";
    out += ToSql(s.items[i].expr);
    if (!s.items[i].alias.empty()) out += " AS " + Ident(s.items[i].alias);
  }
  out += " FROM ";
  if (s.from.subquery) {
    out += "(" + ToSql(*s.from.subquery) + ")";
  } else {
    out += Ident(s.from.table);
  }
  if (!s.from.alias.empty()) out += " AS " + Ident(s.from.alias);
  for (const JoinClause& j : s.from.joins) {
    out += " JOIN " + Ident(j.table);
    if (!j.alias.empty()) out += " AS " + Ident(j.alias);
    out += " USING (";
    for (std::size_t i = 0; i < j.using_columns.size(); ++i) {
      if (i > 0) out += ", ";
      out += Ident(j.using_columns[i]);
    }
    out += ")";
  }
  if (s.where) out += " WHERE " + ToSql(s.where);
  const GroupByClause& g = s.grouping;
  if (g.present) {
    out += " GROUP BY";
    if (!g.group_by.empty()) out += " " + ListSql(g.group_by);
    if (!g.rollup.empty()) out += " ROLLUP " + ListSql(g.rollup);
    if (!g.cube.empty()) out += " CUBE " + ListSql(g.cube);
  }
  if (s.having) out += " HAVING " + ToSql(s.having);
  return out;
}

std::string ToSql(const Query& q) {
  std::string out;
  for (std::size_t i = 0; i < q.selects.size(); ++i) {
    if (i > 0) out += q.union_all[i - 1] ? " UNION ALL " : " UNION ";
    out += ToSql(q.selects[i]);
  }
  if (!q.order_by.empty()) {
    out += " ORDER BY ";
    for (std::size_t i = 0; i < q.order_by.size(); ++i) {
      if (i > 0) out += ", ";
      out += ToSql(q.order_by[i].expr);
      if (q.order_by[i].descending) out += " DESC";
    }
  }
  return out;
}

bool SameQuery(const Query& a, const Query& b) {
  if (a.selects.size() != b.selects.size() || a.union_all != b.union_all ||
      a.order_by.size() != b.order_by.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.selects.size(); ++i) {
    if (!SameSelect(a.selects[i], b.selects[i])) return false;
  }
  for (std::size_t i = 0; i < a.order_by.size(); ++i) {
    if (!SameExpr(a.order_by[i].expr, b.order_by[i].expr) ||
        a.order_by[i].descending != b.order_by[i].descending) {
      return false;
    }
  }
  return true;
}

}  // namespace datacube
