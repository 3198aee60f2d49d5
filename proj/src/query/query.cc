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

#include "datacube/query/query.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "datacube/aggregates/ordered.h"
#include "datacube/error.h"
#include "datacube/query/parser.h"

namespace datacube {

enum class FnKind {
  kNTile,
  kRank,
  kRatio,
  kCumulative,
  kRunningSum,
  kRunningAverage,
};

namespace {

std::optional<FnKind> OrderedKind(std::string_view name) {
  static const std::pair<const char*, FnKind> kNames[] = {
      {"n_tile", FnKind::kNTile},
      {"rank", FnKind::kRank},
      {"ratio_to_total", FnKind::kRatio},
      {"cumulative", FnKind::kCumulative},
      {"running_sum", FnKind::kRunningSum},
      {"running_average", FnKind::kRunningAverage},
  };
  for (const auto& [n, kind] : kNames) {
    if (EqualsIgnoreCase(n, name)) return kind;
  }
  return std::nullopt;
}

bool OrderDependent(FnKind kind) {
  return kind == FnKind::kCumulative || kind == FnKind::kRunningSum ||
         kind == FnKind::kRunningAverage;
}

}  // namespace

bool IsOrderedFunction(std::string_view name) {
  return OrderedKind(name).has_value();
}

struct JoinPlan {
  std::string table;
  Schema right_schema;
  std::vector<std::size_t> left_keys;
  std::vector<std::size_t> right_keys;
  std::vector<bool> widen;
  std::vector<std::size_t> left_rest;
  std::vector<std::size_t> right_rest;
};

struct SourcePlan {
  std::string table;
  Schema table_schema;
  std::shared_ptr<const QueryPlan> subquery;
  std::string label;
  std::vector<JoinPlan> joins;
  Schema schema;
};

// A relation-wide function over the filtered source rows, appended as a
// hidden column before grouping.
struct WindowPlan {
  FnKind kind;
  BoundExpr arg;
  std::int64_t n = 0;
};

// A relation-wide or running function over the output rows.
struct SlotPlan {
  FnKind kind;
  BoundExpr arg;
  std::int64_t n = 0;
  std::vector<BoundExpr> resets;
  // Needs the final row order.
  bool late = false;
};

struct SelectPlan {
  SourcePlan source;
  std::optional<BoundExpr> where;
  std::vector<WindowPlan> windows;
  Schema augmented;
  std::optional<GroupingPlan> grouping;
  std::vector<std::string> grouping_names;
  std::vector<std::string> aggregate_labels;
  std::size_t flag_base = 0;
  std::size_t slot_base = 0;
  std::vector<SlotPlan> slots;
  std::vector<BoundExpr> items;
  std::vector<std::string> names;
  std::vector<bool> named;
  std::vector<std::optional<std::size_t>> key_of_item;
  std::vector<std::optional<std::size_t>> flag_of_item;
  std::optional<BoundExpr> having;
  std::vector<std::pair<BoundExpr, bool>> order;
};

struct QueryPlan {
  Query ast;
  std::vector<SelectPlan> selects;
  Schema output;
  // ORDER BY of a union, as output column positions.
  std::vector<std::pair<std::size_t, bool>> union_order;
};

namespace {

std::string SlotName(std::size_t i) { return "#s" + std::to_string(i); }

bool IsAggregateCall(const FunctionCall& f, const Catalog& catalog) {
  return f.star || catalog.aggregates().Find(f.name) != nullptr;
}

bool Contains(const ExprPtr& e,
              const std::function<bool(const Expr&)>& pred) {
  bool found = false;
  Visit(e, [&](const Expr& x) {
    if (found) return false;
    if (pred(x)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

bool ContainsAggregate(const ExprPtr& e, const Catalog& catalog) {
  return Contains(e, [&](const Expr& x) {
    const auto* f = x.As<FunctionCall>();
    return f && IsAggregateCall(*f, catalog);
  });
}

bool IsGroupingCall(const FunctionCall& f) {
  return EqualsIgnoreCase(f.name, "grouping");
}

std::optional<std::int64_t> IntegerLiteral(const ExprPtr& e) {
  const auto* lit = e->As<Literal>();
  if (lit && lit->value.kind() == ValueKind::kInteger) {
    return lit->value.as_int();
  }
  return std::nullopt;
}

std::string DerivedName(const ExprPtr& e) {
  if (const auto* ref = e->As<ColumnRef>()) return ref->name;
  return ToSql(e);
}

// Appends _2, _3, ... to repeated names so the output is a valid relation.
std::vector<std::string> Uniquify(std::vector<std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto taken = [&](const std::string& n) {
      for (std::size_t j = 0; j < names.size(); ++j) {
        if (j != i && EqualsIgnoreCase(names[j], n)) return true;
      }
      return false;
    };
    bool dup = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (EqualsIgnoreCase(names[j], names[i])) dup = true;
    }
    if (!dup) continue;
    for (int k = 2;; ++k) {
      std::string candidate = names[i] + "_" + std::to_string(k);
      if (!taken(candidate)) {
        names[i] = candidate;
        break;
      }
    }
  }
  return names;
}

DataType SlotType(FnKind kind, std::optional<DataType> arg) {
  switch (kind) {
    case FnKind::kNTile:
    case FnKind::kRank:
      return DataType::kInteger;
    case FnKind::kRatio:
    case FnKind::kRunningAverage:
      return DataType::kReal;
    case FnKind::kCumulative:
    case FnKind::kRunningSum:
      return arg == DataType::kInteger ? DataType::kInteger : DataType::kReal;
  }
  return DataType::kReal;
}

std::shared_ptr<const QueryPlan> PlanQuery(const Query& query,
                                           const Catalog& catalog);

SourcePlan PlanSource(const TableRef& from, const Catalog& catalog) {
  SourcePlan plan;
  Schema schema;
  if (from.subquery) {
    plan.subquery = PlanQuery(*from.subquery, catalog);
    schema = from.alias.empty() ? plan.subquery->output
                                : plan.subquery->output.Requalified(from.alias);
    plan.label = "(subquery)";
  } else {
    plan.table = from.table;
    plan.table_schema = catalog.Table(from.table).schema();
    schema = plan.table_schema.Requalified(
        from.alias.empty() ? from.table : from.alias);
    plan.label = from.table;
  }
  for (const JoinClause& j : from.joins) {
    JoinPlan jp;
    jp.table = j.table;
    jp.right_schema = catalog.Table(j.table).schema();
    Schema right =
        jp.right_schema.Requalified(j.alias.empty() ? j.table : j.alias);
    std::vector<Column> cols;
    for (const std::string& name : j.using_columns) {
      std::size_t li = schema.IndexOf(name);
      std::size_t ri = right.IndexOf(name);
      DataType lt = schema[li].type;
      DataType rt = right[ri].type;
      bool widen = false;
      if (lt != rt) {
        if (!IsNumeric(lt) || !IsNumeric(rt)) {
          Fail(ErrorCode::kTypeMismatch,
               "USING column " + name + " has different types on each side");
        }
        widen = true;
      }
      Column c = schema[li];
      if (widen) c.type = DataType::kReal;
      for (const std::string& q : right[ri].qualifiers) {
        if (!c.HasQualifier(q)) c.qualifiers.push_back(q);
      }
      cols.push_back(std::move(c));
      jp.left_keys.push_back(li);
      jp.right_keys.push_back(ri);
      jp.widen.push_back(widen);
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
      if (std::find(jp.left_keys.begin(), jp.left_keys.end(), i) ==
          jp.left_keys.end()) {
        jp.left_rest.push_back(i);
        cols.push_back(schema[i]);
      }
    }
    for (std::size_t i = 0; i < right.size(); ++i) {
      if (std::find(jp.right_keys.begin(), jp.right_keys.end(), i) ==
          jp.right_keys.end()) {
        jp.right_rest.push_back(i);
        cols.push_back(right[i]);
      }
    }
    schema = Schema(std::move(cols));
    Relation check(schema);  // rejects ambiguous column names
    plan.label += " JOIN " + j.table;
    plan.joins.push_back(std::move(jp));
  }
  plan.schema = std::move(schema);
  return plan;
}

// Builds one SelectPlan. Expressions are first rewritten into a scope of
// internal columns, then bound once the scope is known:
//   grouped:    #k<i> keys, #d<i> decorations, #a<i> aggregates,
//               #g<i> GROUPING flags, #s<i> slots;
//   projection: the source columns, then #s<i> slots.
class SelectPlanner {
 public:
  SelectPlanner(const SelectStmt& stmt, const std::vector<OrderItem>& order,
                const Catalog& catalog)
      : stmt_(stmt), order_(order), catalog_(catalog) {}

  SelectPlan Build();

 private:
  struct GroupEntry {
    ExprPtr original;
    ExprPtr source;  // after window rewriting
    std::string name;
    int list = 0;
  };
  struct AggEntry {
    ExprPtr call;
    AggregateItem item;
  };
  struct WindowEntry {
    FnKind kind;
    ExprPtr arg;
    std::int64_t n = 0;
  };
  struct SlotEntry {
    FnKind kind;
    ExprPtr arg;
    std::int64_t n = 0;
    std::vector<ExprPtr> resets;
    bool late = false;
  };

  void PlanWhere();
  void CollectGrouping();
  std::int64_t TileCount(const FunctionCall& f);
  ExprPtr SourceRewrite(const ExprPtr& e, const char* where);
  ExprPtr SubstituteAliases(const ExprPtr& e);
  std::optional<std::size_t> MatchGrouping(const ExprPtr& e) const;
  std::optional<std::size_t> MatchDeterminant(const std::string& name) const;
  ExprPtr RegisterAggregate(const ExprPtr& call);
  ExprPtr RegisterSlot(const FunctionCall& f, bool in_having,
                       const std::function<ExprPtr(const ExprPtr&)>& inner);
  [[noreturn]] void FailBareColumn(const ColumnRef& ref) const;
  ExprPtr ContextRewrite(const ExprPtr& e, bool in_having);
  ExprPtr ProjectionRewrite(const ExprPtr& e);
  std::optional<ExprPtr> TryDecoration(const SelectItem& item);
  bool LateAllowed() const;
  void BindScope();

  const SelectStmt& stmt_;
  const std::vector<OrderItem>& order_;
  const Catalog& catalog_;
  SelectPlan plan_;
  bool grouped_ = false;

  std::vector<GroupEntry> groups_;
  std::vector<AggEntry> aggs_;
  std::vector<DecorationItem> decorations_;
  std::vector<WindowEntry> windows_;
  std::vector<SlotEntry> slots_;
  std::vector<ExprPtr> items_;  // rewritten into the scope
  std::vector<ExprPtr> order_exprs_;
  ExprPtr having_;
};

std::int64_t SelectPlanner::TileCount(const FunctionCall& f) {
  if (f.args.size() < 2) {
    Fail(ErrorCode::kArityMismatch, f.name + " needs a tile count");
  }
  std::optional<std::int64_t> n = IntegerLiteral(f.args[1]);
  if (!n) {
    Fail(ErrorCode::kInvalidN,
         f.name + " needs an integer literal as its second argument");
  }
  if (*n < 1) {
    Fail(ErrorCode::kInvalidN, f.name + " needs a positive count");
  }
  return *n;
}

void SelectPlanner::PlanWhere() {
  if (!stmt_.where) return;
  if (Contains(stmt_.where, [&](const Expr& x) {
        const auto* f = x.As<FunctionCall>();
        return f && (IsAggregateCall(*f, catalog_) || IsGroupingCall(*f) ||
                     OrderedKind(f->name));
      })) {
    Fail(ErrorCode::kInvalidArgument,
         "WHERE cannot use aggregate, GROUPING or relation-wide functions");
  }
  BoundExpr where = Bind(stmt_.where, plan_.source.schema, catalog_.scalars());
  if (where.type() && *where.type() != DataType::kBoolean) {
    Fail(ErrorCode::kTypeMismatch, "WHERE needs a Boolean predicate");
  }
  plan_.where = std::move(where);
}

// Rewrites an expression evaluated per source row: relation-wide functions
// become hidden columns, aggregates are rejected.
ExprPtr SelectPlanner::SourceRewrite(const ExprPtr& e, const char* where) {
  return Rewrite(e, [&](const ExprPtr& x) -> ExprPtr {
    const auto* f = x->As<FunctionCall>();
    if (!f) return nullptr;
    if (IsAggregateCall(*f, catalog_)) {
      Fail(ErrorCode::kInvalidArgument,
           std::string("aggregate ") + ToSql(x) + " is not allowed in " +
               where);
    }
    if (IsGroupingCall(*f)) {
      Fail(ErrorCode::kInvalidArgument,
           std::string("GROUPING is not allowed in ") + where);
    }
    std::optional<FnKind> kind = OrderedKind(f->name);
    if (!kind) return nullptr;
    if (OrderDependent(*kind)) {
      Fail(ErrorCode::kInvalidArgument,
           f->name + " applies to output rows and is not allowed in " + where);
    }
    std::size_t arity = *kind == FnKind::kNTile ? 2 : 1;
    if (f->args.size() != arity) {
      Fail(ErrorCode::kArityMismatch,
           f->name + " takes " + std::to_string(arity) + " argument(s)");
    }
    WindowEntry w;
    w.kind = *kind;
    if (*kind == FnKind::kNTile) w.n = TileCount(*f);
    w.arg = SourceRewrite(f->args[0], where);
    windows_.push_back(std::move(w));
    return Col("#w" + std::to_string(windows_.size() - 1));
  });
}

// Unqualified names that are not source columns but grouping aliases stand
// for the aliased expression.
ExprPtr SelectPlanner::SubstituteAliases(const ExprPtr& e) {
  return Rewrite(e, [&](const ExprPtr& x) -> ExprPtr {
    const auto* ref = x->As<ColumnRef>();
    if (!ref || !ref->qualifier.empty()) return nullptr;
    if (plan_.source.schema.Find(ref->name)) return nullptr;
    for (const GroupEntry& g : groups_) {
      if (EqualsIgnoreCase(g.name, ref->name)) return g.original;
    }
    return nullptr;
  });
}

void SelectPlanner::CollectGrouping() {
  const std::vector<AggregationItem>* lists[] = {
      &stmt_.grouping.group_by, &stmt_.grouping.rollup,
      &stmt_.grouping.cube};
  for (int l = 0; l < 3; ++l) {
    for (const AggregationItem& item : *lists[l]) {
      if (!item.collation.empty()) {
        Fail(ErrorCode::kUnsupportedFeature,
             "COLLATE " + item.collation + " is not supported");
      }
      GroupEntry g;
      g.original = item.expr;
      g.source = SourceRewrite(item.expr, "an aggregation list");
      g.name = item.alias.empty() ? DerivedName(item.expr) : item.alias;
      g.list = l;
      groups_.push_back(std::move(g));
    }
  }
}

std::optional<std::size_t> SelectPlanner::MatchGrouping(
    const ExprPtr& e) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (SameExpr(e, groups_[i].original, /*ignore_case=*/true)) return i;
  }
  const auto* ref = e->As<ColumnRef>();
  if (!ref) return std::nullopt;
  if (ref->qualifier.empty()) {
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      if (EqualsIgnoreCase(groups_[i].name, ref->name)) return i;
    }
  }
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto* g = groups_[i].original->As<ColumnRef>();
    if (!g || !EqualsIgnoreCase(g->name, ref->name)) continue;
    if (ref->qualifier.empty() || g->qualifier.empty()) {
      // Both must address the same source column.
      auto a = plan_.source.schema.Find(ref->name, ref->qualifier);
      auto b = plan_.source.schema.Find(g->name, g->qualifier);
      if (a && a == b) return i;
    } else if (EqualsIgnoreCase(g->qualifier, ref->qualifier)) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> SelectPlanner::MatchDeterminant(
    const std::string& name) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (EqualsIgnoreCase(groups_[i].name, name)) return i;
    const auto* g = groups_[i].original->As<ColumnRef>();
    if (g && EqualsIgnoreCase(g->name, name)) return i;
  }
  return std::nullopt;
}

ExprPtr SelectPlanner::RegisterAggregate(const ExprPtr& call) {
  for (std::size_t i = 0; i < aggs_.size(); ++i) {
    if (SameExpr(call, aggs_[i].call, /*ignore_case=*/true)) {
      return Col("#a" + std::to_string(i));
    }
  }
  const FunctionCall& f = *call->As<FunctionCall>();
  AggEntry entry;
  entry.call = call;
  if (f.star) {
    if (!EqualsIgnoreCase(f.name, "count")) {
      Fail(ErrorCode::kInvalidArgument, f.name + "(*) is not defined");
    }
    entry.item.function = catalog_.aggregates().Get("count_rows");
  } else {
    if (f.args.size() != 1) {
      Fail(ErrorCode::kArityMismatch,
           "aggregate " + f.name + " takes one argument");
    }
    entry.item.function = catalog_.aggregates().Get(f.name);
    entry.item.argument =
        SourceRewrite(SubstituteAliases(f.args[0]), "an aggregate argument");
  }
  if (f.distinct) entry.item.function = MakeDistinct(entry.item.function);
  entry.item.alias = "#a" + std::to_string(aggs_.size());
  aggs_.push_back(std::move(entry));
  return Col(aggs_.back().item.alias);
}

ExprPtr SelectPlanner::RegisterSlot(
    const FunctionCall& f, bool in_having,
    const std::function<ExprPtr(const ExprPtr&)>& inner) {
  FnKind kind = *OrderedKind(f.name);
  if (in_having) {
    Fail(ErrorCode::kInvalidArgument,
         f.name + " is computed after HAVING and cannot be used in it");
  }
  SlotEntry s;
  s.kind = kind;
  std::size_t fixed = 1;
  if (kind == FnKind::kNTile || kind == FnKind::kRunningSum ||
      kind == FnKind::kRunningAverage) {
    s.n = TileCount(f);
    fixed = 2;
  }
  if (f.args.size() < fixed ||
      (!OrderDependent(kind) && f.args.size() != fixed)) {
    Fail(ErrorCode::kArityMismatch, f.name + " has the wrong arguments");
  }
  s.arg = inner(f.args[0]);
  for (std::size_t i = fixed; i < f.args.size(); ++i) {
    s.resets.push_back(inner(f.args[i]));
  }
  // Anything built on a running value inherits its dependence on order.
  s.late = OrderDependent(kind);
  auto uses_late = [&](const ExprPtr& e) {
    return Contains(e, [&](const Expr& x) {
      const auto* ref = x.As<ColumnRef>();
      if (!ref || ref->name.rfind("#s", 0) != 0) return false;
      return slots_[std::stoul(ref->name.substr(2))].late;
    });
  };
  s.late = s.late || uses_late(s.arg) ||
           std::any_of(s.resets.begin(), s.resets.end(), uses_late);
  if (s.late && !LateAllowed()) {
    Fail(ErrorCode::kOrderedAggregateWithoutOrder,
         f.name + " needs ORDER BY or a ROLLUP-only grouping");
  }
  slots_.push_back(std::move(s));
  return Col(SlotName(slots_.size() - 1));
}

bool SelectPlanner::LateAllowed() const {
  if (!order_.empty()) return true;
  const GroupByClause& g = stmt_.grouping;
  if (!g.present) return true;
  return !g.rollup.empty() && g.cube.empty();
}

void SelectPlanner::FailBareColumn(const ColumnRef& ref) const {
  std::string full =
      ref.qualifier.empty() ? ref.name : ref.qualifier + "." + ref.name;
  if (!plan_.source.schema.Find(ref.name, ref.qualifier)) {
    Fail(ErrorCode::kUnknownColumn, "no column named " + full);
  }
  if (!catalog_.DependenciesOf(ref.name).empty()) {
    Fail(ErrorCode::kNotFunctionallyDependent,
         full + " depends on columns that are not grouped");
  }
  Fail(ErrorCode::kGroupingOfNonGroupColumn,
       full + " is neither grouped nor aggregated");
}

ExprPtr SelectPlanner::ContextRewrite(const ExprPtr& e, bool in_having) {
  std::function<ExprPtr(const ExprPtr&)> self = [&](const ExprPtr& x) {
    return ContextRewrite(x, in_having);
  };
  return Rewrite(e, [&](const ExprPtr& x) -> ExprPtr {
    if (auto g = MatchGrouping(x)) return Col("#k" + std::to_string(*g));
    if (const auto* f = x->As<FunctionCall>()) {
      if (IsGroupingCall(*f)) {
        if (f->args.size() != 1) {
          Fail(ErrorCode::kArityMismatch, "GROUPING takes one argument");
        }
        auto g = MatchGrouping(f->args[0]);
        if (!g) {
          Fail(ErrorCode::kGroupingOfNonGroupColumn,
               ToSql(f->args[0]) + " is not in any aggregation list");
        }
        return Col("#g" + std::to_string(*g));
      }
      if (IsAggregateCall(*f, catalog_)) return RegisterAggregate(x);
      if (OrderedKind(f->name)) return RegisterSlot(*f, in_having, self);
      return nullptr;
    }
    if (const auto* ref = x->As<ColumnRef>()) {
      if (in_having && ref->qualifier.empty()) {
        for (std::size_t i = 0; i < stmt_.items.size(); ++i) {
          if (EqualsIgnoreCase(stmt_.items[i].alias, ref->name)) {
            return items_[i];
          }
        }
      }
      FailBareColumn(*ref);
    }
    return nullptr;
  });
}

ExprPtr SelectPlanner::ProjectionRewrite(const ExprPtr& e) {
  std::function<ExprPtr(const ExprPtr&)> self = [&](const ExprPtr& x) {
    return ProjectionRewrite(x);
  };
  return Rewrite(e, [&](const ExprPtr& x) -> ExprPtr {
    const auto* f = x->As<FunctionCall>();
    if (!f) return nullptr;
    if (IsGroupingCall(*f)) {
      Fail(ErrorCode::kGroupingOfNonGroupColumn,
           "GROUPING needs an aggregation list");
    }
    if (OrderedKind(f->name)) return RegisterSlot(*f, false, self);
    return nullptr;
  });
}

std::optional<ExprPtr> SelectPlanner::TryDecoration(const SelectItem& item) {
  std::vector<std::string> names;
  if (!item.alias.empty()) names.push_back(item.alias);
  if (const auto* ref = item.expr->As<ColumnRef>()) names.push_back(ref->name);
  bool declared = false;
  for (const std::string& name : names) {
    for (const FunctionalDependency* fd : catalog_.DependenciesOf(name)) {
      declared = true;
      std::vector<std::size_t> dets;
      for (const std::string& d : fd->determinants) {
        if (auto i = MatchDeterminant(d)) dets.push_back(*i);
      }
      if (dets.size() != fd->determinants.size()) continue;
      DecorationItem dec;
      dec.expr = SourceRewrite(SubstituteAliases(item.expr), "a decoration");
      dec.alias = "#d" + std::to_string(decorations_.size());
      dec.determinants = std::move(dets);
      decorations_.push_back(std::move(dec));
      return Col(decorations_.back().alias);
    }
  }
  if (declared) {
    Fail(ErrorCode::kNotFunctionallyDependent,
         ToSql(item.expr) +
             " is not determined by the grouping columns of this query");
  }
  return std::nullopt;
}

void SelectPlanner::BindScope() {
  const ScalarRegistry& scalars = catalog_.scalars();
  // Hidden relation-wide columns, each able to see the earlier ones.
  std::vector<Column> aug(plan_.source.schema.columns().begin(),
                          plan_.source.schema.columns().end());
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    WindowPlan w;
    w.kind = windows_[i].kind;
    w.n = windows_[i].n;
    w.arg = Bind(windows_[i].arg, Schema(aug), scalars);
    aug.push_back({"#w" + std::to_string(i),
                   SlotType(w.kind, w.arg.type()), {}});
    plan_.windows.push_back(std::move(w));
  }
  plan_.augmented = Schema(aug);

  std::vector<Column> scope;
  if (grouped_) {
    GroupingSpec spec;
    std::vector<GroupingItem>* lists[] = {&spec.group_by, &spec.rollup,
                                          &spec.cube};
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      lists[groups_[i].list]->push_back(
          {groups_[i].source, "#k" + std::to_string(i)});
      plan_.grouping_names.push_back(groups_[i].name);
    }
    for (const AggEntry& a : aggs_) {
      spec.aggregates.push_back(a.item);
      plan_.aggregate_labels.push_back(ToSql(a.call));
    }
    spec.decorations = decorations_;
    spec.ordered_output = true;
    plan_.grouping.emplace(plan_.augmented, std::move(spec), scalars);
    const Schema& out = plan_.grouping->output_schema();
    scope.assign(out.columns().begin(), out.columns().end());
    plan_.flag_base = scope.size();
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      scope.push_back({"#g" + std::to_string(i), DataType::kBoolean, {}});
    }
  } else {
    scope = aug;
  }
  plan_.slot_base = scope.size();
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    Schema s(scope);
    SlotPlan p;
    p.kind = slots_[i].kind;
    p.n = slots_[i].n;
    p.late = slots_[i].late;
    p.arg = Bind(slots_[i].arg, s, scalars);
    for (const ExprPtr& r : slots_[i].resets) {
      p.resets.push_back(Bind(r, s, scalars));
    }
    scope.push_back({SlotName(i), SlotType(p.kind, p.arg.type()), {}});
    plan_.slots.push_back(std::move(p));
  }
  Schema full(scope);
  for (const ExprPtr& e : items_) {
    plan_.items.push_back(Bind(e, full, scalars));
  }
  if (having_) {
    BoundExpr h = Bind(having_, full, scalars);
    if (h.type() && *h.type() != DataType::kBoolean) {
      Fail(ErrorCode::kTypeMismatch, "HAVING needs a Boolean predicate");
    }
    plan_.having = std::move(h);
  }
  for (std::size_t i = 0; i < order_exprs_.size(); ++i) {
    bool late = Contains(order_exprs_[i], [&](const Expr& x) {
      const auto* ref = x.As<ColumnRef>();
      if (!ref || ref->name.rfind("#s", 0) != 0) return false;
      return slots_[std::stoul(ref->name.substr(2))].late;
    });
    if (late) {
      Fail(ErrorCode::kInvalidArgument,
           "ORDER BY cannot use a running function");
    }
    plan_.order.emplace_back(Bind(order_exprs_[i], full, scalars),
                             order_[i].descending);
  }
}

SelectPlan SelectPlanner::Build() {
  plan_.source = PlanSource(stmt_.from, catalog_);
  PlanWhere();
  CollectGrouping();

  bool aggregates = false;
  for (const SelectItem& item : stmt_.items) {
    aggregates = aggregates || ContainsAggregate(item.expr, catalog_);
  }
  if (stmt_.having) {
    aggregates = aggregates || ContainsAggregate(stmt_.having, catalog_);
  }
  grouped_ = stmt_.grouping.present || aggregates;
  if (stmt_.having && !grouped_) {
    Fail(ErrorCode::kInvalidArgument,
         "HAVING needs GROUP BY or an aggregate");
  }

  for (const SelectItem& item : stmt_.items) {
    ExprPtr rewritten;
    std::optional<std::size_t> key, flag;
    if (!grouped_) {
      rewritten = ProjectionRewrite(item.expr);
    } else {
      key = MatchGrouping(item.expr);
      const auto* f = item.expr->As<FunctionCall>();
      if (!key && !ContainsAggregate(item.expr, catalog_) &&
          !(f && (IsGroupingCall(*f) || OrderedKind(f->name)))) {
        if (auto dec = TryDecoration(item)) rewritten = *dec;
      }
      if (!rewritten) rewritten = ContextRewrite(item.expr, false);
      if (const auto* ref = rewritten->As<ColumnRef>()) {
        if (ref->name.rfind("#g", 0) == 0) {
          flag = std::stoul(ref->name.substr(2));
        }
      }
    }
    items_.push_back(rewritten);
    plan_.key_of_item.push_back(key);
    plan_.flag_of_item.push_back(flag);
    plan_.named.push_back(!item.alias.empty() ||
                          item.expr->As<ColumnRef>() != nullptr);
    plan_.names.push_back(item.alias.empty() ? DerivedName(item.expr)
                                             : item.alias);
  }
  if (stmt_.having) having_ = ContextRewrite(stmt_.having, true);

  for (const OrderItem& o : order_) {
    std::optional<std::size_t> pos;
    if (auto k = IntegerLiteral(o.expr)) {
      if (*k < 1 || static_cast<std::size_t>(*k) > items_.size()) {
        Fail(ErrorCode::kIndexOutOfRange,
             "ORDER BY position " + std::to_string(*k) + " is out of range");
      }
      pos = static_cast<std::size_t>(*k - 1);
    } else if (const auto* ref = o.expr->As<ColumnRef>();
               ref && ref->qualifier.empty()) {
      for (std::size_t i = 0; i < plan_.names.size() && !pos; ++i) {
        if (EqualsIgnoreCase(plan_.names[i], ref->name)) pos = i;
      }
    }
    if (pos) {
      order_exprs_.push_back(items_[*pos]);
    } else {
      order_exprs_.push_back(grouped_ ? ContextRewrite(o.expr, false)
                                      : ProjectionRewrite(o.expr));
    }
  }

  BindScope();
  return std::move(plan_);
}

Schema OutputSchema(const std::vector<std::string>& names,
                    const std::vector<DataType>& types) {
  std::vector<std::string> unique = Uniquify(names);
  std::vector<Column> cols;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    cols.push_back({unique[i], types[i], {}});
  }
  return Schema(std::move(cols));
}

std::optional<std::size_t> OutputPosition(const OrderItem& item,
                                          const Schema& output) {
  if (auto k = IntegerLiteral(item.expr)) {
    if (*k < 1 || static_cast<std::size_t>(*k) > output.size()) {
      Fail(ErrorCode::kIndexOutOfRange,
           "ORDER BY position " + std::to_string(*k) + " is out of range");
    }
    return static_cast<std::size_t>(*k - 1);
  }
  if (const auto* ref = item.expr->As<ColumnRef>()) {
    if (ref->qualifier.empty()) return output.Find(ref->name);
  }
  return std::nullopt;
}

std::shared_ptr<const QueryPlan> PlanQuery(const Query& query,
                                           const Catalog& catalog) {
  if (query.selects.empty()) {
    Fail(ErrorCode::kInvalidArgument, "empty query");
  }
  auto plan = std::make_shared<QueryPlan>();
  plan->ast = query;
  const bool single = query.selects.size() == 1;
  static const std::vector<OrderItem> kNoOrder;
  for (const SelectStmt& stmt : query.selects) {
    SelectPlanner planner(stmt, single ? query.order_by : kNoOrder, catalog);
    plan->selects.push_back(planner.Build());
  }
  const std::size_t arity = plan->selects[0].items.size();
  for (const SelectPlan& s : plan->selects) {
    if (s.items.size() != arity) {
      Fail(ErrorCode::kArityMismatch,
           "UNION branches have different numbers of columns");
    }
  }

  std::vector<std::string> names;
  std::vector<DataType> types;
  for (std::size_t c = 0; c < arity; ++c) {
    std::string name = plan->selects[0].names[c];
    for (const SelectPlan& s : plan->selects) {
      if (s.named[c]) {
        name = s.names[c];
        break;
      }
    }
    names.push_back(name);
    std::optional<DataType> type;
    bool text = false;
    for (const SelectPlan& s : plan->selects) {
      std::optional<DataType> t = s.items[c].type();
      if (!t) continue;
      if (!type) {
        type = t;
      } else if (*type != *t) {
        if (IsNumeric(*type) && IsNumeric(*t)) {
          type = DataType::kReal;
        } else {
          text = true;
        }
      }
    }
    types.push_back(text ? DataType::kText : type.value_or(DataType::kText));
  }
  plan->output = OutputSchema(names, types);

  if (!single) {
    for (const OrderItem& item : query.order_by) {
      std::optional<std::size_t> pos = OutputPosition(item, plan->output);
      if (!pos) {
        Fail(ErrorCode::kUnknownColumn,
             "ORDER BY of a UNION must name an output column: " +
                 ToSql(item.expr));
      }
      plan->union_order.emplace_back(*pos, item.descending);
    }
  }
  return plan;
}

}  // namespace

namespace {

void CheckSchema(const Relation& rel, const Schema& expected,
                 const std::string& name) {
  if (!(rel.schema() == expected)) {
    Fail(ErrorCode::kSchemaMismatch,
         "table " + name + " changed since the query was prepared");
  }
}

std::vector<Tuple> JoinRows(const std::vector<Tuple>& left, const JoinPlan& j,
                            const Relation& right) {
  auto key_of = [&](const Tuple& row, const std::vector<std::size_t>& idx)
      -> std::optional<Tuple> {
    Tuple key;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Value v = row[idx[i]];
      if (v.is_null()) return std::nullopt;
      if (j.widen[i] && v.kind() == ValueKind::kInteger) {
        v = Value::Real(static_cast<double>(v.as_int()));
      }
      key.push_back(std::move(v));
    }
    return key;
  };
  std::unordered_map<Tuple, std::vector<std::size_t>, TupleHash> index;
  for (std::size_t r = 0; r < right.size(); ++r) {
    if (auto key = key_of(right.rows()[r], j.right_keys)) {
      index[*key].push_back(r);
    }
  }
  std::vector<Tuple> out;
  for (const Tuple& row : left) {
    std::optional<Tuple> key = key_of(row, j.left_keys);
    if (!key) continue;
    auto it = index.find(*key);
    if (it == index.end()) continue;
    for (std::size_t r : it->second) {
      Tuple t = *key;
      for (std::size_t i : j.left_rest) t.push_back(row[i]);
      for (std::size_t i : j.right_rest) t.push_back(right.rows()[r][i]);
      out.push_back(std::move(t));
    }
  }
  return out;
}

// All sorts after the concrete values, as in grouped results.
int CompareKey(const Value& a, const Value& b) {
  if (a.is_all() != b.is_all()) return a.is_all() ? 1 : -1;
  return CompareTotal(a, b);
}

std::vector<Value> ApplyFunction(FnKind kind, std::int64_t n,
                                 std::span<const Value> values,
                                 std::span<const Tuple> resets) {
  switch (kind) {
    case FnKind::kNTile:
      return NTile(values, n);
    case FnKind::kRank:
      return RankAll(values);
    case FnKind::kRatio:
      return RatioToTotal(values);
    case FnKind::kCumulative:
      return Cumulative(values, resets);
    case FnKind::kRunningSum:
      return RunningSum(values, n, resets);
    case FnKind::kRunningAverage:
      return RunningAverage(values, n, resets);
  }
  return {};
}

void ComputeSlot(const SlotPlan& slot, std::size_t column,
                 std::vector<Tuple>& rows) {
  std::vector<Value> values;
  std::vector<Tuple> resets;
  values.reserve(rows.size());
  for (const Tuple& row : rows) {
    values.push_back(slot.arg.Evaluate(row));
    if (!slot.resets.empty()) {
      Tuple key;
      for (const BoundExpr& r : slot.resets) key.push_back(r.Evaluate(row));
      resets.push_back(std::move(key));
    }
  }
  std::vector<Value> out = ApplyFunction(slot.kind, slot.n, values, resets);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i][column] = std::move(out[i]);
  }
}

struct SelectOutput {
  std::vector<Tuple> rows;
  std::vector<GroupingMask> masks;
  std::optional<CubeStats> stats;
};

QueryResult ExecutePlan(const QueryPlan& plan, const Catalog& catalog,
                        const QueryOptions& options);

SelectOutput RunSelect(const SelectPlan& p, const Catalog& catalog,
                       const QueryOptions& options) {
  const std::vector<Tuple>* rows = nullptr;
  std::vector<Tuple> owned;
  const Relation* table = nullptr;
  if (p.source.subquery) {
    QueryOptions inner = options;
    inner.mode = OutputMode::kAllTokens;
    owned = ExecutePlan(*p.source.subquery, catalog, inner).relation.rows();
    rows = &owned;
  } else {
    table = &catalog.Table(p.source.table);
    CheckSchema(*table, p.source.table_schema, p.source.table);
    rows = &table->rows();
  }
  for (const JoinPlan& j : p.source.joins) {
    const Relation& right = catalog.Table(j.table);
    CheckSchema(right, j.right_schema, j.table);
    owned = JoinRows(*rows, j, right);
    rows = &owned;
  }
  if (p.where) {
    std::vector<Tuple> kept;
    for (const Tuple& row : *rows) {
      if (p.where->Test(row)) kept.push_back(row);
    }
    owned = std::move(kept);
    rows = &owned;
  }
  if (!p.windows.empty()) {
    if (rows != &owned) owned = *rows;
    rows = &owned;
    for (const WindowPlan& w : p.windows) {
      std::vector<Value> values;
      values.reserve(owned.size());
      for (const Tuple& row : owned) values.push_back(w.arg.Evaluate(row));
      std::vector<Value> out = ApplyFunction(w.kind, w.n, values, {});
      for (std::size_t i = 0; i < owned.size(); ++i) {
        owned[i].push_back(std::move(out[i]));
      }
    }
  }

  SelectOutput result;
  std::vector<Tuple> ctx;
  const std::size_t n_slots = p.slots.size();
  if (p.grouping) {
    CubeResult cube;
    if (table && rows == &table->rows()) {
      cube = Compute(*table, *p.grouping, options.strategy);
    } else {
      Relation input(p.augmented, std::move(owned));
      cube = Compute(input, *p.grouping, options.strategy);
    }
    const std::size_t width = p.grouping->width();
    ctx.reserve(cube.relation.size());
    for (std::size_t i = 0; i < cube.relation.size(); ++i) {
      Tuple t = cube.relation.rows()[i];
      for (std::size_t g = 0; g < width; ++g) {
        t.push_back(Value::Bool(cube.masks[i].all(g)));
      }
      t.resize(t.size() + n_slots);
      ctx.push_back(std::move(t));
    }
    result.masks = std::move(cube.masks);
    result.stats = std::move(cube.stats);
  } else {
    ctx.reserve(rows->size());
    for (const Tuple& row : *rows) {
      Tuple t = row;
      t.resize(t.size() + n_slots);
      ctx.push_back(std::move(t));
    }
  }

  if (p.having) {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (!p.having->Test(ctx[i])) continue;
      if (kept != i) {
        ctx[kept] = std::move(ctx[i]);
        if (!result.masks.empty()) result.masks[kept] = result.masks[i];
      }
      ++kept;
    }
    ctx.resize(kept);
    if (!result.masks.empty()) result.masks.resize(kept);
  }

  for (std::size_t s = 0; s < n_slots; ++s) {
    if (!p.slots[s].late) ComputeSlot(p.slots[s], p.slot_base + s, ctx);
  }
  if (!p.order.empty()) {
    std::vector<Tuple> keys;
    keys.reserve(ctx.size());
    for (const Tuple& row : ctx) {
      Tuple key;
      for (const auto& [expr, desc] : p.order) key.push_back(expr.Evaluate(row));
      keys.push_back(std::move(key));
    }
    std::vector<std::size_t> perm(ctx.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      for (std::size_t k = 0; k < p.order.size(); ++k) {
        int c = CompareKey(keys[a][k], keys[b][k]);
        if (c != 0) return p.order[k].second ? c > 0 : c < 0;
      }
      return false;
    });
    std::vector<Tuple> sorted;
    std::vector<GroupingMask> masks;
    sorted.reserve(ctx.size());
    for (std::size_t i : perm) {
      sorted.push_back(std::move(ctx[i]));
      if (!result.masks.empty()) masks.push_back(result.masks[i]);
    }
    ctx = std::move(sorted);
    if (!result.masks.empty()) result.masks = std::move(masks);
  }
  for (std::size_t s = 0; s < n_slots; ++s) {
    if (p.slots[s].late) ComputeSlot(p.slots[s], p.slot_base + s, ctx);
  }

  result.rows.reserve(ctx.size());
  for (const Tuple& row : ctx) {
    Tuple out;
    out.reserve(p.items.size());
    for (const BoundExpr& item : p.items) out.push_back(item.Evaluate(row));
    result.rows.push_back(std::move(out));
  }
  return result;
}

QueryResult ExecutePlan(const QueryPlan& plan, const Catalog& catalog,
                        const QueryOptions& options) {
  QueryResult result;
  std::vector<Tuple> rows;
  for (std::size_t b = 0; b < plan.selects.size(); ++b) {
    const SelectPlan& s = plan.selects[b];
    SelectOutput out = RunSelect(s, catalog, options);
    if (out.stats) result.stats.push_back(std::move(*out.stats));
    for (std::size_t c = 0; c < plan.output.size(); ++c) {
      std::optional<DataType> t = s.items[c].type();
      if (plan.output[c].type != DataType::kText || !t ||
          *t == DataType::kText) {
        continue;
      }
      for (Tuple& row : out.rows) {
        if (!row[c].is_marker()) row[c] = Value::Text(row[c].ToString());
      }
    }
    if (b == 0) {
      rows = std::move(out.rows);
      result.masks = std::move(out.masks);
      continue;
    }
    rows.insert(rows.end(), std::make_move_iterator(out.rows.begin()),
                std::make_move_iterator(out.rows.end()));
    if (!plan.ast.union_all[b - 1]) {
      std::unordered_set<Tuple, TupleHash> seen;
      std::vector<Tuple> distinct;
      for (Tuple& row : rows) {
        if (seen.insert(row).second) distinct.push_back(std::move(row));
      }
      rows = std::move(distinct);
    }
  }

  if (plan.selects.size() == 1) {
    const SelectPlan& s = plan.selects[0];
    result.grouping_names = s.grouping_names;
    for (std::size_t c = 0; c < s.key_of_item.size(); ++c) {
      if (!s.key_of_item[c]) continue;
      for (std::size_t f = 0; f < s.flag_of_item.size(); ++f) {
        if (s.flag_of_item[f] == s.key_of_item[c]) {
          result.grouping_columns.push_back({c, f});
          break;
        }
      }
    }
  } else {
    result.masks.clear();
    if (!plan.union_order.empty()) {
      std::stable_sort(rows.begin(), rows.end(),
                       [&](const Tuple& a, const Tuple& b) {
                         for (const auto& [col, desc] : plan.union_order) {
                           int c = CompareKey(a[col], b[col]);
                           if (c != 0) return desc ? c > 0 : c < 0;
                         }
                         return false;
                       });
    }
  }

  if (options.mode == OutputMode::kNullEmulation) {
    for (Tuple& row : rows) {
      for (Value& v : row) {
        if (v.is_all()) v = Value::Null();
      }
    }
  }
  result.relation = Relation(plan.output, std::move(rows));
  return result;
}

std::string StrategyName(CubeStrategy s) {
  switch (s) {
    case CubeStrategy::kAuto:
      return "auto";
    case CubeStrategy::kNaive:
      return "naive";
    case CubeStrategy::kCascade:
      return "cascade";
  }
  return "";
}

}  // namespace

const Query& PreparedQuery::ast() const { return plan_->ast; }

const Schema& PreparedQuery::output_schema() const { return plan_->output; }

QueryResult PreparedQuery::Execute(const Catalog& catalog,
                                   const QueryOptions& options) const {
  return ExecutePlan(*plan_, catalog, options);
}

std::string PreparedQuery::Explain(const Catalog& catalog,
                                   const QueryOptions& options) const {
  QueryResult result = Execute(catalog, options);
  std::ostringstream out;
  out << "query: " << ToSql(plan_->ast) << "\n";
  std::size_t next_stats = 0;
  for (std::size_t b = 0; b < plan_->selects.size(); ++b) {
    const SelectPlan& s = plan_->selects[b];
    out << "select " << b + 1 << ": from " << s.source.label << "\n";
    if (!s.grouping) {
      out << "  projection, no grouping\n";
      continue;
    }
    const std::vector<std::string>& names = s.grouping_names;
    const std::vector<GroupingMask>& sets = s.grouping->grouping_sets();
    out << "  grouping sets (" << sets.size() << "):";
    for (GroupingMask m : sets) out << " " << m.Describe(names);
    out << "\n";
    const GroupingSpec& spec = s.grouping->spec();
    for (std::size_t a = 0; a < spec.aggregates.size(); ++a) {
      Classification c = spec.aggregates[a].function->classify();
      out << "  aggregate " << s.aggregate_labels[a] << ": "
          << TaxonomyName(c.select) << " select, "
          << TaxonomyName(c.insert) << " insert, "
          << TaxonomyName(c.del) << " delete\n";
    }
    if (next_stats >= result.stats.size()) continue;
    const CubeStats& stats = result.stats[next_stats++];
    out << "  strategy: " << StrategyName(stats.strategy) << ", "
        << stats.base_rows << " base rows, " << stats.rows_folded
        << " values folded, " << stats.merges << " merges\n";
    for (const NodePlan& node : stats.nodes) {
      out << "    " << node.mask.Describe(names) << " <- "
          << (node.parent ? node.parent->Describe(names) : "base") << ", "
          << node.rows << " rows\n";
    }
  }
  return out.str();
}

PreparedQuery Prepare(const Query& query, const Catalog& catalog) {
  PreparedQuery p;
  p.plan_ = PlanQuery(query, catalog);
  return p;
}

PreparedQuery Prepare(std::string_view sql, const Catalog& catalog) {
  return Prepare(Parse(sql), catalog);
}

QueryResult Execute(std::string_view sql, const Catalog& catalog,
                    const QueryOptions& options) {
  return Prepare(sql, catalog).Execute(catalog, options);
}

Relation ToNullEmulation(const Relation& relation) {
  std::vector<Tuple> rows = relation.rows();
  for (Tuple& row : rows) {
    for (Value& v : row) {
      if (v.is_all()) v = Value::Null();
    }
  }
  return Relation(relation.schema(), std::move(rows));
}

Relation ToAllTokens(const Relation& relation,
                     std::span<const GroupingColumn> columns) {
  std::vector<Tuple> rows = relation.rows();
  for (const GroupingColumn& g : columns) {
    if (g.value_column >= relation.schema().size() ||
        g.flag_column >= relation.schema().size()) {
      Fail(ErrorCode::kIndexOutOfRange, "grouping column out of range");
    }
  }
  for (Tuple& row : rows) {
    for (const GroupingColumn& g : columns) {
      const Value& flag = row[g.flag_column];
      if (flag.kind() == ValueKind::kBoolean && flag.as_bool()) {
        row[g.value_column] = Value::All();
      }
    }
  }
  return Relation(relation.schema(), std::move(rows));
}

}  // namespace datacube
