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

#include "datacube/grouping/grouping.h"

#include <algorithm>
#include <bit>
#include <map>
#include <utility>

#include "datacube/error.h"

namespace datacube {
namespace {

constexpr std::size_t kMaxWidth = 63;
constexpr std::size_t kMaxCubeColumns = 30;

std::string DerivedName(const ExprPtr& e) {
  if (const auto* ref = e->As<ColumnRef>()) return ref->name;
  return ToSql(e);
}

std::string AggregateName(const AggregateItem& item) {
  return item.function->name() + "(" +
         (item.argument ? ToSql(item.argument) : std::string("*")) + ")";
}

using CellMap = std::unordered_map<Tuple, CellState, TupleHash>;

}  // namespace

std::size_t GroupingMask::count() const {
  return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<std::size_t> GroupingMask::Present(std::size_t width) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < width; ++i) {
    if (!all(i)) out.push_back(i);
  }
  return out;
}

std::string GroupingMask::Describe(std::span<const std::string> names) const {
  std::string out = "(";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += all(i) ? "ALL" : names[i];
  }
  return out + ")";
}

std::vector<GroupingMask> GroupingSets(std::size_t group_by,
                                       std::size_t rollup, std::size_t cube) {
  if (group_by + rollup + cube > kMaxWidth) {
    Fail(ErrorCode::kInvalidSpec, "too many grouping columns");
  }
  if (cube > kMaxCubeColumns) {
    Fail(ErrorCode::kInvalidSpec, "too many CUBE columns");
  }
  std::vector<GroupingMask> sets;
  for (std::size_t k = rollup + 1; k-- > 0;) {
    GroupingMask rollup_part;
    for (std::size_t i = group_by + k; i < group_by + rollup; ++i) {
      rollup_part.set_all(i);
    }
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << cube);
         ++subset) {
      GroupingMask m = rollup_part;
      for (std::size_t j = 0; j < cube; ++j) {
        if ((subset >> j) & 1) m.set_all(group_by + rollup + j);
      }
      sets.push_back(m);
    }
  }
  return sets;
}

std::optional<std::size_t> CubeResult::Find(const Tuple& coords) const {
  if (coords.size() != grouping_width) return std::nullopt;
  auto it = index.find(coords);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const Tuple& CellLookup(const CubeResult& result, const Tuple& coords) {
  if (coords.size() != result.grouping_width) {
    Fail(ErrorCode::kArityMismatch,
         "cell coordinates need " + std::to_string(result.grouping_width) +
             " values, got " + std::to_string(coords.size()));
  }
  auto row = result.Find(coords);
  if (!row) {
    std::string text;
    for (const Value& v : coords) {
      text += (text.empty() ? "" : ", ") + v.ToString();
    }
    Fail(ErrorCode::kNotFound, "no cell at (" + text + ")");
  }
  return result.relation[*row];
}

std::optional<std::set<Value, ValueLess>> AllSet(const CubeResult& result,
                                                 std::size_t row,
                                                 std::size_t column) {
  if (row >= result.relation.size() || column >= result.grouping_width) {
    Fail(ErrorCode::kIndexOutOfRange,
         "no cell at row " + std::to_string(row) + ", column " +
             std::to_string(column));
  }
  const Tuple& coords = result.relation[row];
  if (!coords[column].is_all()) return std::nullopt;
  std::set<Value, ValueLess> out;
  if (!result.source_keys) return out;
  for (const Tuple& key : *result.source_keys) {
    bool match = true;
    for (std::size_t j = 0; j < result.grouping_width && match; ++j) {
      match = coords[j].is_all() || key[j] == coords[j];
    }
    if (match) out.insert(key[column]);
  }
  return out;
}

void DecorationState::Add(const Value& v) {
  if (!value) {
    value = v;
  } else if (!(*value == v)) {
    conflict = true;
  }
}

void DecorationState::Merge(const DecorationState& other) {
  conflict = conflict || other.conflict;
  if (other.value) Add(*other.value);
}

GroupingPlan::GroupingPlan(const Schema& source, GroupingSpec spec,
                           const ScalarRegistry& scalars)
    : spec_(std::move(spec)), source_(source) {
  const std::vector<GroupingItem>* lists[] = {&spec_.group_by, &spec_.rollup,
                                              &spec_.cube};
  width_ = spec_.group_by.size() + spec_.rollup.size() + spec_.cube.size();
  if (width_ == 0 && spec_.aggregates.empty() && spec_.decorations.empty()) {
    Fail(ErrorCode::kInvalidSpec, "nothing to group or aggregate");
  }
  sets_ = GroupingSets(spec_.group_by.size(), spec_.rollup.size(),
                       spec_.cube.size());

  std::vector<const GroupingItem*> items;
  std::vector<int> list_of;
  for (int l = 0; l < 3; ++l) {
    for (const GroupingItem& item : *lists[l]) {
      if (!item.expr) Fail(ErrorCode::kInvalidSpec, "empty grouping item");
      items.push_back(&item);
      list_of.push_back(l);
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (list_of[i] != list_of[j] &&
          SameExpr(items[i]->expr, items[j]->expr, /*ignore_case=*/true)) {
        Fail(ErrorCode::kOverlappingLists,
             ToSql(items[i]->expr) + " appears in two aggregation lists");
      }
    }
  }

  std::vector<Column> out;
  for (const GroupingItem* item : items) {
    keys_.push_back(Bind(item->expr, source_, scalars));
    names_.push_back(item->alias.empty() ? DerivedName(item->expr)
                                         : item->alias);
    out.push_back({names_.back(), keys_.back().type().value_or(DataType::kText),
                   {}});
  }
  for (const DecorationItem& d : spec_.decorations) {
    if (!d.expr) Fail(ErrorCode::kInvalidSpec, "empty decoration");
    for (std::size_t det : d.determinants) {
      if (det >= width_) {
        Fail(ErrorCode::kInvalidSpec,
             "decoration determinant " + std::to_string(det) +
                 " is not a grouping column");
      }
    }
    decorations_.push_back(Bind(d.expr, source_, scalars));
    out.push_back({d.alias.empty() ? DerivedName(d.expr) : d.alias,
                   decorations_.back().type().value_or(DataType::kText),
                   {}});
  }
  for (const AggregateItem& a : spec_.aggregates) {
    if (!a.function) Fail(ErrorCode::kInvalidSpec, "aggregate has no function");
    if (a.function->definition().ordered && !spec_.ordered_output) {
      Fail(ErrorCode::kOrderedAggregateWithoutOrder,
           a.function->name() + " needs an ordered output");
    }
    std::optional<DataType> input;
    if (a.argument) {
      args_.push_back(Bind(a.argument, source_, scalars));
      input = args_.back()->type();
    } else {
      if (!a.function->counts_nulls()) {
        Fail(ErrorCode::kInvalidSpec,
             a.function->name() + " needs an argument");
      }
      args_.push_back(std::nullopt);
    }
    holistic_ = holistic_ || a.function->holistic();
    out.push_back({a.alias.empty() ? AggregateName(a) : a.alias,
                   a.function->ResultType(input),
                   {}});
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (EqualsIgnoreCase(out[i].name, out[j].name)) {
        Fail(ErrorCode::kDuplicateName,
             "output column " + out[i].name + " is defined twice");
      }
    }
  }
  output_ = Schema(std::move(out));
}

GroupingPlan::RowValues GroupingPlan::Evaluate(
    std::span<const Value> row) const {
  RowValues v;
  v.key.reserve(keys_.size());
  for (const BoundExpr& k : keys_) v.key.push_back(k.Evaluate(row));
  v.inputs.reserve(args_.size());
  for (const auto& a : args_) {
    v.inputs.push_back(a ? a->Evaluate(row) : Value::Null());
  }
  v.decorations.reserve(decorations_.size());
  for (const BoundExpr& d : decorations_) v.decorations.push_back(d.Evaluate(row));
  return v;
}

CellState GroupingPlan::NewCell() const {
  CellState cell;
  cell.pads.reserve(spec_.aggregates.size());
  for (const AggregateItem& a : spec_.aggregates) {
    cell.pads.push_back(a.function->Start());
  }
  cell.decorations.resize(decorations_.size());
  return cell;
}

void GroupingPlan::Accumulate(CellState& cell, const RowValues& row) const {
  for (std::size_t i = 0; i < cell.pads.size(); ++i) {
    spec_.aggregates[i].function->Next(cell.pads[i], row.inputs[i]);
  }
  for (std::size_t i = 0; i < cell.decorations.size(); ++i) {
    cell.decorations[i].Add(row.decorations[i]);
  }
  ++cell.rows;
}

void GroupingPlan::Merge(CellState& into, const CellState& from) const {
  for (std::size_t i = 0; i < into.pads.size(); ++i) {
    spec_.aggregates[i].function->Merge(into.pads[i], from.pads[i]);
  }
  for (std::size_t i = 0; i < into.decorations.size(); ++i) {
    into.decorations[i].Merge(from.decorations[i]);
  }
  into.rows += from.rows;
}

Tuple GroupingPlan::Project(const Tuple& key, GroupingMask mask) const {
  Tuple out = key;
  for (std::size_t i = 0; i < width_; ++i) {
    if (mask.all(i)) out[i] = Value::All();
  }
  return out;
}

Tuple GroupingPlan::Finish(const Tuple& coords, GroupingMask mask,
                           const CellState& cell) const {
  Tuple out = coords;
  out.reserve(output_.size());
  for (std::size_t i = 0; i < cell.decorations.size(); ++i) {
    const DecorationItem& d = spec_.decorations[i];
    bool determined = std::none_of(d.determinants.begin(), d.determinants.end(),
                                   [&](std::size_t c) { return mask.all(c); });
    const DecorationState& s = cell.decorations[i];
    if (!determined) {
      out.push_back(Value::Null());
      continue;
    }
    if (s.conflict) {
      std::string where;
      for (const Value& v : coords) {
        where += (where.empty() ? "" : ", ") + v.ToString();
      }
      Fail(ErrorCode::kDependencyViolated,
           output_[width_ + i].name + " has several values in group (" +
               where + ")");
    }
    out.push_back(s.value.value_or(Value::Null()));
  }
  for (std::size_t i = 0; i < cell.pads.size(); ++i) {
    out.push_back(spec_.aggregates[i].function->End(cell.pads[i]));
  }
  return out;
}

bool CoordinateLess(const Tuple& a, const Tuple& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    bool aa = a[i].is_all(), ba = b[i].is_all();
    if (aa != ba) return ba;
    if (aa) continue;
    int c = CompareTotal(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

CubeResult Compute(const Relation& rel, const GroupingPlan& plan,
                   CubeStrategy strategy) {
  if (!(rel.schema() == plan.source_schema())) {
    Fail(ErrorCode::kSchemaMismatch,
         "relation does not match the schema the plan was built for");
  }
  if (strategy == CubeStrategy::kAuto) {
    strategy = plan.holistic() ? CubeStrategy::kNaive : CubeStrategy::kCascade;
  }
  if (strategy == CubeStrategy::kCascade && plan.holistic()) {
    Fail(ErrorCode::kHolisticAggregate,
         "a holistic aggregate cannot be cascaded; use the naive strategy");
  }
  const std::size_t width = plan.width();
  const std::size_t n_aggs = plan.spec().aggregates.size();
  const auto& sets = plan.grouping_sets();

  CubeResult result;
  result.grouping_width = width;
  result.grouping_sets = sets;
  result.stats.strategy = strategy;
  result.stats.base_rows = rel.size();

  std::vector<GroupingPlan::RowValues> rows;
  rows.reserve(rel.size());
  auto keys = std::make_shared<std::vector<Tuple>>();
  keys->reserve(rel.size());
  result.all_sets.resize(width);
  for (const Tuple& r : rel.rows()) {
    rows.push_back(plan.Evaluate(r));
    keys->push_back(rows.back().key);
    for (std::size_t i = 0; i < width; ++i) {
      result.all_sets[i].insert(rows.back().key[i]);
    }
  }
  result.source_keys = keys;

  std::vector<CellMap> nodes(sets.size());
  auto from_base = [&](std::size_t s) {
    CellMap& node = nodes[s];
    for (const auto& row : rows) {
      Tuple coords = plan.Project(row.key, sets[s]);
      auto it = node.find(coords);
      if (it == node.end()) {
        it = node.emplace(std::move(coords), plan.NewCell()).first;
      }
      plan.Accumulate(it->second, row);
    }
    result.stats.rows_folded += rows.size() * n_aggs;
  };
  auto from_parent = [&](std::size_t s, std::size_t p) {
    CellMap& node = nodes[s];
    for (const auto& [coords, cell] : nodes[p]) {
      Tuple child = plan.Project(coords, sets[s]);
      auto it = node.find(child);
      if (it == node.end()) {
        node.emplace(std::move(child), cell);
      } else {
        plan.Merge(it->second, cell);
        ++result.stats.merges;
      }
    }
  };

  // Sets with more present columns first, so every parent is ready before
  // its children.
  std::vector<std::size_t> order(sets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return sets[a].count() < sets[b].count();
  });
  std::vector<bool> done(sets.size(), false);
  for (std::size_t s : order) {
    NodePlan node_plan{sets[s], std::nullopt, 0};
    std::optional<std::size_t> parent;
    if (strategy == CubeStrategy::kCascade) {
      std::vector<std::size_t> best_present;
      for (std::size_t p = 0; p < sets.size(); ++p) {
        if (!done[p]) continue;
        std::uint64_t extra = sets[s].bits() & ~sets[p].bits();
        if ((sets[p].bits() & ~sets[s].bits()) != 0 ||
            std::popcount(extra) != 1) {
          continue;
        }
        // Smallest parent first; ties go to the lexicographically
        // smallest list of present columns.
        std::vector<std::size_t> present = sets[p].Present(width);
        if (!parent || nodes[p].size() < nodes[*parent].size() ||
            (nodes[p].size() == nodes[*parent].size() &&
             present < best_present)) {
          parent = p;
          best_present = std::move(present);
        }
      }
    }
    if (parent) {
      from_parent(s, *parent);
      node_plan.parent = sets[*parent];
    } else {
      from_base(s);
    }
    // A grouping set with no present column always yields one row, even
    // over empty input, like a scalar aggregate.
    if (sets[s].count() == width && nodes[s].empty()) {
      nodes[s].emplace(Tuple(width, Value::All()), plan.NewCell());
    }
    node_plan.rows = nodes[s].size();
    result.stats.nodes.push_back(node_plan);
    done[s] = true;
  }

  struct Entry {
    const Tuple* coords;
    GroupingMask mask;
    const CellState* cell;
  };
  std::vector<Entry> entries;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (const auto& [coords, cell] : nodes[s]) {
      entries.push_back({&coords, sets[s], &cell});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) {
              return CoordinateLess(*a.coords, *b.coords);
            });
  std::vector<Tuple> out_rows;
  out_rows.reserve(entries.size());
  result.masks.reserve(entries.size());
  for (const Entry& e : entries) {
    result.index.emplace(*e.coords, out_rows.size());
    out_rows.push_back(plan.Finish(*e.coords, e.mask, *e.cell));
    result.masks.push_back(e.mask);
  }
  result.relation = Relation(plan.output_schema(), std::move(out_rows));
  return result;
}

namespace {

void RequireOnly(const GroupingSpec& spec, bool group_by, bool rollup,
                 bool cube, const char* op) {
  if ((!group_by && !spec.group_by.empty()) ||
      (!rollup && !spec.rollup.empty()) || (!cube && !spec.cube.empty())) {
    Fail(ErrorCode::kInvalidSpec,
         std::string(op) + " was given an aggregation list it does not use");
  }
}

CubeResult Run(const Relation& rel, const GroupingSpec& spec,
               const ScalarRegistry& scalars, CubeStrategy strategy) {
  GroupingPlan plan(rel.schema(), spec, scalars);
  return Compute(rel, plan, strategy);
}

}  // namespace

CubeResult GroupBy(const Relation& rel, const GroupingSpec& spec,
                   const ScalarRegistry& scalars) {
  RequireOnly(spec, true, false, false, "group_by");
  return Run(rel, spec, scalars, CubeStrategy::kAuto);
}

CubeResult Rollup(const Relation& rel, const GroupingSpec& spec,
                  const ScalarRegistry& scalars) {
  RequireOnly(spec, true, true, false, "rollup");
  return Run(rel, spec, scalars, CubeStrategy::kAuto);
}

CubeResult Cube(const Relation& rel, const GroupingSpec& spec,
                const ScalarRegistry& scalars) {
  RequireOnly(spec, true, false, true, "cube");
  return Run(rel, spec, scalars, CubeStrategy::kAuto);
}

CubeResult CubeNaive(const Relation& rel, const GroupingSpec& spec,
                     const ScalarRegistry& scalars) {
  return Run(rel, spec, scalars, CubeStrategy::kNaive);
}

CubeResult CubeCascade(const Relation& rel, const GroupingSpec& spec,
                       const ScalarRegistry& scalars) {
  return Run(rel, spec, scalars, CubeStrategy::kCascade);
}

CubeResult Compound(const Relation& rel, const GroupingSpec& spec,
                    const ScalarRegistry& scalars) {
  return Run(rel, spec, scalars, CubeStrategy::kAuto);
}

const ScalarRegistry& BuiltinScalars() {
  static const ScalarRegistry* registry =
      new ScalarRegistry(ScalarRegistry::WithBuiltins());
  return *registry;
}

}  // namespace datacube
