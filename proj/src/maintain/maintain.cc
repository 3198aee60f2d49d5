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

#include "datacube/maintain/maintain.h"

#include <algorithm>
#include <numeric>

#include "datacube/error.h"

namespace datacube {

MaterializedCube::MaterializedCube(const Relation& base, GroupingSpec spec,
                                   const ScalarRegistry& scalars) {
  for (const AggregateItem& a : spec.aggregates) {
    if (a.function && a.function->classify().insert == Taxonomy::kHolistic) {
      Fail(ErrorCode::kHolisticInsertClass,
           a.function->name() + " cannot be maintained under inserts");
    }
  }
  plan_ = std::make_shared<const GroupingPlan>(base.schema(), std::move(spec),
                                               scalars);
  for (const AggregateItem& a : plan_->spec().aggregates) {
    retractable_.push_back(a.function->can_retract());
  }
  needs_recompute_on_delete_ =
      !plan_->spec().decorations.empty() ||
      std::find(retractable_.begin(), retractable_.end(), false) !=
          retractable_.end();
  for (const Tuple& row : base.rows()) {
    ++base_[Validate(row)];
    ++base_size_;
  }
  Rebuild();
}

std::size_t MaterializedCube::dirty_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return dirty_.size();
}

Tuple MaterializedCube::Validate(Tuple row) const {
  Relation probe(plan_->source_schema());
  row = probe.Conform(std::move(row));
  for (const Value& v : row) {
    if (v.is_all()) {
      Fail(ErrorCode::kInvalidArgument, "base rows cannot contain ALL");
    }
  }
  return row;
}

void MaterializedCube::Rebuild() {
  std::lock_guard<std::mutex> lock(mu_);
  cells_.clear();
  dirty_.clear();
  const std::vector<GroupingMask>& sets = plan_->grouping_sets();
  auto add = [&](const Tuple& coords, GroupingMask mask,
                 const GroupingPlan::RowValues& rv, std::size_t times) {
    auto [it, fresh] = cells_.try_emplace(coords);
    if (fresh) it->second = {mask, plan_->NewCell()};
    for (std::size_t i = 0; i < times; ++i) {
      plan_->Accumulate(it->second.state, rv);
    }
  };
  if (plan_->holistic()) {
    for (const auto& [row, count] : base_) {
      GroupingPlan::RowValues rv = plan_->Evaluate(row);
      for (GroupingMask m : sets) add(plan_->Project(rv.key, m), m, rv, count);
    }
    return;
  }
  // Core cells from the base, every other set merged from the core.
  GroupingMask core = sets.front();
  std::vector<Tuple> core_keys;
  for (const auto& [row, count] : base_) {
    GroupingPlan::RowValues rv = plan_->Evaluate(row);
    Tuple coords = plan_->Project(rv.key, core);
    if (!cells_.count(coords)) core_keys.push_back(coords);
    add(coords, core, rv, count);
  }
  for (std::size_t s = 1; s < sets.size(); ++s) {
    for (const Tuple& key : core_keys) {
      const CellState& from = cells_.at(key).state;
      Tuple coords = plan_->Project(key, sets[s]);
      auto [it, fresh] = cells_.try_emplace(coords);
      if (fresh) {
        it->second = {sets[s], from};
      } else {
        plan_->Merge(it->second.state, from);
      }
    }
  }
}

void MaterializedCube::Insert(Tuple row) {
  row = Validate(std::move(row));
  GroupingPlan::RowValues rv = plan_->Evaluate(row);
  ++base_[row];
  ++base_size_;
  ++stats_.inserts;
  std::lock_guard<std::mutex> lock(mu_);
  for (GroupingMask m : plan_->grouping_sets()) {
    Tuple coords = plan_->Project(rv.key, m);
    auto [it, fresh] = cells_.try_emplace(std::move(coords));
    if (fresh) {
      it->second = {m, plan_->NewCell()};
      ++stats_.cells_created;
    }
    plan_->Accumulate(it->second.state, rv);
    ++stats_.cells_touched;
  }
}

void MaterializedCube::Delete(Tuple row) {
  row = Validate(std::move(row));
  auto found = base_.find(row);
  if (found == base_.end()) {
    std::string text;
    for (const Value& v : row) text += (text.empty() ? "" : ", ") + v.ToString();
    Fail(ErrorCode::kRowNotFound, "row (" + text + ") is not in the base");
  }
  if (--found->second == 0) base_.erase(found);
  --base_size_;
  ++stats_.deletes;
  GroupingPlan::RowValues rv = plan_->Evaluate(row);
  std::lock_guard<std::mutex> lock(mu_);
  for (GroupingMask m : plan_->grouping_sets()) {
    Tuple coords = plan_->Project(rv.key, m);
    auto it = cells_.find(coords);
    if (it == cells_.end()) continue;  // cannot happen for a base row
    CellState& cell = it->second.state;
    if (--cell.rows == 0) {
      dirty_.erase(coords);
      cells_.erase(it);
      ++stats_.cells_removed;
      continue;
    }
    for (std::size_t i = 0; i < cell.pads.size(); ++i) {
      if (retractable_[i]) {
        plan_->spec().aggregates[i].function->Retract(cell.pads[i],
                                                      rv.inputs[i]);
      }
    }
    if (needs_recompute_on_delete_) {
      if (dirty_.insert(coords).second) ++stats_.cells_dirtied;
    } else {
      ++stats_.cells_retracted;
    }
  }
}

void MaterializedCube::Update(Tuple old_row, Tuple new_row) {
  new_row = Validate(std::move(new_row));
  Delete(std::move(old_row));
  Insert(std::move(new_row));
}

void MaterializedCube::ResolveDirty() const {
  if (dirty_.empty()) return;
  std::unordered_map<Tuple, CellState, TupleHash> rebuilt;
  for (const Tuple& coords : dirty_) rebuilt.emplace(coords, plan_->NewCell());
  for (const auto& [row, count] : base_) {
    GroupingPlan::RowValues rv = plan_->Evaluate(row);
    for (GroupingMask m : plan_->grouping_sets()) {
      auto it = rebuilt.find(plan_->Project(rv.key, m));
      if (it == rebuilt.end()) continue;
      for (std::size_t i = 0; i < count; ++i) {
        plan_->Accumulate(it->second, rv);
      }
    }
  }
  for (auto& [coords, state] : rebuilt) {
    cells_.at(coords).state = std::move(state);
    ++stats_.cells_recomputed;
  }
  dirty_.clear();
}

Tuple MaterializedCube::Read(const Tuple& coords) const {
  if (coords.size() != plan_->width()) {
    Fail(ErrorCode::kArityMismatch,
         "expected " + std::to_string(plan_->width()) + " coordinates, got " +
             std::to_string(coords.size()));
  }
  std::lock_guard<std::mutex> lock(mu_);
  ResolveDirty();
  auto it = cells_.find(coords);
  if (it == cells_.end()) Fail(ErrorCode::kNotFound, "no such cell");
  return plan_->Finish(it->first, it->second.mask, it->second.state);
}

CubeResult MaterializedCube::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  ResolveDirty();
  std::vector<const CellMap::value_type*> order;
  order.reserve(cells_.size());
  for (const auto& entry : cells_) order.push_back(&entry);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return CoordinateLess(a->first, b->first);
  });
  CubeResult result;
  result.relation = Relation(plan_->output_schema());
  result.grouping_width = plan_->width();
  result.grouping_sets = plan_->grouping_sets();
  result.all_sets.resize(plan_->width());
  auto keys = std::make_shared<std::vector<Tuple>>();
  for (const auto& [row, count] : base_) {
    Tuple key = plan_->Evaluate(row).key;
    for (std::size_t c = 0; c < key.size(); ++c) result.all_sets[c].insert(key[c]);
    keys->insert(keys->end(), count, key);
  }
  result.source_keys = std::move(keys);
  for (const auto* entry : order) {
    result.index.emplace(entry->first, result.relation.size());
    result.relation.Append(
        plan_->Finish(entry->first, entry->second.mask, entry->second.state));
    result.masks.push_back(entry->second.mask);
  }
  result.stats.base_rows = base_size_;
  return result;
}

void MaterializedCube::Compact() { Rebuild(); }

}  // namespace datacube
