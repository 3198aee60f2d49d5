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

#ifndef DATACUBE_MAINTAIN_MAINTAIN_H_
#define DATACUBE_MAINTAIN_MAINTAIN_H_

#include <cstddef>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "datacube/grouping/grouping.h"
#include "datacube/model/relation.h"

namespace datacube {

// Cumulative counters, for checking how much work each change did.
struct MaintenanceStats {
  std::size_t inserts = 0;
  std::size_t deletes = 0;
  // Cells whose scratchpads an insert advanced.
  std::size_t cells_touched = 0;
  std::size_t cells_created = 0;
  std::size_t cells_removed = 0;
  // Cells a delete fixed up in place with retract().
  std::size_t cells_retracted = 0;
  // Cells a delete left for recomputation, and cells later recomputed.
  std::size_t cells_dirtied = 0;
  std::size_t cells_recomputed = 0;
};

// A stored cube kept current under inserts, deletes and updates of its
// base rows. Each change visits the one cell per grouping set that the row
// contributes to (2^N for an N-column cube). Aggregates that can retract
// are adjusted in place; the others (MIN, MAX, decorations) mark the cell
// dirty and it is rebuilt from the retained base on the next read.
//
// Single writer. Reads may run concurrently with each other between
// mutations; they serialize among themselves while resolving dirty cells.
class MaterializedCube {
 public:
  // Throws kHolisticInsertClass for aggregates that cannot absorb inserts
  // (MEDIAN, MODE, DISTINCT forms), plus the GroupingPlan errors.
  MaterializedCube(const Relation& base, GroupingSpec spec,
                   const ScalarRegistry& scalars);

  MaterializedCube(const MaterializedCube&) = delete;
  MaterializedCube& operator=(const MaterializedCube&) = delete;

  const GroupingPlan& plan() const { return *plan_; }
  const Schema& base_schema() const { return plan_->source_schema(); }
  std::size_t base_size() const { return base_size_; }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t dirty_count() const;
  const MaintenanceStats& stats() const { return stats_; }

  // Throws kArityMismatch, kTypeMismatch, kInvalidArgument (All in a row).
  void Insert(Tuple row);
  // Throws kRowNotFound when no equal row is in the base.
  void Delete(Tuple row);
  // Delete then insert; `new_row` is validated before anything changes.
  void Update(Tuple old_row, Tuple new_row);

  // Output tuple (coordinates, decorations, aggregates) of one cell.
  // Throws kArityMismatch or kNotFound.
  Tuple Read(const Tuple& coords) const;
  // Every cell, in the same order and shape as Compute. An empty base has
  // no cells, so unlike Compute there is no grand-total row then.
  CubeResult Snapshot() const;
  // Rebuilds every cell from the base, discarding floating-point drift.
  void Compact();

 private:
  struct Cell {
    GroupingMask mask;
    CellState state;
  };
  using CellMap = std::unordered_map<Tuple, Cell, TupleHash>;

  Tuple Validate(Tuple row) const;
  void Rebuild();
  void ResolveDirty() const;

  std::shared_ptr<const GroupingPlan> plan_;
  // The base as a multiset: row to multiplicity.
  std::unordered_map<Tuple, std::size_t, TupleHash> base_;
  std::size_t base_size_ = 0;
  std::vector<bool> retractable_;
  bool needs_recompute_on_delete_ = false;

  mutable std::mutex mu_;
  mutable CellMap cells_;
  mutable std::unordered_set<Tuple, TupleHash> dirty_;
  mutable MaintenanceStats stats_;
};

}  // namespace datacube

#endif  // DATACUBE_MAINTAIN_MAINTAIN_H_
