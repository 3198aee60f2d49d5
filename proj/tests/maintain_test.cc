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
#include <random>
#include <thread>
#include <vector>

#include "datacube/error.h"
#include "fixtures/fixtures.h"
#include "fixtures/generators.h"
#include "gtest/gtest.h"

namespace datacube {
namespace {

using testing::I;
using testing::Items;
using testing::kAll;
using testing::kNull;
using testing::R;
using testing::SameResult;
using testing::Sales8;
using testing::T;

const AggregateRegistry& Aggs() {
  static const AggregateRegistry* r =
      new AggregateRegistry(AggregateRegistry::WithBuiltins());
  return *r;
}

GroupingSpec SalesSpec(std::vector<const char*> fns) {
  GroupingSpec spec;
  spec.cube = Items({"Model", "Year", "Color"});
  for (const char* f : fns) {
    spec.aggregates.push_back({Aggs().Get(f), Col("Units"), ""});
  }
  return spec;
}

MaterializedCube SalesCube(std::vector<const char*> fns = {"sum"}) {
  return MaterializedCube(Sales8(), SalesSpec(std::move(fns)),
                          BuiltinScalars());
}

Value Cell(const MaterializedCube& cube, Tuple coords, std::size_t agg = 0) {
  return cube.Read(coords)[coords.size() + agg];
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kNotFound;
}

TEST(MaterializeTest, SalesCube) {
  MaterializedCube cube = SalesCube();
  EXPECT_EQ(cube.cell_count(), 27u);
  EXPECT_EQ(cube.base_size(), 8u);
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(510));
  EXPECT_EQ(Cell(cube, {kAll, I(1994), kAll}), I(150));
}

TEST(MaterializeTest, SnapshotMatchesCompute) {
  MaterializedCube cube = SalesCube({"sum", "count", "avg", "max", "min"});
  GroupingPlan plan(Sales8().schema(),
                    SalesSpec({"sum", "count", "avg", "max", "min"}),
                    BuiltinScalars());
  CubeResult expected = Compute(Sales8(), plan, CubeStrategy::kNaive);
  CubeResult got = cube.Snapshot();
  EXPECT_EQ(got.relation.rows(), expected.relation.rows());
  EXPECT_EQ(got.masks, expected.masks);
  EXPECT_EQ(*AllSet(got, got.relation.size() - 1, 0),
            (std::set<Value, ValueLess>{T("Chevy"), T("Ford")}));
}

TEST(MaterializeTest, EmptyBaseHasNoCells) {
  Relation empty(testing::SalesSchema());
  MaterializedCube cube(empty, SalesSpec({"sum"}), BuiltinScalars());
  EXPECT_EQ(cube.cell_count(), 0u);
  EXPECT_EQ(cube.Snapshot().relation.size(), 0u);
  cube.Insert({T("Chevy"), I(1994), T("black"), I(5)});
  EXPECT_EQ(cube.cell_count(), 8u);
  EXPECT_EQ(cube.stats().cells_created, 8u);
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(5));
}

TEST(MaterializeTest, MaxGrandTotal) {
  MaterializedCube cube = SalesCube({"max"});
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(115));
}

TEST(MaterializeTest, InsertHolisticAggregatesAreRejected) {
  EXPECT_EQ(CodeOf([] { SalesCube({"median"}); }),
            ErrorCode::kHolisticInsertClass);
  EXPECT_EQ(CodeOf([] { SalesCube({"sum", "mode"}); }),
            ErrorCode::kHolisticInsertClass);
  GroupingSpec spec = SalesSpec({});
  spec.aggregates.push_back(
      {MakeDistinct(Aggs().Get("count")), Col("Units"), ""});
  EXPECT_EQ(CodeOf([&] { MaterializedCube(Sales8(), spec, BuiltinScalars()); }),
            ErrorCode::kHolisticInsertClass);
}

TEST(InsertTest, TouchesEveryMatchingCell) {
  MaterializedCube cube = SalesCube();
  cube.Insert({T("Chevy"), I(1994), T("black"), I(7)});
  EXPECT_EQ(Cell(cube, {T("Chevy"), I(1994), T("black")}), I(57));
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(517));
  EXPECT_EQ(cube.stats().cells_touched, 8u);
  EXPECT_EQ(cube.stats().cells_created, 0u);
  EXPECT_EQ(cube.cell_count(), 27u);
}

TEST(InsertTest, NewModelCreatesItsCells) {
  MaterializedCube cube = SalesCube();
  cube.Insert({T("VW"), I(1994), T("black"), I(3)});
  EXPECT_EQ(cube.stats().cells_created, 4u);
  EXPECT_EQ(cube.stats().cells_touched, 8u);
  EXPECT_EQ(cube.cell_count(), 31u);
  EXPECT_EQ(Cell(cube, {T("VW"), kAll, kAll}), I(3));
  EXPECT_EQ(Cell(cube, {kAll, I(1994), T("black")}), I(103));
}

TEST(InsertTest, RejectsBadRows) {
  MaterializedCube cube = SalesCube();
  EXPECT_EQ(CodeOf([&] { cube.Insert({T("Chevy"), I(1994), T("black")}); }),
            ErrorCode::kArityMismatch);
  EXPECT_EQ(CodeOf([&] {
              cube.Insert({T("Chevy"), T("1994"), T("black"), I(1)});
            }),
            ErrorCode::kTypeMismatch);
  EXPECT_EQ(CodeOf([&] { cube.Insert({kAll, I(1994), T("black"), I(1)}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(cube.base_size(), 8u);
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(510));
}

TEST(DeleteTest, SubtractsFromMatchingCells) {
  MaterializedCube cube = SalesCube();
  cube.Delete({T("Chevy"), I(1995), T("white"), I(115)});
  EXPECT_EQ(Cell(cube, {T("Chevy"), kAll, kAll}), I(175));
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(395));
  EXPECT_EQ(cube.stats().cells_retracted, 7u);
  EXPECT_EQ(cube.stats().cells_removed, 1u);
  EXPECT_EQ(cube.stats().cells_dirtied, 0u);
  EXPECT_EQ(CodeOf([&] { cube.Read({T("Chevy"), I(1995), T("white")}); }),
            ErrorCode::kNotFound);
}

TEST(DeleteTest, UniqueMaxRecomputesOnlyMatchingCells) {
  MaterializedCube cube = SalesCube({"max", "sum"});
  cube.Delete({T("Chevy"), I(1995), T("white"), I(115)});
  // One of the eight matching cells lost its only row.
  EXPECT_EQ(cube.stats().cells_removed, 1u);
  EXPECT_EQ(cube.stats().cells_dirtied, 7u);
  EXPECT_EQ(cube.dirty_count(), 7u);
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(85));
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}, 1), I(395));
  EXPECT_EQ(cube.stats().cells_recomputed, 7u);
  EXPECT_EQ(cube.dirty_count(), 0u);
  EXPECT_EQ(Cell(cube, {T("Chevy"), kAll, T("white")}), I(40));
  EXPECT_EQ(Cell(cube, {T("Ford"), kAll, kAll}), I(85));
}

TEST(DeleteTest, DeleteThenReinsertRestoresCube) {
  MaterializedCube cube = SalesCube({"sum", "avg", "max", "stddev"});
  std::vector<Tuple> before = cube.Snapshot().relation.rows();
  Tuple row = {T("Ford"), I(1994), T("white"), I(10)};
  cube.Delete(row);
  cube.Insert(row);
  std::vector<Tuple> after = cube.Snapshot().relation.rows();
  ASSERT_EQ(after.size(), before.size());
  for (std::size_t i = 0; i < after.size(); ++i) {
    for (std::size_t c = 0; c < after[i].size(); ++c) {
      EXPECT_TRUE(SameResult(after[i][c], before[i][c]));
    }
  }
}

TEST(DeleteTest, MissingRowAndEmptiedGroup) {
  MaterializedCube cube = SalesCube();
  EXPECT_EQ(CodeOf([&] { cube.Delete({T("Ford"), I(1994), T("white"), I(11)}); }),
            ErrorCode::kRowNotFound);
  cube.Delete({T("Ford"), I(1994), T("white"), I(10)});
  cube.Delete({T("Ford"), I(1994), T("black"), I(50)});
  EXPECT_EQ(CodeOf([&] { cube.Read({T("Ford"), I(1994), kAll}); }),
            ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { cube.Delete({T("Ford"), I(1994), T("white"), I(10)}); }),
            ErrorCode::kRowNotFound);
  EXPECT_EQ(Cell(cube, {kAll, I(1994), kAll}), I(90));
}

TEST(DeleteTest, DuplicateRowsAreAMultiset) {
  MaterializedCube cube = SalesCube({"count"});
  Tuple row = {T("Chevy"), I(1994), T("black"), I(50)};
  cube.Insert(row);
  cube.Delete(row);
  EXPECT_EQ(Cell(cube, {T("Chevy"), I(1994), T("black")}), I(1));
  cube.Delete(row);
  EXPECT_EQ(CodeOf([&] { cube.Delete(row); }), ErrorCode::kRowNotFound);
}

TEST(UpdateTest, Examples) {
  MaterializedCube cube = SalesCube();
  cube.Update({T("Chevy"), I(1994), T("black"), I(50)},
              {T("Chevy"), I(1994), T("black"), I(60)});
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(520));

  std::vector<Tuple> before = cube.Snapshot().relation.rows();
  cube.Update({T("Ford"), I(1995), T("white"), I(75)},
              {T("Ford"), I(1995), T("white"), I(75)});
  EXPECT_EQ(cube.Snapshot().relation.rows(), before);

  cube.Update({T("Chevy"), I(1995), T("white"), I(115)},
              {T("Ford"), I(1995), T("white"), I(115)});
  EXPECT_EQ(Cell(cube, {T("Chevy"), kAll, kAll}), I(185));
  EXPECT_EQ(Cell(cube, {T("Ford"), kAll, kAll}), I(335));
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(520));
}

TEST(UpdateTest, InvalidNewRowChangesNothing) {
  MaterializedCube cube = SalesCube();
  EXPECT_EQ(CodeOf([&] {
              cube.Update({T("Chevy"), I(1994), T("black"), I(50)},
                          {T("Chevy"), I(1994), T("black"), T("x")});
            }),
            ErrorCode::kTypeMismatch);
  EXPECT_EQ(cube.base_size(), 8u);
  EXPECT_EQ(Cell(cube, {kAll, kAll, kAll}), I(510));
}

TEST(ReadTest, ArityAndAbsence) {
  MaterializedCube cube = SalesCube();
  EXPECT_EQ(CodeOf([&] { cube.Read({kAll, kAll}); }),
            ErrorCode::kArityMismatch);
  EXPECT_EQ(CodeOf([&] { cube.Read({T("VW"), kAll, kAll}); }),
            ErrorCode::kNotFound);
}

TEST(ReadTest, DecorationsAreRecomputedAfterDelete) {
  Schema schema({{"nation", DataType::kText, {}},
                 {"continent", DataType::kText, {}},
                 {"t", DataType::kInteger, {}}});
  Relation rel(schema, {{T("USA"), T("Europe"), I(1)},
                        {T("USA"), T("North America"), I(2)},
                        {T("USA"), T("North America"), I(3)}});
  GroupingSpec spec;
  spec.cube = Items({"nation"});
  spec.decorations.push_back({Col("continent"), "continent", {0}});
  spec.aggregates.push_back({Aggs().Get("sum"), Col("t"), ""});
  MaterializedCube cube(rel, spec, BuiltinScalars());
  EXPECT_EQ(CodeOf([&] { cube.Read({T("USA")}); }),
            ErrorCode::kDependencyViolated);
  cube.Delete({T("USA"), T("Europe"), I(1)});
  EXPECT_EQ(cube.Read({T("USA")}),
            (Tuple{T("USA"), T("North America"), I(5)}));
  EXPECT_EQ(cube.Read({kAll}), (Tuple{kAll, kNull, I(5)}));
}

TEST(ReadTest, ConcurrentReadersAfterDeletes) {
  MaterializedCube cube = SalesCube({"max"});
  cube.Delete({T("Chevy"), I(1995), T("white"), I(115)});
  std::vector<Value> got(8);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < got.size(); ++t) {
    threads.emplace_back([&, t] { got[t] = Cell(cube, {kAll, kAll, kAll}); });
  }
  for (auto& th : threads) th.join();
  for (const Value& v : got) EXPECT_EQ(v, I(85));
  EXPECT_EQ(cube.stats().cells_recomputed, 7u);
}

TEST(CompactTest, RebuildsFromBase) {
  Schema schema({{"d", DataType::kText, {}}, {"m", DataType::kReal, {}}});
  Relation rel(schema, {{T("a"), R(1e16)}, {T("a"), R(1.0)}});
  GroupingSpec spec;
  spec.cube = Items({"d"});
  spec.aggregates.push_back({Aggs().Get("sum"), Col("m"), ""});
  MaterializedCube cube(rel, spec, BuiltinScalars());
  cube.Delete({T("a"), R(1e16)});
  cube.Compact();
  EXPECT_EQ(cube.Read({T("a")})[1], R(1.0));
  EXPECT_EQ(cube.cell_count(), 2u);
}

TEST(CompoundTest, RollupTouchesOneCellPerSet) {
  GroupingSpec spec;
  spec.rollup = Items({"Model", "Year", "Color"});
  spec.aggregates.push_back({Aggs().Get("sum"), Col("Units"), ""});
  MaterializedCube cube(Sales8(), spec, BuiltinScalars());
  EXPECT_EQ(cube.cell_count(), 15u);
  cube.Insert({T("Chevy"), I(1994), T("black"), I(1)});
  EXPECT_EQ(cube.stats().cells_touched, 4u);
  EXPECT_EQ(Cell(cube, {T("Chevy"), kAll, kAll}), I(291));
}

// --- Convergence -----------------------------------------------------------

struct Domain {
  std::vector<std::vector<Value>> values;  // per dimension
};

Tuple RandomRow(std::mt19937_64& rng, const Domain& d) {
  Tuple row;
  for (const auto& vals : d.values) {
    row.push_back(vals[std::uniform_int_distribution<std::size_t>(
        0, vals.size() - 1)(rng)]);
  }
  int m = std::uniform_int_distribution<int>(-200, 200)(rng);
  row.push_back(std::bernoulli_distribution(0.1)(rng) ? kNull : R(m * 0.25));
  return row;
}

TEST(ConvergenceTest, RandomOperationSequences) {
  std::mt19937_64 rng(7);
  const std::vector<const char*> fns = {"sum", "count", "avg", "max"};
  for (int iter = 0; iter < 100; ++iter) {
    std::size_t dims = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    Domain domain;
    std::vector<Column> cols;
    for (std::size_t d = 0; d < dims; ++d) {
      cols.push_back({"d" + std::to_string(d), DataType::kText, {}});
      std::vector<Value> vals = {kNull};
      int card = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int v = 0; v < card; ++v) {
        vals.push_back(Value::Text(std::string(1, static_cast<char>('a' + v))));
      }
      domain.values.push_back(vals);
    }
    cols.push_back({"m", DataType::kReal, {}});
    Schema schema(cols);
    std::vector<Tuple> base;
    int initial = std::uniform_int_distribution<int>(0, 30)(rng);
    for (int i = 0; i < initial; ++i) base.push_back(RandomRow(rng, domain));

    GroupingSpec spec;
    std::vector<std::string> names;
    for (std::size_t d = 0; d < dims; ++d) names.push_back(cols[d].name);
    spec.cube = Items(names);
    for (const char* f : fns) {
      spec.aggregates.push_back({Aggs().Get(f), Col("m"), ""});
    }
    MaterializedCube cube(Relation(schema, base), spec, BuiltinScalars());
    const std::size_t fan_out = std::size_t{1} << dims;

    int ops = std::uniform_int_distribution<int>(0, 100)(rng);
    for (int op = 0; op < ops; ++op) {
      int kind = std::uniform_int_distribution<int>(0, 2)(rng);
      if (kind == 0 || base.empty()) {
        Tuple row = RandomRow(rng, domain);
        std::size_t before = cube.stats().cells_touched;
        cube.Insert(row);
        ASSERT_EQ(cube.stats().cells_touched - before, fan_out);
        base.push_back(row);
        continue;
      }
      std::size_t victim =
          std::uniform_int_distribution<std::size_t>(0, base.size() - 1)(rng);
      std::size_t dirtied = cube.stats().cells_dirtied;
      if (kind == 1) {
        cube.Delete(base[victim]);
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(victim));
      } else {
        Tuple row = RandomRow(rng, domain);
        cube.Update(base[victim], row);
        base[victim] = row;
      }
      ASSERT_LE(cube.stats().cells_dirtied - dirtied, fan_out);
    }

    CubeResult got = cube.Snapshot();
    Relation final_base(schema, base);
    GroupingPlan plan(schema, spec, BuiltinScalars());
    CubeResult want = Compute(final_base, plan, CubeStrategy::kNaive);
    if (base.empty()) {
      // The only case where the two differ: no cells versus a grand total.
      EXPECT_EQ(got.relation.size(), 0u);
      EXPECT_EQ(want.relation.size(), 1u);
      continue;
    }
    ASSERT_EQ(got.relation.size(), want.relation.size()) << "iteration " << iter;
    EXPECT_EQ(got.masks, want.masks);
    for (std::size_t r = 0; r < got.relation.size(); ++r) {
      const Tuple& a = got.relation.rows()[r];
      const Tuple& b = want.relation.rows()[r];
      for (std::size_t c = 0; c < a.size(); ++c) {
        EXPECT_TRUE(SameResult(a[c], b[c]))
            << "iteration " << iter << " row " << r << ": " << a[c] << " vs "
            << b[c];
      }
    }
  }
}

TEST(ConvergenceTest, SumIsConservedAfterEveryOperation) {
  std::mt19937_64 rng(19);
  MaterializedCube cube = SalesCube();
  std::vector<Tuple> base = Sales8().rows();
  const std::vector<Value> models = {T("Chevy"), T("Ford"), T("VW")};
  for (int op = 0; op < 200; ++op) {
    if (op % 3 == 2 && !base.empty()) {
      std::size_t v =
          std::uniform_int_distribution<std::size_t>(0, base.size() - 1)(rng);
      cube.Delete(base[v]);
      base.erase(base.begin() + static_cast<std::ptrdiff_t>(v));
    } else {
      Tuple row = {models[op % 3], I(1994 + op % 2),
                   T(op % 5 ? "black" : "white"), I(op)};
      cube.Insert(row);
      base.push_back(row);
    }
    if (base.empty()) continue;
    CubeResult snap = cube.Snapshot();
    std::int64_t core = 0;
    for (std::size_t r = 0; r < snap.relation.size(); ++r) {
      if (snap.masks[r].core()) core += snap.relation.rows()[r][3].as_int();
    }
    ASSERT_EQ(I(core), Cell(cube, {kAll, kAll, kAll}));
  }
}

}  // namespace
}  // namespace datacube
