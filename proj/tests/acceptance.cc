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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "datacube/error.h"
#include "datacube/grouping/grouping.h"
#include "datacube/maintain/maintain.h"
#include "datacube/query/parser.h"
#include "datacube/query/query.h"
#include "fixtures/catalogs.h"
#include "fixtures/corpus.h"
#include "fixtures/fixtures.h"
#include "fixtures/generators.h"

namespace datacube {
namespace {

using testing::I;
using testing::kAll;
using testing::kNull;
using testing::SameResult;
using testing::T;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed expectations; keeps the first few for the report.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (messages_.size() < 4) messages_.push_back(what);
  }
  Outcome Done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    std::string detail = summary + "; " + std::to_string(failures_) +
                         " mismatch(es):";
    for (const std::string& m : messages_) detail += " [" + m + "]";
    return {false, detail};
  }

 private:
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
};

std::string Show(const Tuple& t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << t[i];
  os << ")";
  return os.str();
}

const AggregateRegistry& Aggs() {
  static const AggregateRegistry* r =
      new AggregateRegistry(AggregateRegistry::WithBuiltins());
  return *r;
}

GroupingSpec CubeSpec(const std::vector<std::string>& dims,
                      const std::vector<AggregateFunctionPtr>& fns,
                      const std::string& measure) {
  GroupingSpec spec;
  spec.cube = testing::Items(dims);
  for (const auto& f : fns) spec.aggregates.push_back({f, Col(measure), ""});
  return spec;
}

std::vector<AggregateFunctionPtr> Named(std::vector<const char*> names) {
  std::vector<AggregateFunctionPtr> out;
  for (const char* n : names) out.push_back(Aggs().Get(n));
  return out;
}

bool SameRows(const Relation& a, const Relation& b, std::string* why) {
  if (a.size() != b.size()) {
    *why = std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
           " rows";
    return false;
  }
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      if (!SameResult(a[r][c], b[r][c])) {
        *why = Show(a[r]) + " vs " + Show(b[r]);
        return false;
      }
    }
  }
  return true;
}

// --- 1 ----------------------------------------------------------------------

Outcome GoldenTables() {
  CubeResult cube = Cube(testing::Sales8(),
                         CubeSpec({"Model", "Year", "Color"}, Named({"sum"}),
                                  "Units"),
                         BuiltinScalars());
  struct Cell {
    Tuple coords;
    std::int64_t units;
  };
  const Value c = T("Chevy"), f = T("Ford"), b = T("black"), w = T("white");
  const Value y4 = I(1994), y5 = I(1995);
  const std::vector<Cell> expected = {
      // Base rows.
      {{c, y4, b}, 50}, {{c, y4, w}, 40}, {{c, y5, b}, 85}, {{c, y5, w}, 115},
      {{f, y4, b}, 50}, {{f, y4, w}, 10}, {{f, y5, b}, 85}, {{f, y5, w}, 75},
      // Year subtotals and model totals.
      {{c, y4, kAll}, 90}, {{c, y5, kAll}, 200}, {{c, kAll, kAll}, 290},
      {{f, y4, kAll}, 60}, {{f, y5, kAll}, 160}, {{f, kAll, kAll}, 220},
      // Grand-total row of the pivot table.
      {{kAll, y4, b}, 100}, {{kAll, y4, w}, 50}, {{kAll, y4, kAll}, 150},
      {{kAll, y5, b}, 170}, {{kAll, y5, w}, 190}, {{kAll, y5, kAll}, 360},
      {{kAll, kAll, kAll}, 510},
      // Cross-tab margins by color.
      {{c, kAll, b}, 135}, {{c, kAll, w}, 155},
      {{f, kAll, b}, 135}, {{f, kAll, w}, 85},
  };
  Checker check;
  check.Expect(cube.relation.size() == 27,
               std::to_string(cube.relation.size()) + " rows");
  for (const Cell& cell : expected) {
    std::optional<std::size_t> row = cube.Find(cell.coords);
    if (!row) {
      check.Expect(false, Show(cell.coords) + " missing");
      continue;
    }
    const Value& got = cube.relation[*row][3];
    check.Expect(got == I(cell.units), Show(cell.coords) + " = " +
                                           got.ToString() + ", expected " +
                                           std::to_string(cell.units));
  }
  return check.Done(std::to_string(cube.relation.size()) + " rows, " +
                    std::to_string(expected.size()) + " table values checked");
}

// --- 2 ----------------------------------------------------------------------

Outcome CardinalityLaw() {
  Checker check;
  auto cube_size = [](const std::vector<int>& cards) {
    Relation rel = testing::CrossProduct(cards);
    return Cube(rel, CubeSpec(testing::DimNames(rel), Named({"count"}), "m"),
                BuiltinScalars())
        .relation.size();
  };
  std::size_t first = cube_size({2, 3, 3});
  check.Expect(first == 48, "2x3x3 gave " + std::to_string(first));
  std::mt19937_64 rng(2);
  int shapes = 0;
  for (int iter = 0; iter < 200; ++iter) {
    int dims = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<int> cards;
    std::size_t expected = 1;
    for (int d = 0; d < dims; ++d) {
      cards.push_back(std::uniform_int_distribution<int>(1, 5)(rng));
      expected *= cards.back() + 1;
    }
    std::size_t got = cube_size(cards);
    ++shapes;
    check.Expect(got == expected, std::to_string(got) + " rows, expected " +
                                      std::to_string(expected));
  }
  return check.Done("2x3x3 -> " + std::to_string(first) + " rows; " +
                    std::to_string(shapes) + " random shapes");
}

// --- 3 ----------------------------------------------------------------------

Outcome OracleEquivalence() {
  Checker check;
  std::mt19937_64 rng(3);
  const auto fns = Named({"count", "sum", "min", "max", "avg", "stddev"});
  testing::RandomShape shape;
  shape.max_dims = 4;  // plus the measure: at most 5 columns
  shape.max_rows = 200;
  shape.max_cardinality = 5;
  shape.null_rate = 0.1;
  std::size_t rows = 0;
  for (int iter = 0; iter < 200; ++iter) {
    shape.real_measure = iter % 2 == 1;
    Relation rel = testing::RandomRelation(rng, shape);
    GroupingSpec spec = CubeSpec(testing::DimNames(rel), fns, "m");
    CubeResult naive = CubeNaive(rel, spec, BuiltinScalars());
    CubeResult cascade = CubeCascade(rel, spec, BuiltinScalars());
    std::string why;
    check.Expect(SameRows(cascade.relation, naive.relation, &why),
                 "relation " + std::to_string(iter) + ": " + why);
    rows += naive.relation.size();
  }
  return check.Done("200 relations, " + std::to_string(rows) +
                    " cube rows compared");
}

// --- 4 ----------------------------------------------------------------------

Outcome HolisticPath() {
  Checker check;
  std::mt19937_64 rng(4);
  const auto fns = Named({"median", "mode"});
  testing::RandomShape shape;
  shape.max_dims = 3;
  shape.max_rows = 80;
  std::size_t cells = 0;
  for (int iter = 0; iter < 50; ++iter) {
    shape.real_measure = iter % 2 == 0;
    Relation rel = testing::RandomRelation(rng, shape);
    std::vector<std::string> names = testing::DimNames(rel);
    CubeResult cube = Cube(rel, CubeSpec(names, fns, "m"), BuiltinScalars());
    std::vector<std::size_t> dims(names.size());
    for (std::size_t d = 0; d < dims.size(); ++d) dims[d] = d;
    auto oracle = testing::BruteForceCube(rel, dims, {}, fns, dims.size());
    check.Expect(oracle.size() == cube.relation.size(),
                 "relation " + std::to_string(iter) + ": " +
                     std::to_string(cube.relation.size()) + " rows vs " +
                     std::to_string(oracle.size()));
    for (const auto& [coords, values] : oracle) {
      std::optional<std::size_t> row = cube.Find(coords);
      if (!row) {
        check.Expect(false, Show(coords) + " missing");
        continue;
      }
      ++cells;
      for (std::size_t a = 0; a < values.size(); ++a) {
        const Value& got = cube.relation[*row][dims.size() + a];
        check.Expect(SameResult(got, values[a]),
                     Show(coords) + ": " + got.ToString() + " vs " +
                         values[a].ToString());
      }
    }
  }
  CubeResult sales = Cube(
      testing::Sales8(),
      CubeSpec({"Model", "Year", "Color"}, Named({"median"}), "Units"),
      BuiltinScalars());
  Value chevy = CellLookup(sales, {T("Chevy"), kAll, kAll})[3];
  check.Expect(chevy == Value::Real(67.5),
               "median{50,40,85,115} = " + chevy.ToString());
  return check.Done(std::to_string(cells) +
                    " cells matched; median{50,40,85,115} = " +
                    chevy.ToString());
}

// --- 5 ----------------------------------------------------------------------

Outcome SingleScan() {
  auto calls = std::make_shared<std::atomic<std::size_t>>(0);
  AggregateDefinition def = Aggs().Get("sum")->definition();
  def.name = "counted_sum";
  auto inner = def.next;
  def.next = [inner, calls](std::any& state, const Value& v) {
    ++*calls;
    inner(state, v);
  };
  auto counted = std::make_shared<const AggregateFunction>(std::move(def));

  std::mt19937_64 rng(5);
  Relation rel{Schema({{"d0", DataType::kText, {}},
                       {"d1", DataType::kInteger, {}},
                       {"d2", DataType::kText, {}},
                       {"m", DataType::kInteger, {}}})};
  std::size_t non_null = 0;
  for (int r = 0; r < 1000; ++r) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n)(rng); };
    Value m = pick(9) == 0 ? kNull : I(pick(1000));
    if (!m.is_null()) ++non_null;
    rel.Append({T(std::string(1, static_cast<char>('a' + pick(6))).c_str()),
                I(1990 + pick(4)),
                T(std::string(1, static_cast<char>('p' + pick(3))).c_str()),
                m});
  }
  GroupingSpec spec = CubeSpec({"d0", "d1", "d2"}, {counted}, "m");
  calls->store(0);
  CubeCascade(rel, spec, BuiltinScalars());
  std::size_t cascade = calls->load();
  calls->store(0);
  CubeNaive(rel, spec, BuiltinScalars());
  std::size_t naive = calls->load();

  Checker check;
  check.Expect(cascade == non_null, "cascade next() = " +
                                        std::to_string(cascade) + ", expected " +
                                        std::to_string(non_null));
  check.Expect(naive == non_null * 8, "naive next() = " + std::to_string(naive) +
                                          ", expected " +
                                          std::to_string(non_null * 8));
  return check.Done("non-null values " + std::to_string(non_null) +
                    ", cascade next() " + std::to_string(cascade) +
                    ", naive next() " + std::to_string(naive));
}

// --- 6 ----------------------------------------------------------------------

Outcome CompoundAlgebra() {
  Checker check;
  std::size_t sets = GroupingSets(1, 3, 2).size();
  check.Expect(sets == 16, "GroupingSets(1, 3, 2) = " + std::to_string(sets));
  Catalog compound = testing::CompoundCatalog();
  std::string sql;
  for (const auto& q : testing::Corpus()) {
    if (std::string(q.label) == "compound") sql = q.sql;
  }
  QueryResult r = Execute(sql, compound);
  std::size_t nodes = r.stats.empty() ? 0 : r.stats.front().nodes.size();
  check.Expect(nodes == 16, "compound query grouped " + std::to_string(nodes) +
                                " sets");

  std::mt19937_64 rng(6);
  testing::RandomShape shape;
  shape.max_dims = 4;
  shape.max_rows = 100;
  const auto fns = Named({"sum", "count", "max"});
  for (int iter = 0; iter < 50; ++iter) {
    Relation rel = testing::RandomRelation(rng, shape);
    std::vector<std::string> names = testing::DimNames(rel);
    GroupingSpec base;
    for (const auto& fn : fns) base.aggregates.push_back({fn, Col("m"), ""});
    std::string why;

    GroupingSpec g = base;
    g.group_by = testing::Items(names);
    check.Expect(SameRows(Compound(rel, g, BuiltinScalars()).relation,
                          GroupBy(rel, g, BuiltinScalars()).relation, &why),
                 "group by " + why);
    GroupingSpec ro = base;
    ro.rollup = testing::Items(names);
    CubeResult rolled = Compound(rel, ro, BuiltinScalars());
    check.Expect(SameRows(rolled.relation,
                          Rollup(rel, ro, BuiltinScalars()).relation, &why),
                 "rollup " + why);
    GroupingSpec cu = base;
    cu.cube = testing::Items(names);
    CubeResult cubed = Compound(rel, cu, BuiltinScalars());
    check.Expect(SameRows(cubed.relation,
                          Cube(rel, cu, BuiltinScalars()).relation, &why),
                 "cube " + why);

    // Against the brute-force grouping-set oracle as well.
    std::vector<std::size_t> dims(names.size());
    for (std::size_t d = 0; d < dims.size(); ++d) dims[d] = d;
    auto cube_oracle = testing::BruteForceCube(rel, dims, {}, fns, dims.size());
    auto roll_oracle = testing::BruteForceCube(rel, {}, dims, fns, dims.size());
    check.Expect(cube_oracle.size() == cubed.relation.size(),
                 "cube oracle size");
    check.Expect(roll_oracle.size() == rolled.relation.size(),
                 "rollup oracle size");
    for (const auto& [coords, values] : roll_oracle) {
      std::optional<std::size_t> row = rolled.Find(coords);
      check.Expect(row.has_value() &&
                       std::equal(values.begin(), values.end(),
                                  rolled.relation[*row].begin() + dims.size(),
                                  SameResult),
                   "rollup cell " + Show(coords));
    }
  }
  return check.Done("1 + 3 + 2 columns -> " + std::to_string(sets) +
                    " grouping sets; 50 degenerate compounds compared");
}

// --- 7 ----------------------------------------------------------------------

Outcome QueryDialect() {
  Checker check;
  std::size_t ok = 0;
  for (const auto& q : testing::Corpus()) {
    try {
      Query parsed = Parse(q.sql);
      Catalog catalog = q.catalog();
      Prepare(parsed, catalog);
      Query again = Parse(ToSql(parsed));
      check.Expect(SameQuery(parsed, again),
                   std::string(q.label) + ": printed form reparses differently");
      if (SameQuery(parsed, again)) ++ok;
    } catch (const Error& e) {
      check.Expect(false, std::string(q.label) + ": " + e.what());
    }
  }

  // The golden rollup table, with the UNION's column types (Year unifies to Text).
  std::vector<Tuple> table5a = {
      {T("Chevy"), T("1994"), T("black"), I(50)},
      {T("Chevy"), T("1994"), T("white"), I(40)},
      {T("Chevy"), T("1994"), T("ALL"), I(90)},
      {T("Chevy"), T("1995"), T("black"), I(85)},
      {T("Chevy"), T("1995"), T("white"), I(115)},
      {T("Chevy"), T("1995"), T("ALL"), I(200)},
      {T("Chevy"), T("ALL"), T("ALL"), I(290)},
  };
  std::string union_sql;
  for (const auto& q : testing::Corpus()) {
    if (std::string(q.label) == "union rollup") union_sql = q.sql;
  }
  std::vector<Tuple> got =
      Execute(union_sql, testing::SalesCatalog()).relation.rows();
  auto less = [](const Tuple& a, const Tuple& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        ValueLess());
  };
  std::sort(got.begin(), got.end(), less);
  std::sort(table5a.begin(), table5a.end(), less);
  std::vector<Tuple> extra, missing;
  std::set_difference(got.begin(), got.end(), table5a.begin(), table5a.end(),
                      std::back_inserter(extra), less);
  std::set_difference(table5a.begin(), table5a.end(), got.begin(), got.end(),
                      std::back_inserter(missing), less);
  std::string diff;
  for (const Tuple& t : extra) diff += " extra " + Show(t);
  for (const Tuple& t : missing) diff += " missing " + Show(t);
  check.Expect(got == table5a, "4-way UNION gave " + std::to_string(got.size()) +
                                   " rows, golden table has " +
                                   std::to_string(table5a.size()) + ":" + diff);
  return check.Done(std::to_string(ok) + "/" +
                    std::to_string(testing::Corpus().size()) +
                    " queries parse, validate and round-trip; UNION rows " +
                    std::to_string(got.size()));
}

// --- 8 ----------------------------------------------------------------------

Outcome NullEmulation() {
  Catalog catalog = Catalog::WithBuiltins();
  catalog.AddTable("Sales", testing::Sales8());
  QueryResult r = Execute(
      "SELECT Model, Year, Color, SUM(Units), GROUPING(Model), "
      "GROUPING(Year), GROUPING(Color) FROM Sales "
      "GROUP BY CUBE Model, Year, Color",
      catalog, {OutputMode::kNullEmulation, CubeStrategy::kAuto});
  const Tuple want = {kNull, kNull, kNull, I(510), Value::Bool(true),
                      Value::Bool(true), Value::Bool(true)};
  bool found = std::find(r.relation.rows().begin(), r.relation.rows().end(),
                         want) != r.relation.rows().end();
  bool no_all = std::none_of(
      r.relation.rows().begin(), r.relation.rows().end(), [](const Tuple& t) {
        return std::any_of(t.begin(), t.end(),
                           [](const Value& v) { return v.is_all(); });
      });
  Checker check;
  check.Expect(found, Show(want) + " not found");
  check.Expect(no_all, "ALL leaked into NULL-emulation output");
  return check.Done(std::to_string(r.relation.size()) + " rows, contains " +
                    Show(want));
}

// --- 9 ----------------------------------------------------------------------

Outcome MaintenanceConvergence() {
  Checker check;
  std::mt19937_64 rng(9);
  const auto fns = Named({"sum", "count", "avg", "max"});
  std::size_t total_ops = 0;
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t dims = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<Column> cols;
    std::vector<std::string> names;
    for (std::size_t d = 0; d < dims; ++d) {
      names.push_back("d" + std::to_string(d));
      cols.push_back({names.back(), DataType::kText, {}});
    }
    cols.push_back({"m", DataType::kReal, {}});
    Schema schema(cols);
    auto random_row = [&] {
      Tuple t;
      for (std::size_t d = 0; d < dims; ++d) {
        int v = std::uniform_int_distribution<int>(0, 4)(rng);
        t.push_back(v == 4 ? kNull
                           : T(std::string(1, static_cast<char>('a' + v)).c_str()));
      }
      int m = std::uniform_int_distribution<int>(-400, 400)(rng);
      t.push_back(m % 10 == 0 ? kNull : Value::Real(m * 0.25));
      return t;
    };
    std::vector<Tuple> base;
    for (int i = std::uniform_int_distribution<int>(1, 40)(rng); i > 0; --i) {
      base.push_back(random_row());
    }
    GroupingSpec spec = CubeSpec(names, fns, "m");
    MaterializedCube cube(Relation(schema, base), spec, BuiltinScalars());
    const std::size_t fan_out = std::size_t{1} << dims;
    int ops = std::uniform_int_distribution<int>(1, 100)(rng);
    for (int op = 0; op < ops; ++op, ++total_ops) {
      int kind = std::uniform_int_distribution<int>(0, 2)(rng);
      if (kind == 0 || base.empty()) {
        Tuple row = random_row();
        std::size_t before = cube.stats().cells_touched;
        cube.Insert(row);
        check.Expect(cube.stats().cells_touched - before == fan_out,
                     "insert touched " +
                         std::to_string(cube.stats().cells_touched - before) +
                         " cells, expected " + std::to_string(fan_out));
        base.push_back(row);
      } else {
        std::size_t v =
            std::uniform_int_distribution<std::size_t>(0, base.size() - 1)(rng);
        if (kind == 1) {
          cube.Delete(base[v]);
          base.erase(base.begin() + static_cast<std::ptrdiff_t>(v));
        } else {
          Tuple row = random_row();
          cube.Update(base[v], row);
          base[v] = row;
        }
      }
    }
    CubeResult got = cube.Snapshot();
    if (base.empty()) {
      check.Expect(got.relation.size() == 0, "empty base left cells behind");
      continue;
    }
    CubeResult want = CubeNaive(Relation(schema, base), spec, BuiltinScalars());
    std::string why;
    check.Expect(SameRows(got.relation, want.relation, &why),
                 "sequence " + std::to_string(iter) + ": " + why);
  }

  // Deleting the unique global maximum.
  MaterializedCube sales(testing::Sales8(),
                         CubeSpec({"Model", "Year", "Color"}, Named({"max"}),
                                  "Units"),
                         BuiltinScalars());
  const Tuple max_row = {T("Chevy"), I(1995), T("white"), I(115)};
  sales.Delete(max_row);
  const MaintenanceStats& s = sales.stats();
  // Of the 8 cells containing the row, one held only that row and was
  // removed; the other 7 are the only ones recomputed.
  check.Expect(s.cells_dirtied == 7 && s.cells_removed == 1,
               "dirtied " + std::to_string(s.cells_dirtied) + ", removed " +
                   std::to_string(s.cells_removed));
  Value max = sales.Read({kAll, kAll, kAll})[3];
  check.Expect(s.cells_recomputed == 7,
               "recomputed " + std::to_string(s.cells_recomputed) + " cells");
  check.Expect(max == I(85), "new max " + max.ToString());
  const Relation sales8 = testing::Sales8();
  std::vector<Tuple> rest;
  for (const Tuple& t : sales8.rows()) {
    if (t != max_row) rest.push_back(t);
  }
  std::string why;
  check.Expect(
      SameRows(sales.Snapshot().relation,
               CubeNaive(Relation(testing::SalesSchema(), rest),
                         CubeSpec({"Model", "Year", "Color"}, Named({"max"}),
                                  "Units"),
                         BuiltinScalars())
                   .relation,
               &why),
      "after max delete: " + why);
  return check.Done("100 sequences, " + std::to_string(total_ops) +
                    " operations; max delete recomputed " +
                    std::to_string(s.cells_recomputed) + " of 27 cells, new max " +
                    max.ToString());
}

// --- 10 ---------------------------------------------------------------------

Outcome Decorations() {
  Checker check;
  std::string sql;
  for (const auto& q : testing::Corpus()) {
    if (std::string(q.label) == "continent decoration") sql = q.sql;
  }
  QueryResult r = Execute(sql, testing::WeatherCatalog());
  const Schema& schema = r.relation.schema();
  const std::size_t nation = schema.IndexOf("nation");
  const std::size_t continent = schema.IndexOf("continent");
  std::size_t null_rows = 0;
  for (const Tuple& row : r.relation.rows()) {
    bool all = row[nation].is_all();
    bool null = row[continent].is_null();
    null_rows += null;
    check.Expect(all == null, "row " + Show(row));
    if (!all) {
      Value want = T(row[nation] == T("USA") ? "North America"
                                              : "South America");
      check.Expect(row[continent] == want, "row " + Show(row));
    }
  }

  Catalog dirty = Catalog::WithBuiltins();
  dirty.AddTable("Readings",
                 Relation(Schema({{"nation", DataType::kText, {}},
                                  {"continent", DataType::kText, {}},
                                  {"Temp", DataType::kInteger, {}}}),
                          {{T("USA"), T("North America"), I(1)},
                           {T("USA"), T("Europe"), I(2)},
                           {T("Brazil"), T("South America"), I(3)}}));
  dirty.AddDependency({{"nation"}, "continent"});
  bool raised = false;
  try {
    Execute("SELECT nation, continent, MAX(Temp) FROM Readings "
            "GROUP BY CUBE nation",
            dirty);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::kDependencyViolated;
  }
  check.Expect(raised, "violation fixture did not raise DependencyViolated");
  return check.Done(std::to_string(r.relation.size()) + " rows, " +
                    std::to_string(null_rows) +
                    " with Null continent (all where nation is ALL); "
                    "violation raises DependencyViolated");
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 when unbounded
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace datacube

int main() {
  using datacube::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "Golden-table suite", 1, datacube::GoldenTables},
      {2, "Cardinality law", 5, datacube::CardinalityLaw},
      {3, "Oracle equivalence", 30, datacube::OracleEquivalence},
      {4, "Holistic path", 0, datacube::HolisticPath},
      {5, "Single-scan call count", 0, datacube::SingleScan},
      {6, "Compound algebra", 0, datacube::CompoundAlgebra},
      {7, "Query dialect", 0, datacube::QueryDialect},
      {8, "GROUPING/NULL emulation", 0, datacube::NullEmulation},
      {9, "Maintenance convergence", 0, datacube::MaintenanceConvergence},
      {10, "Decorations", 0, datacube::Decorations},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    datacube::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += "; over the " + std::to_string(c.budget_seconds) +
                        " s budget";
    }
    failed += !outcome.pass;
    std::printf("%s  %2d. %s: %s (%.3f s)\n", outcome.pass ? "PASS" : "FAIL",
                c.id, c.name, outcome.detail.c_str(), seconds);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
