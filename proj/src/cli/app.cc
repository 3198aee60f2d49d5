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

#include "datacube/cli/app.h"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "datacube/cli/changelog.h"
#include "datacube/cli/config.h"
#include "datacube/cli/csv.h"
#include "datacube/cli/render.h"
#include "datacube/error.h"
#include "datacube/grouping/grouping.h"
#include "datacube/maintain/maintain.h"
#include "datacube/query/parser.h"
#include "datacube/query/query.h"

namespace datacube::cli {
namespace {

struct CatalogFlags {
  std::string config;
  std::vector<std::string> loads;
  std::vector<std::string> dependencies;
  std::vector<std::string> extensions;
};

struct OutputFlags {
  std::string format = "table";
  std::string rows;
  std::string cols;
  std::vector<std::string> fixes;
};

struct CubeFlags {
  std::string table;
  std::string group_by;
  std::string rollup;
  std::string cube;
  std::vector<std::string> aggs;
  std::string strategy = "auto";
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Splits on commas outside parentheses and quotes.
std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  char quote = 0;
  for (char c : s) {
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    } else if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur.push_back(c);
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::vector<GroupingItem> ParseItems(const std::string& list) {
  std::vector<GroupingItem> items;
  for (const std::string& part : SplitList(list)) {
    items.push_back({ParseExpression(part), ""});
  }
  return items;
}

AggregateItem ParseAggregate(const std::string& text, const Catalog& catalog) {
  ExprPtr e = ParseExpression(text);
  const FunctionCall* f = e->As<FunctionCall>();
  if (!f) {
    Fail(ErrorCode::kInvalidArgument,
         "--agg expects name(column), got '" + text + "'");
  }
  if (f->star) {
    return {catalog.aggregates().Get("count_rows"), nullptr, ""};
  }
  if (f->args.size() != 1) {
    Fail(ErrorCode::kArityMismatch,
         "aggregate " + f->name + " takes exactly one argument");
  }
  AggregateFunctionPtr fn = catalog.aggregates().Get(f->name);
  if (f->distinct) fn = MakeDistinct(fn);
  return {fn, f->args.front(), ""};
}

CubeStrategy ParseStrategy(const std::string& s) {
  if (EqualsIgnoreCase(s, "auto")) return CubeStrategy::kAuto;
  if (EqualsIgnoreCase(s, "naive")) return CubeStrategy::kNaive;
  if (EqualsIgnoreCase(s, "cascade")) return CubeStrategy::kCascade;
  Fail(ErrorCode::kInvalidArgument,
       "unknown strategy '" + s + "' (expected auto, naive or cascade)");
}

Catalog LoadCatalog(const CatalogFlags& flags,
                    const std::optional<std::string>& config_env) {
  CatalogConfig config;
  if (!flags.config.empty()) {
    config = LoadConfig(flags.config);
  } else if (config_env && !config_env->empty()) {
    config = LoadConfig(*config_env);
  }
  for (const std::string& load : flags.loads) {
    std::size_t eq = load.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == load.size()) {
      Fail(ErrorCode::kInvalidArgument,
           "--load expects name=path, got '" + load + "'");
    }
    SetTable(config, {load.substr(0, eq), load.substr(eq + 1), std::nullopt});
  }
  for (const std::string& d : flags.dependencies) {
    config.dependencies.push_back(ParseDependency(d));
  }
  for (const std::string& e : flags.extensions) config.extensions.push_back(e);
  return BuildCatalog(config);
}

CrosstabOptions Crosstab(const OutputFlags& flags, Format format) {
  CrosstabOptions opts{flags.rows, flags.cols, {}};
  for (const std::string& fix : flags.fixes) {
    std::size_t eq = fix.find('=');
    if (eq == std::string::npos || eq == 0) {
      Fail(ErrorCode::kInvalidArgument,
           "--fix expects column=value, got '" + fix + "'");
    }
    opts.fixes.emplace_back(fix.substr(0, eq), fix.substr(eq + 1));
  }
  if (format == Format::kCrosstab && (opts.rows.empty() || opts.cols.empty())) {
    Fail(ErrorCode::kInvalidArgument, "crosstab output needs --rows and --cols");
  }
  return opts;
}

void Emit(std::ostream& out, const ResultTable& table, const OutputFlags& flags) {
  Format format = ParseFormat(flags.format);
  out << Render(table, format, Crosstab(flags, format));
}

GroupingSpec BuildSpec(const CubeFlags& flags, const Catalog& catalog) {
  GroupingSpec spec;
  spec.group_by = ParseItems(flags.group_by);
  spec.rollup = ParseItems(flags.rollup);
  spec.cube = ParseItems(flags.cube);
  for (const std::string& a : flags.aggs) {
    spec.aggregates.push_back(ParseAggregate(a, catalog));
  }
  spec.ordered_output = true;
  return spec;
}

void PrintLattice(std::ostream& out, const GroupingPlan& plan,
                  const CubeResult& result) {
  const std::vector<std::string>& names = plan.grouping_names();
  out << "grouping sets (" << plan.grouping_sets().size() << "):";
  for (GroupingMask m : plan.grouping_sets()) out << " " << m.Describe(names);
  out << "\n";
  const GroupingSpec& spec = plan.spec();
  for (std::size_t a = 0; a < spec.aggregates.size(); ++a) {
    Classification c = spec.aggregates[a].function->classify();
    out << "aggregate "
        << plan.output_schema()[plan.output_schema().size() -
                                spec.aggregates.size() + a]
               .name
        << ": " << TaxonomyName(c.select) << " select, "
        << TaxonomyName(c.insert) << " insert, " << TaxonomyName(c.del)
        << " delete\n";
  }
  const CubeStats& stats = result.stats;
  out << "strategy: "
      << (stats.strategy == CubeStrategy::kCascade ? "cascade" : "naive")
      << ", " << stats.base_rows << " base rows, " << stats.rows_folded
      << " values folded, " << stats.merges << " merges\n";
  for (const NodePlan& node : stats.nodes) {
    out << "  " << node.mask.Describe(names) << " <- "
        << (node.parent ? node.parent->Describe(names) : "base") << ", "
        << node.rows << " rows\n";
  }
}

std::string QueryText(const std::string& sql, const std::string& file) {
  if (!sql.empty() && !file.empty()) {
    Fail(ErrorCode::kInvalidArgument, "give the query inline or with --file, not both");
  }
  if (!file.empty()) return ReadFile(file);
  return sql;
}

Tuple ParseCell(const std::string& text, const Schema& output,
                std::size_t width) {
  std::vector<CsvRecord> records = SplitCsv(text);
  std::vector<CsvField> fields;
  if (!records.empty()) fields = records.front().fields;
  if (records.size() > 1 || fields.size() != width) {
    Fail(ErrorCode::kArityMismatch, "--cell '" + text + "' needs " +
                                        std::to_string(width) +
                                        " comma-separated coordinates");
  }
  Tuple coords;
  for (std::size_t c = 0; c < width; ++c) {
    coords.push_back(ParseCoordinate(fields[c], output[c].type));
  }
  return coords;
}

void AddCatalogFlags(CLI::App& app, CatalogFlags& f) {
  app.add_option("--config", f.config,
                 "Catalog config file (overrides $DATACUBE_CONFIG)");
  app.add_option("--load", f.loads, "Load a CSV table: name=path")
      ->allow_extra_args(false);
  app.add_option("--dependency", f.dependencies,
                 "Declare a functional dependency: a,b->c")
      ->allow_extra_args(false);
  app.add_option("--extension", f.extensions, "Enable a scalar extension")
      ->allow_extra_args(false);
}

void AddOutputFlags(CLI::App* app, OutputFlags& f) {
  app->add_option("--format", f.format,
                  "table, grouping, csv, json or crosstab")
      ->capture_default_str();
  app->add_option("--rows", f.rows, "Crosstab row dimension");
  app->add_option("--cols", f.cols, "Crosstab column dimension");
  app->add_option("--fix", f.fixes, "Pin a dimension for crosstab: col=value")
      ->allow_extra_args(false);
}

void AddCubeFlags(CLI::App* app, CubeFlags& f) {
  app->add_option("--table", f.table, "Source table")->required();
  app->add_option("--group-by", f.group_by, "Plain grouping list");
  app->add_option("--rollup", f.rollup, "Rollup list");
  app->add_option("--cube", f.cube, "Cube list");
  app->add_option("--agg", f.aggs, "Aggregate, e.g. sum(Units) or count(*)")
      ->allow_extra_args(false);
  app->add_option("--strategy", f.strategy, "auto, naive or cascade")
      ->capture_default_str();
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, std::optional<std::string> config_env) {
  CLI::App app{"Grouping-set queries over CSV tables", "datacube"};
  app.require_subcommand(1);
  app.fallthrough();

  CatalogFlags catalog_flags;
  AddCatalogFlags(app, catalog_flags);

  OutputFlags output;
  CubeFlags cube_flags;
  std::string sql, file, log;
  std::vector<std::string> cells;
  bool show_stats = false;

  CLI::App* query = app.add_subcommand("query", "Run a query");
  query->add_option("sql", sql, "Query text");
  query->add_option("--file", file, "Read the query from a file");
  query->add_option("--strategy", cube_flags.strategy, "auto, naive or cascade")
      ->capture_default_str();
  AddOutputFlags(query, output);

  CLI::App* cube = app.add_subcommand("cube", "Compute a cube over a table");
  AddCubeFlags(cube, cube_flags);
  AddOutputFlags(cube, output);

  CLI::App* rollup =
      app.add_subcommand("rollup", "Compute a rollup over a table");
  AddCubeFlags(rollup, cube_flags);
  AddOutputFlags(rollup, output);

  CLI::App* maintain = app.add_subcommand(
      "maintain", "Materialize a cube, replay a change log, print cells");
  AddCubeFlags(maintain, cube_flags);
  AddOutputFlags(maintain, output);
  maintain->add_option("--log", log, "Change log to replay");
  maintain->add_option("--cell", cells,
                       "Cell coordinates to print, e.g. Chevy,ALL,ALL")
      ->allow_extra_args(false);
  maintain->add_flag("--stats", show_stats, "Print maintenance counters");

  CLI::App* explain = app.add_subcommand(
      "explain", "Show grouping sets and how each one is computed");
  explain->add_option("sql", sql, "Query text");
  explain->add_option("--file", file, "Read the query from a file");
  explain->add_option("--table", cube_flags.table, "Source table");
  explain->add_option("--group-by", cube_flags.group_by, "Plain grouping list");
  explain->add_option("--rollup", cube_flags.rollup, "Rollup list");
  explain->add_option("--cube", cube_flags.cube, "Cube list");
  explain->add_option("--agg", cube_flags.aggs, "Aggregate")
      ->allow_extra_args(false);
  explain->add_option("--strategy", cube_flags.strategy, "auto, naive or cascade")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* target = &app;
    for (CLI::App* sub : app.get_subcommands()) target = sub;
    err << target->help();
    return kExitUserError;
  }

  try {
    Catalog catalog = LoadCatalog(catalog_flags, config_env);
    const CubeStrategy strategy = ParseStrategy(cube_flags.strategy);

    if (query->parsed()) {
      std::string text = QueryText(sql, file);
      if (text.empty()) Fail(ErrorCode::kInvalidArgument, "no query given");
      QueryResult result =
          Execute(text, catalog, {OutputMode::kAllTokens, strategy});
      Emit(out, FromQuery(result), output);
    } else if (cube->parsed() || rollup->parsed()) {
      if (cube->parsed() && cube_flags.cube.empty()) {
        Fail(ErrorCode::kInvalidArgument, "cube needs --cube");
      }
      if (rollup->parsed() && cube_flags.rollup.empty()) {
        Fail(ErrorCode::kInvalidArgument, "rollup needs --rollup");
      }
      const Relation& rel = catalog.Table(cube_flags.table);
      GroupingPlan plan(rel.schema(), BuildSpec(cube_flags, catalog),
                        catalog.scalars());
      Emit(out, FromCube(Compute(rel, plan, strategy)), output);
    } else if (maintain->parsed()) {
      const Relation& rel = catalog.Table(cube_flags.table);
      MaterializedCube mc(rel, BuildSpec(cube_flags, catalog),
                          catalog.scalars());
      if (!log.empty()) {
        std::vector<Change> changes = ParseChangeLog(ReadFile(log), rel.schema());
        Replay(mc, changes);
      }
      if (cells.empty()) {
        Emit(out, FromCube(mc.Snapshot()), output);
      } else {
        const Schema& schema = mc.plan().output_schema();
        Relation picked{schema};
        for (const std::string& cell : cells) {
          picked.Append(mc.Read(ParseCell(cell, schema, mc.plan().width())));
        }
        ResultTable table{std::move(picked), {}, {}};
        for (std::size_t c = 0; c < mc.plan().width(); ++c) {
          table.dimensions.push_back(c);
        }
        Emit(out, table, output);
      }
      if (show_stats) {
        const MaintenanceStats& s = mc.stats();
        out << "inserts=" << s.inserts << " deletes=" << s.deletes
            << " cells_touched=" << s.cells_touched
            << " cells_created=" << s.cells_created
            << " cells_removed=" << s.cells_removed
            << " cells_retracted=" << s.cells_retracted
            << " cells_dirtied=" << s.cells_dirtied
            << " cells_recomputed=" << s.cells_recomputed << "\n";
      }
    } else if (explain->parsed()) {
      std::string text = QueryText(sql, file);
      if (!text.empty()) {
        out << Prepare(text, catalog)
                   .Explain(catalog, {OutputMode::kAllTokens, strategy});
      } else if (!cube_flags.table.empty()) {
        const Relation& rel = catalog.Table(cube_flags.table);
        GroupingPlan plan(rel.schema(), BuildSpec(cube_flags, catalog),
                          catalog.scalars());
        PrintLattice(out, plan, Compute(rel, plan, strategy));
      } else {
        Fail(ErrorCode::kInvalidArgument,
             "explain needs a query or --table with grouping lists");
      }
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  const char* env = std::getenv(kConfigEnv);
  return Run(args, out, err,
             env ? std::optional<std::string>(env) : std::nullopt);
}

}  // namespace datacube::cli
