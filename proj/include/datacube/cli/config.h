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

#ifndef DATACUBE_CLI_CONFIG_H_
#define DATACUBE_CLI_CONFIG_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "datacube/model/relation.h"
#include "datacube/query/catalog.h"

namespace datacube::cli {

struct TableSource {
  std::string name;
  std::string path;
  std::optional<Schema> schema;
};

// Everything needed to build a Catalog:
//
//   {
//     "tables": {
//       "sales": "sales.csv",
//       "weather": {"path": "weather.csv",
//                   "schema": [{"name": "Time", "type": "integer"}, ...]}
//     },
//     "dependencies": [{"determinants": ["nation"], "dependent": "continent"}],
//     "extensions": ["bucket"]
//   }
//
// Relative paths resolve against the directory of the config file.
struct CatalogConfig {
  std::vector<TableSource> tables;
  std::vector<FunctionalDependency> dependencies;
  std::vector<std::string> extensions;
};

// Throws kInvalidArgument for malformed documents.
CatalogConfig ParseConfig(std::string_view json,
                          const std::string& base_dir = "");
// Throws kIoError when the file is unreadable.
CatalogConfig LoadConfig(const std::string& path);

// "boolean", "integer", "real", "text" (case-insensitive). Throws
// kInvalidArgument.
DataType ParseDataType(std::string_view name);

// "a,b->c". Throws kInvalidArgument.
FunctionalDependency ParseDependency(std::string_view text);

// Adds or replaces the table called `source.name`.
void SetTable(CatalogConfig& config, TableSource source);

// Loads every table and registers dependencies and extensions on top of
// the built-in functions. Throws kIoError, kRaggedRow, kSchemaMismatch,
// kInvalidArgument (unknown extension).
Catalog BuildCatalog(const CatalogConfig& config);

// Optional scalar functions:
//   bucket(x, width) - x rounded down to a multiple of width;
//   round(x)         - nearest integer.
// The ordered functions (N_tile, Rank, ...) are always available and may
// be listed without effect.
std::vector<std::string> ExtensionNames();
void EnableExtension(Catalog& catalog, std::string_view name);

}  // namespace datacube::cli

#endif  // DATACUBE_CLI_CONFIG_H_
