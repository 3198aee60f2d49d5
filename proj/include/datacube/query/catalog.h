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

#ifndef DATACUBE_QUERY_CATALOG_H_
#define DATACUBE_QUERY_CATALOG_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "datacube/aggregates/aggregate.h"
#include "datacube/model/relation.h"
#include "datacube/model/scalar_function.h"

namespace datacube {

// `dependent` is determined by the columns in `determinants`. Names are
// matched case-insensitively against grouping names (aliases, or column
// names for plain references) and select-item names.
struct FunctionalDependency {
  std::vector<std::string> determinants;
  std::string dependent;
};

// Everything a query may refer to by name. Queries only read a catalog, so
// one catalog can serve concurrent executions once it is fully built.
class Catalog {
 public:
  // Empty registries; see WithBuiltins.
  Catalog() = default;

  static Catalog WithBuiltins();

  // Throws kDuplicateName.
  void AddTable(const std::string& name, Relation relation);
  // Throws kUnknownTable.
  const Relation& Table(std::string_view name) const;
  bool HasTable(std::string_view name) const;
  std::vector<std::string> TableNames() const;

  ScalarRegistry& scalars() { return scalars_; }
  const ScalarRegistry& scalars() const { return scalars_; }
  AggregateRegistry& aggregates() { return aggregates_; }
  const AggregateRegistry& aggregates() const { return aggregates_; }

  // Throws kInvalidArgument for an empty dependent or determinant list.
  void AddDependency(FunctionalDependency fd);
  const std::vector<FunctionalDependency>& dependencies() const {
    return dependencies_;
  }
  // Dependencies whose dependent is `name`.
  std::vector<const FunctionalDependency*> DependenciesOf(
      std::string_view name) const;

 private:
  struct Entry {
    std::string name;
    Relation relation;
  };
  std::map<std::string, Entry> tables_;  // keyed lower-case
  ScalarRegistry scalars_;
  AggregateRegistry aggregates_;
  std::vector<FunctionalDependency> dependencies_;
};

}  // namespace datacube

#endif  // DATACUBE_QUERY_CATALOG_H_
