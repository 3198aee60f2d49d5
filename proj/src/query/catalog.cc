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

#include "datacube/query/catalog.h"

#include "datacube/error.h"

namespace datacube {

Catalog Catalog::WithBuiltins() {
  Catalog c;
  c.scalars_ = ScalarRegistry::WithBuiltins();
  c.aggregates_ = AggregateRegistry::WithBuiltins();
  return c;
}

void Catalog::AddTable(const std::string& name, Relation relation) {
  std::string key = ToLower(name);
  if (tables_.count(key)) {
    Fail(ErrorCode::kDuplicateName, "table " + name + " already exists");
  }
  tables_.emplace(key, Entry{name, std::move(relation)});
}

const Relation& Catalog::Table(std::string_view name) const {
  auto it = tables_.find(ToLower(name));
  if (it == tables_.end()) {
    Fail(ErrorCode::kUnknownTable, "no table named " + std::string(name));
  }
  return it->second.relation;
}

bool Catalog::HasTable(std::string_view name) const {
  return tables_.count(ToLower(name)) > 0;
}

std::vector<std::string> Catalog::TableNames() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : tables_) out.push_back(entry.name);
  return out;
}

void Catalog::AddDependency(FunctionalDependency fd) {
  if (fd.dependent.empty() || fd.determinants.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "a functional dependency needs a dependent and determinants");
  }
  dependencies_.push_back(std::move(fd));
}

std::vector<const FunctionalDependency*> Catalog::DependenciesOf(
    std::string_view name) const {
  std::vector<const FunctionalDependency*> out;
  for (const FunctionalDependency& fd : dependencies_) {
    if (EqualsIgnoreCase(fd.dependent, name)) out.push_back(&fd);
  }
  return out;
}

}  // namespace datacube
