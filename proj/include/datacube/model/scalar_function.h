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

#ifndef DATACUBE_MODEL_SCALAR_FUNCTION_H_
#define DATACUBE_MODEL_SCALAR_FUNCTION_H_

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "datacube/model/value.h"

namespace datacube {

// A row-at-a-time function usable in grouping expressions, decorations and
// predicates: Day(Time), Nation(Latitude, Longitude), continent(nation).
//
// The evaluator never passes All to `fn` (the call yields Null instead) and,
// unless `strict` is false, never passes Null either.
struct ScalarFunction {
  std::string name;
  std::size_t min_arity = 1;
  std::size_t max_arity = 1;
  // Validates argument types and returns the result type. Throws
  // kTypeMismatch.
  std::function<DataType(std::span<const DataType>)> result_type;
  std::function<Value(std::span<const Value>)> fn;
  bool strict = true;
};

class ScalarRegistry {
 public:
  // Throws kDuplicateName (names are case-insensitive).
  void Register(ScalarFunction fn);
  const ScalarFunction* Find(std::string_view name) const;
  std::vector<std::string> Names() const;

  // upper, lower, length, abs, year, month, day.
  static ScalarRegistry WithBuiltins();

 private:
  std::map<std::string, ScalarFunction> functions_;  // keyed lower-case
};

// Helper for functions whose arguments all share one accepted type set.
std::function<DataType(std::span<const DataType>)> ExpectArgs(
    std::string name, std::vector<std::vector<DataType>> accepted,
    DataType result);

}  // namespace datacube

#endif  // DATACUBE_MODEL_SCALAR_FUNCTION_H_
