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

#ifndef DATACUBE_ERROR_H_
#define DATACUBE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace datacube {

enum class ErrorCode {
  // Name resolution and typing.
  kUnknownColumn,
  kUnknownFunction,
  kUnknownTable,
  kUnknownAggregate,
  kArityMismatch,
  kTypeMismatch,
  kIndexOutOfRange,
  kNumericOverflow,
  // Aggregate framework.
  kDuplicateName,
  kMissingMerge,
  kMissingRetract,
  kInvalidSpec,
  kHolisticMerge,
  kSpecMismatch,
  kInvalidN,
  // Grouping operators.
  kOrderedAggregateWithoutOrder,
  kOverlappingLists,
  kHolisticAggregate,
  kNotFound,
  kInvalidArgument,
  // Query dialect.
  kSyntaxError,
  kNotFunctionallyDependent,
  kGroupingOfNonGroupColumn,
  kUnsupportedFeature,
  kDependencyViolated,
  // Maintenance.
  kHolisticInsertClass,
  kRowNotFound,
  // I/O and CLI.
  kIoError,
  kRaggedRow,
  kSchemaMismatch,
  kNotTwoDimensional,
  kMultipleAggregates,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every user-facing failure in the engine is reported as an Error carrying
// a machine-checkable code. Anything else escaping the library is a bug.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure with a 1-based source position and the set of tokens the
// parser would have accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column,
              std::vector<std::string> expected, const std::string& found);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace datacube

#endif  // DATACUBE_ERROR_H_
