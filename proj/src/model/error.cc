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

#include "datacube/error.h"

#include <sstream>

namespace datacube {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kUnknownFunction: return "UnknownFunction";
    case ErrorCode::kUnknownTable: return "UnknownTable";
    case ErrorCode::kUnknownAggregate: return "UnknownAggregate";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNumericOverflow: return "NumericOverflow";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kMissingMerge: return "MissingMerge";
    case ErrorCode::kMissingRetract: return "MissingRetract";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kHolisticMerge: return "HolisticMerge";
    case ErrorCode::kSpecMismatch: return "SpecMismatch";
    case ErrorCode::kInvalidN: return "InvalidN";
    case ErrorCode::kOrderedAggregateWithoutOrder:
      return "OrderedAggregateWithoutOrder";
    case ErrorCode::kOverlappingLists: return "OverlappingLists";
    case ErrorCode::kHolisticAggregate: return "HolisticAggregate";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kNotFunctionallyDependent:
      return "NotFunctionallyDependent";
    case ErrorCode::kGroupingOfNonGroupColumn:
      return "GroupingOfNonGroupColumn";
    case ErrorCode::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::kDependencyViolated: return "DependencyViolated";
    case ErrorCode::kHolisticInsertClass: return "HolisticInsertClass";
    case ErrorCode::kRowNotFound: return "RowNotFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kRaggedRow: return "RaggedRow";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kNotTwoDimensional: return "NotTwoDimensional";
    case ErrorCode::kMultipleAggregates: return "MultipleAggregates";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

namespace {

std::string SyntaxMessage(std::size_t line, std::size_t column,
                          const std::vector<std::string>& expected,
                          const std::string& found) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  os << " but found " << found;
  return os.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column,
                         std::vector<std::string> expected,
                         const std::string& found)
    : Error(ErrorCode::kSyntaxError,
            SyntaxMessage(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace datacube
