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

#ifndef DATACUBE_CLI_CHANGELOG_H_
#define DATACUBE_CLI_CHANGELOG_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "datacube/maintain/maintain.h"
#include "datacube/model/relation.h"

namespace datacube::cli {

enum class ChangeKind { kInsert, kDelete, kUpdate };

struct Change {
  ChangeKind kind = ChangeKind::kInsert;
  Tuple row;      // the inserted or deleted row, or the old row of an update
  Tuple new_row;  // updates only
  std::size_t line = 0;
};

// One operation per line:
//   I <csv row>
//   D <csv row>
//   U <csv old row> -> <csv new row>
// Blank lines and lines starting with '#' are ignored. Rows are converted
// against `schema`. Throws kInvalidArgument, kRaggedRow, kTypeMismatch with
// the offending line number.
std::vector<Change> ParseChangeLog(std::string_view text, const Schema& schema);

// Applies the changes in order; stops at the first failure, reporting the
// log line.
void Replay(MaterializedCube& cube, std::span<const Change> changes);

}  // namespace datacube::cli

#endif  // DATACUBE_CLI_CHANGELOG_H_
