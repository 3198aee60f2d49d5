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

#include "datacube/cli/changelog.h"

#include <cctype>
#include <string>

#include "datacube/cli/csv.h"
#include "datacube/error.h"

namespace datacube::cli {
namespace {

// Position of the " -> " separator outside double quotes.
std::size_t FindArrow(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && s[i] == '-' && s[i + 1] == '>') return i;
  }
  return std::string_view::npos;
}

std::string_view Strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string At(std::size_t line) { return "change log line " + std::to_string(line) + ": "; }

}  // namespace

std::vector<Change> ParseChangeLog(std::string_view text, const Schema& schema) {
  std::vector<Change> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view body = Strip(line);
    if (body.empty() || body.front() == '#') continue;

    Change c;
    c.line = line_no;
    const char op = static_cast<char>(std::toupper(body.front()));
    if ((op != 'I' && op != 'D' && op != 'U') || body.size() < 2 ||
        !std::isspace(static_cast<unsigned char>(body[1]))) {
      Fail(ErrorCode::kInvalidArgument,
           At(line_no) + "expected 'I', 'D' or 'U' followed by a row");
    }
    // Leading spaces belong to the separator, not the first field.
    std::string_view rest = body.substr(1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    try {
      if (op == 'U') {
        c.kind = ChangeKind::kUpdate;
        std::size_t arrow = FindArrow(rest);
        if (arrow == std::string_view::npos) {
          Fail(ErrorCode::kInvalidArgument, "update needs 'old -> new'");
        }
        c.row = ParseCsvRow(Strip(rest.substr(0, arrow)), schema);
        c.new_row = ParseCsvRow(Strip(rest.substr(arrow + 2)), schema);
      } else {
        c.kind = op == 'I' ? ChangeKind::kInsert : ChangeKind::kDelete;
        c.row = ParseCsvRow(rest, schema);
      }
    } catch (const Error& e) {
      Fail(e.code(), At(line_no) + e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

void Replay(MaterializedCube& cube, std::span<const Change> changes) {
  for (const Change& c : changes) {
    try {
      switch (c.kind) {
        case ChangeKind::kInsert: cube.Insert(c.row); break;
        case ChangeKind::kDelete: cube.Delete(c.row); break;
        case ChangeKind::kUpdate: cube.Update(c.row, c.new_row); break;
      }
    } catch (const Error& e) {
      Fail(e.code(), At(c.line) + e.what());
    }
  }
}

}  // namespace datacube::cli
