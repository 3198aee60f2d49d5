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

#ifndef DATACUBE_CLI_CSV_H_
#define DATACUBE_CLI_CSV_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "datacube/model/relation.h"

namespace datacube::cli {

// One field of a CSV record. `quoted` distinguishes "" (empty text) from
// an empty cell (Null).
struct CsvField {
  std::string text;
  bool quoted = false;
};

struct CsvRecord {
  std::vector<CsvField> fields;
  std::size_t line = 0;  // 1-based line the record starts on
  bool blank = false;     // an empty line
};

// RFC 4180 records: comma separated, double-quote quoting with "" as the
// escape, CRLF or LF line ends. A blank line is a record of one empty
// field marked `blank`. Throws kIoError
// for an unterminated quote.
std::vector<CsvRecord> SplitCsv(std::string_view text);

// Converts one field to a value of `type`. An unquoted empty field is
// Null. Throws kTypeMismatch.
Value ParseField(const CsvField& field, DataType type);

// Like ParseField, but an unquoted ALL is the All marker and an unquoted
// NULL is Null. Used for cube coordinates typed by hand.
Value ParseCoordinate(const CsvField& field, DataType type);
// `text` may be wrapped in double quotes to force a literal.
Value ParseCoordinate(std::string_view text, DataType type);

// The narrowest type accepting every non-empty field: Integer, then Real,
// then Boolean (true/false), else Text. A column with no data is Text.
DataType InferType(const std::vector<const CsvField*>& fields);

// Header line first. Without `schema`, column types are inferred; with
// it, the header must name the same columns in the same order
// (case-insensitively). Throws kIoError, kRaggedRow, kSchemaMismatch,
// kTypeMismatch. `source` names the input in messages.
Relation ParseCsv(std::string_view text, const std::optional<Schema>& schema,
                  std::string_view source = "<input>");
Relation LoadCsv(const std::string& path,
                 const std::optional<Schema>& schema = std::nullopt);

// A single headerless record converted against `schema`. Throws
// kRaggedRow, kTypeMismatch.
Tuple ParseCsvRow(std::string_view text, const Schema& schema);

// Field text for output. Text is quoted when it contains a separator, a
// quote or a line break, when it is empty, or when it would otherwise read
// back as a different value. Null is the empty field; Reals always carry a
// decimal point or exponent. All is written as ALL.
std::string FormatField(const Value& v);
std::string FormatCsv(const Relation& relation);

}  // namespace datacube::cli

#endif  // DATACUBE_CLI_CSV_H_
