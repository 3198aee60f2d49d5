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

#include "datacube/cli/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "datacube/error.h"

namespace datacube::cli {
namespace {

std::optional<std::int64_t> ParseInt(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::optional<double> ParseReal(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<bool> ParseBool(std::string_view s) {
  if (EqualsIgnoreCase(s, "true")) return true;
  if (EqualsIgnoreCase(s, "false")) return false;
  return std::nullopt;
}

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

}  // namespace

std::vector<CsvRecord> SplitCsv(std::string_view text) {
  std::vector<CsvRecord> out;
  std::size_t i = 0;
  std::size_t line = 1;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] == '\n' || text[i] == '\r') {
      // A blank line: one empty field, which callers may drop.
      CsvRecord blank;
      blank.line = line;
      blank.fields.emplace_back();
      blank.blank = true;
      if (text[i] == '\r') ++i;
      if (i < n && text[i] == '\n') ++i;
      ++line;
      out.push_back(std::move(blank));
      continue;
    }
    CsvRecord rec;
    rec.line = line;
    for (;;) {
      CsvField field;
      if (i < n && text[i] == '"') {
        field.quoted = true;
        ++i;
        for (;;) {
          if (i >= n) {
            Fail(ErrorCode::kIoError,
                 "unterminated quoted field starting on line " +
                     std::to_string(rec.line));
          }
          char c = text[i++];
          if (c == '"') {
            if (i < n && text[i] == '"') {
              field.text.push_back('"');
              ++i;
              continue;
            }
            break;
          }
          if (c == '\n') ++line;
          field.text.push_back(c);
        }
        // Tolerate stray characters after the closing quote.
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          field.text.push_back(text[i++]);
        }
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          field.text.push_back(text[i++]);
        }
      }
      rec.fields.push_back(std::move(field));
      if (i < n && text[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i < n && text[i] == '\r') ++i;
    if (i < n && text[i] == '\n') {
      ++i;
      ++line;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

Value ParseField(const CsvField& field, DataType type) {
  if (field.text.empty() && !field.quoted) return Value::Null();
  const std::string& s = field.text;
  switch (type) {
    case DataType::kText:
      return Value::Text(s);
    case DataType::kInteger:
      if (auto v = ParseInt(s)) return Value::Int(*v);
      break;
    case DataType::kReal:
      if (auto v = ParseReal(s)) return Value::Real(*v);
      break;
    case DataType::kBoolean:
      if (auto v = ParseBool(s)) return Value::Bool(*v);
      break;
  }
  Fail(ErrorCode::kTypeMismatch, "'" + s + "' is not a valid " +
                                     std::string(DataTypeName(type)));
}

Value ParseCoordinate(const CsvField& field, DataType type) {
  if (!field.quoted && field.text == "ALL") return Value::All();
  if (!field.quoted && field.text == "NULL") return Value::Null();
  return ParseField(field, type);
}

Value ParseCoordinate(std::string_view text, DataType type) {
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return ParseField({std::string(text.substr(1, text.size() - 2)), true},
                      type);
  }
  return ParseCoordinate(CsvField{std::string(text), false}, type);
}

DataType InferType(const std::vector<const CsvField*>& fields) {
  bool any = false, ints = true, reals = true, bools = true;
  for (const CsvField* f : fields) {
    if (f->text.empty() && !f->quoted) continue;
    any = true;
    if (f->quoted) return DataType::kText;
    ints = ints && ParseInt(f->text).has_value();
    reals = reals && ParseReal(f->text).has_value();
    bools = bools && ParseBool(f->text).has_value();
  }
  if (!any) return DataType::kText;
  if (ints) return DataType::kInteger;
  if (reals) return DataType::kReal;
  if (bools) return DataType::kBoolean;
  return DataType::kText;
}

Relation ParseCsv(std::string_view text, const std::optional<Schema>& schema,
                  std::string_view source) {
  std::vector<CsvRecord> records = SplitCsv(text);
  while (!records.empty() && records.front().blank) {
    records.erase(records.begin());
  }
  if (records.empty()) {
    Fail(ErrorCode::kIoError, std::string(source) + ": missing header line");
  }
  const std::size_t width = records.front().fields.size();
  // In a one-column file a blank line is a Null; elsewhere it is noise.
  if (width != 1) {
    std::erase_if(records, [](const CsvRecord& r) { return r.blank; });
  }
  const CsvRecord& header = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != width) {
      Fail(ErrorCode::kRaggedRow,
           Where(source, records[r].line) + ": expected " +
               std::to_string(width) + " fields, found " +
               std::to_string(records[r].fields.size()));
    }
  }

  std::vector<Column> columns;
  if (schema) {
    if (schema->size() != width) {
      Fail(ErrorCode::kSchemaMismatch,
           std::string(source) + ": header has " + std::to_string(width) +
               " columns, declared schema has " +
               std::to_string(schema->size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (!EqualsIgnoreCase((*schema)[c].name, header.fields[c].text)) {
        Fail(ErrorCode::kSchemaMismatch,
             std::string(source) + ": header column " + std::to_string(c + 1) +
                 " is '" + header.fields[c].text + "', declared '" +
                 (*schema)[c].name + "'");
      }
    }
    columns = schema->columns();
  } else {
    for (std::size_t c = 0; c < width; ++c) {
      std::vector<const CsvField*> col;
      col.reserve(records.size() - 1);
      for (std::size_t r = 1; r < records.size(); ++r) {
        col.push_back(&records[r].fields[c]);
      }
      columns.push_back({header.fields[c].text, InferType(col), {}});
    }
  }

  Relation rel{Schema(std::move(columns))};
  for (std::size_t r = 1; r < records.size(); ++r) {
    Tuple row;
    row.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
      try {
        row.push_back(ParseField(records[r].fields[c], rel.schema()[c].type));
      } catch (const Error& e) {
        Fail(e.code(), Where(source, records[r].line) + ": column '" +
                           rel.schema()[c].name + "': " + e.what());
      }
    }
    rel.Append(std::move(row));
  }
  return rel;
}

Relation LoadCsv(const std::string& path, const std::optional<Schema>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) Fail(ErrorCode::kIoError, "error reading " + path);
  return ParseCsv(buf.str(), schema, path);
}

Tuple ParseCsvRow(std::string_view text, const Schema& schema) {
  std::vector<CsvRecord> records = SplitCsv(text);
  std::erase_if(records, [](const CsvRecord& r) { return r.blank; });
  std::vector<CsvField> fields;
  if (records.size() > 1) {
    Fail(ErrorCode::kRaggedRow, "expected a single record");
  }
  if (!records.empty()) fields = std::move(records.front().fields);
  if (fields.size() != schema.size()) {
    Fail(ErrorCode::kRaggedRow, "expected " + std::to_string(schema.size()) +
                                    " fields, found " +
                                    std::to_string(fields.size()));
  }
  Tuple row;
  for (std::size_t c = 0; c < fields.size(); ++c) {
    row.push_back(ParseField(fields[c], schema[c].type));
  }
  return row;
}

std::string FormatField(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kNull:
      return "";
    case ValueKind::kReal: {
      std::string s = v.ToString();
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
    case ValueKind::kText: {
      const std::string& s = v.as_text();
      bool quote = s.empty() || s.find_first_of(",\"\r\n") != std::string::npos ||
                   ParseReal(s) || ParseBool(s) || s == "ALL" ||
                   s.front() == ' ' || s.back() == ' ';
      if (!quote) return s;
      std::string out = "\"";
      for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
      }
      out.push_back('"');
      return out;
    }
    default:
      return v.ToString();
  }
}

std::string FormatCsv(const Relation& relation) {
  std::string out;
  const Schema& schema = relation.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c) out += ',';
    out += FormatField(Value::Text(schema[c].name));
  }
  out += '\n';
  for (const Tuple& row : relation.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += FormatField(row[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace datacube::cli
