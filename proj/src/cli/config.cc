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

#include "datacube/cli/config.h"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "datacube/cli/csv.h"
#include "datacube/error.h"
#include "datacube/query/query.h"
#include "json.hpp"

namespace datacube::cli {
namespace {

using Json = nlohmann::json;

[[noreturn]] void Bad(const std::string& what) {
  Fail(ErrorCode::kInvalidArgument, "config: " + what);
}

std::string Resolve(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

Schema ParseSchema(const Json& j, const std::string& table) {
  if (!j.is_array()) Bad("schema of '" + table + "' must be an array");
  std::vector<Column> columns;
  for (const Json& c : j) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string() ||
        !c.contains("type") || !c["type"].is_string()) {
      Bad("schema entries of '" + table + "' need string name and type");
    }
    columns.push_back({c["name"].get<std::string>(),
                       ParseDataType(c["type"].get<std::string>()),
                       {}});
  }
  return Schema(std::move(columns));
}

std::vector<std::string> StringList(const Json& j, const std::string& what) {
  if (!j.is_array()) Bad(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const Json& s : j) {
    if (!s.is_string()) Bad(what + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

ScalarFunction Bucket() {
  ScalarFunction f;
  f.name = "bucket";
  f.min_arity = f.max_arity = 2;
  f.result_type = [](std::span<const DataType> args) {
    if (!IsNumeric(args[0]) || !IsNumeric(args[1])) {
      Fail(ErrorCode::kTypeMismatch, "bucket() requires numeric arguments");
    }
    return args[0] == DataType::kInteger && args[1] == DataType::kInteger
               ? DataType::kInteger
               : DataType::kReal;
  };
  f.fn = [](std::span<const Value> a) {
    if (a[0].kind() == ValueKind::kInteger &&
        a[1].kind() == ValueKind::kInteger) {
      std::int64_t x = a[0].as_int(), w = a[1].as_int();
      if (w == 0) return Value::Null();
      std::int64_t q = x / w;
      if ((x % w != 0) && ((x < 0) != (w < 0))) --q;
      return Value::Int(q * w);
    }
    double w = a[1].as_number();
    if (w == 0) return Value::Null();
    return Value::Real(std::floor(a[0].as_number() / w) * w);
  };
  return f;
}

ScalarFunction Round() {
  ScalarFunction f;
  f.name = "round";
  f.result_type = [](std::span<const DataType> args) {
    if (!IsNumeric(args[0])) {
      Fail(ErrorCode::kTypeMismatch, "round() requires a numeric argument");
    }
    return DataType::kInteger;
  };
  f.fn = [](std::span<const Value> a) {
    if (a[0].kind() == ValueKind::kInteger) return a[0];
    double r = std::round(a[0].as_real());
    if (!(std::fabs(r) < 9.2e18)) {
      Fail(ErrorCode::kNumericOverflow, "round() result out of range");
    }
    return Value::Int(static_cast<std::int64_t>(r));
  };
  return f;
}

}  // namespace

DataType ParseDataType(std::string_view name) {
  for (DataType t : {DataType::kBoolean, DataType::kInteger, DataType::kReal,
                     DataType::kText}) {
    if (EqualsIgnoreCase(DataTypeName(t), name)) return t;
  }
  if (EqualsIgnoreCase(name, "int")) return DataType::kInteger;
  if (EqualsIgnoreCase(name, "bool")) return DataType::kBoolean;
  if (EqualsIgnoreCase(name, "double")) return DataType::kReal;
  Fail(ErrorCode::kInvalidArgument, "unknown type '" + std::string(name) + "'");
}

FunctionalDependency ParseDependency(std::string_view text) {
  std::size_t arrow = text.find("->");
  if (arrow == std::string_view::npos) {
    Fail(ErrorCode::kInvalidArgument,
         "dependency '" + std::string(text) + "' must look like a,b->c");
  }
  FunctionalDependency fd;
  std::string_view lhs = text.substr(0, arrow);
  while (!lhs.empty()) {
    std::size_t comma = lhs.find(',');
    std::string part = Trim(lhs.substr(0, comma));
    if (!part.empty()) fd.determinants.push_back(part);
    if (comma == std::string_view::npos) break;
    lhs.remove_prefix(comma + 1);
  }
  fd.dependent = Trim(text.substr(arrow + 2));
  if (fd.determinants.empty() || fd.dependent.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "dependency '" + std::string(text) + "' must look like a,b->c");
  }
  return fd;
}

CatalogConfig ParseConfig(std::string_view json, const std::string& base_dir) {
  Json doc;
  try {
    doc = Json::parse(json);
  } catch (const Json::exception& e) {
    Bad(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) Bad("top level must be an object");
  CatalogConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "tables") {
      if (!value.is_object()) Bad("tables must be an object");
      for (const auto& [name, t] : value.items()) {
        TableSource src{name, {}, std::nullopt};
        if (t.is_string()) {
          src.path = t.get<std::string>();
        } else if (t.is_object() && t.contains("path") &&
                   t["path"].is_string()) {
          src.path = t["path"].get<std::string>();
          if (t.contains("schema")) src.schema = ParseSchema(t["schema"], name);
        } else {
          Bad("table '" + name + "' needs a path");
        }
        src.path = Resolve(src.path, base_dir);
        config.tables.push_back(std::move(src));
      }
    } else if (key == "dependencies") {
      if (!value.is_array()) Bad("dependencies must be an array");
      for (const Json& d : value) {
        if (d.is_string()) {
          config.dependencies.push_back(ParseDependency(d.get<std::string>()));
          continue;
        }
        if (!d.is_object() || !d.contains("determinants") ||
            !d.contains("dependent") || !d["dependent"].is_string()) {
          Bad("each dependency needs determinants and dependent");
        }
        config.dependencies.push_back(
            {StringList(d["determinants"], "determinants"),
             d["dependent"].get<std::string>()});
      }
    } else if (key == "extensions") {
      config.extensions = StringList(value, "extensions");
    } else {
      Bad("unknown key '" + key + "'");
    }
  }
  return config;
}

CatalogConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(),
                     std::filesystem::path(path).parent_path().string());
}

void SetTable(CatalogConfig& config, TableSource source) {
  for (TableSource& t : config.tables) {
    if (EqualsIgnoreCase(t.name, source.name)) {
      t = std::move(source);
      return;
    }
  }
  config.tables.push_back(std::move(source));
}

Catalog BuildCatalog(const CatalogConfig& config) {
  Catalog catalog = Catalog::WithBuiltins();
  for (const TableSource& t : config.tables) {
    if (!std::filesystem::exists(t.path)) {
      Fail(ErrorCode::kIoError,
           "table '" + t.name + "': no such file " + t.path);
    }
    catalog.AddTable(t.name, LoadCsv(t.path, t.schema));
  }
  for (const FunctionalDependency& fd : config.dependencies) {
    catalog.AddDependency(fd);
  }
  for (const std::string& e : config.extensions) EnableExtension(catalog, e);
  return catalog;
}

std::vector<std::string> ExtensionNames() { return {"bucket", "round"}; }

void EnableExtension(Catalog& catalog, std::string_view name) {
  if (IsOrderedFunction(name)) return;
  if (EqualsIgnoreCase(name, "bucket")) {
    if (!catalog.scalars().Find("bucket")) catalog.scalars().Register(Bucket());
    return;
  }
  if (EqualsIgnoreCase(name, "round")) {
    if (!catalog.scalars().Find("round")) catalog.scalars().Register(Round());
    return;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown extension '" + std::string(name) + "'");
}

}  // namespace datacube::cli
