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

#ifndef DATACUBE_QUERY_PARSER_H_
#define DATACUBE_QUERY_PARSER_H_

#include <string_view>

#include "datacube/model/expression.h"
#include "datacube/query/ast.h"

namespace datacube {

// Recursive-descent parser for the query dialect:
//
//   query    := select {UNION [ALL] select} [ORDER BY order {, order}] [;]
//   select   := SELECT item {, item} FROM source [WHERE expr]
//               [GROUP BY grouping] [HAVING expr]
//   grouping := [list] [[,] ROLLUP list] [[,] CUBE list]
//             | list WITH (CUBE | ROLLUP)
//   list     := expr [AS ident] [COLLATE ident] {, ...}
//   source   := (ident | '(' query ')') [[AS] ident]
//               {JOIN ident [[AS] ident] USING '(' ident {, ident} ')'}
//
// Keywords are case-insensitive; identifiers keep their spelling. The
// legacy suffix form is normalised into the infix lists. Throws
// SyntaxError with a 1-based line and column.
Query Parse(std::string_view text);

// A single expression, e.g. a --fix or --cell argument.
ExprPtr ParseExpression(std::string_view text);

}  // namespace datacube

#endif  // DATACUBE_QUERY_PARSER_H_
