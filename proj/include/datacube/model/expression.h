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

#ifndef DATACUBE_MODEL_EXPRESSION_H_
#define DATACUBE_MODEL_EXPRESSION_H_

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "datacube/model/value.h"

namespace datacube {

enum class UnaryOp { kNot, kNegate };
enum class BinaryOp {
  kEq, kNe, kLt, kLe, kGt, kGe,
  kAnd, kOr,
  kAdd, kSub, kMul, kDiv,
};

struct Expr;
// Expression trees are immutable and shared freely between plans.
using ExprPtr = std::shared_ptr<const Expr>;

struct ColumnRef {
  std::string qualifier;  // empty when unqualified
  std::string name;
};

struct Literal {
  Value value;
};

struct FunctionCall {
  std::string name;
  std::vector<ExprPtr> args;
  bool distinct = false;  // COUNT(DISTINCT x)
  bool star = false;      // COUNT(*)
};

struct UnaryExpr {
  UnaryOp op;
  ExprPtr operand;
};

struct BinaryExpr {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct InListExpr {
  ExprPtr operand;
  std::vector<ExprPtr> items;
  bool negated = false;
};

struct BetweenExpr {
  ExprPtr operand;
  ExprPtr low;
  ExprPtr high;
  bool negated = false;
};

struct IsNullExpr {
  ExprPtr operand;
  bool negated = false;
};

struct Expr {
  std::variant<ColumnRef, Literal, FunctionCall, UnaryExpr, BinaryExpr,
               InListExpr, BetweenExpr, IsNullExpr>
      node;

  template <typename T>
  const T* As() const {
    return std::get_if<T>(&node);
  }
};

ExprPtr Col(std::string name);
ExprPtr Col(std::string qualifier, std::string name);
ExprPtr Lit(Value value);
ExprPtr Call(std::string name, std::vector<ExprPtr> args);
ExprPtr Unary(UnaryOp op, ExprPtr operand);
ExprPtr Binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr MakeExpr(Expr e);

// Structural equality. Identifier and function names compare exactly when
// `ignore_case` is false; value literals always compare structurally.
bool SameExpr(const Expr& a, const Expr& b, bool ignore_case = false);
bool SameExpr(const ExprPtr& a, const ExprPtr& b, bool ignore_case = false);

// Canonical SQL text. Binary operations are fully parenthesised so the
// result reparses to the same tree.
std::string ToSql(const Expr& e);
std::string ToSql(const ExprPtr& e);
std::string QuoteIdentifierIfNeeded(const std::string& ident);
std::string QuoteString(const std::string& s);
// Keywords of the query dialect; such identifiers must be double-quoted.
bool IsReservedWord(std::string_view word);

std::string_view BinaryOpSql(BinaryOp op);

// Returns a copy of `e` where every node for which `fn` returns non-null is
// replaced by that result. Children are visited only when `fn` declines.
ExprPtr Rewrite(const ExprPtr& e,
                const std::function<ExprPtr(const ExprPtr&)>& fn);

// Pre-order visit. Return false from `fn` to skip a node's children.
void Visit(const ExprPtr& e, const std::function<bool(const Expr&)>& fn);

}  // namespace datacube

#endif  // DATACUBE_MODEL_EXPRESSION_H_
