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

#ifndef DATACUBE_MODEL_EVALUATOR_H_
#define DATACUBE_MODEL_EVALUATOR_H_

#include <memory>
#include <optional>
#include <span>

#include "datacube/model/expression.h"
#include "datacube/model/relation.h"
#include "datacube/model/scalar_function.h"

namespace datacube {

// An expression resolved against a schema: column references are indices
// and function calls point straight at their ScalarFunction. Binding does
// all name and type checking, so Evaluate only fails on genuine runtime
// conditions such as integer overflow.
//
// Semantics at evaluation time:
//  - comparisons and arithmetic involving Null yield Null;
//  - any scalar function or arithmetic applied to All yields Null;
//  - = and <> against All use plain Value equality;
//  - AND / OR / NOT follow three-valued logic.
class BoundExpr {
 public:
  BoundExpr() = default;

  Value Evaluate(std::span<const Value> row) const;
  // Predicate use: only a Boolean true passes.
  bool Test(std::span<const Value> row) const;

  // Static result type; nullopt for an untyped NULL literal.
  std::optional<DataType> type() const noexcept { return type_; }

  struct Node;

 private:
  friend BoundExpr Bind(const Expr&, const Schema&, const ScalarRegistry&);
  std::shared_ptr<const Node> root_;
  std::optional<DataType> type_;
};

// Throws kUnknownColumn, kUnknownFunction, kArityMismatch, kTypeMismatch.
BoundExpr Bind(const Expr& expr, const Schema& schema,
               const ScalarRegistry& registry);
BoundExpr Bind(const ExprPtr& expr, const Schema& schema,
               const ScalarRegistry& registry);

// One-shot convenience: bind then evaluate.
Value Evaluate(const Expr& expr, const Tuple& row, const Schema& schema,
               const ScalarRegistry& registry);

// SQL comparison of two non-marker values. Numeric types compare across
// Integer/Real; Text is byte-wise; false < true. Throws kTypeMismatch for
// incomparable kinds.
int CompareForSql(const Value& a, const Value& b);

}  // namespace datacube

#endif  // DATACUBE_MODEL_EVALUATOR_H_
