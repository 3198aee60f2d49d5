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

#include "datacube/model/evaluator.h"

#include "datacube/error.h"
#include "fixtures/fixtures.h"
#include "gtest/gtest.h"

namespace datacube {
namespace {

using testing::I;
using testing::kAll;
using testing::kNull;
using testing::T;

class EvaluateTest : public ::testing::Test {
 protected:
  Schema schema_ = testing::SalesSchema();
  Tuple chevy_ = {T("Chevy"), I(1994), T("black"), I(50)};
  ScalarRegistry registry_ = ScalarRegistry::WithBuiltins();

  Value Eval(const ExprPtr& e) { return Evaluate(*e, chevy_, schema_, registry_); }

  ErrorCode EvalError(const ExprPtr& e) {
    try {
      Eval(e);
    } catch (const Error& err) {
      return err.code();
    }
    ADD_FAILURE() << "no error for " << ToSql(e);
    return ErrorCode::kInvalidArgument;
  }
};

TEST_F(EvaluateTest, LiteralIdentity) { EXPECT_EQ(Eval(Lit(I(5))), I(5)); }

TEST_F(EvaluateTest, ColumnReference) {
  EXPECT_EQ(Eval(Col("Color")), T("black"));
  EXPECT_EQ(Eval(Col("sales", "units")), I(50));
}

TEST_F(EvaluateTest, RegisteredScalarFunction) {
  // Oracle: apply the registered function directly to the column value.
  const ScalarFunction* upper = registry_.Find("UPPER");
  ASSERT_NE(upper, nullptr);
  std::vector<Value> args = {chevy_[0]};
  Value expected = upper->fn(args);
  EXPECT_EQ(expected, T("CHEVY"));
  EXPECT_EQ(Eval(Call("upper", {Col("Model")})), expected);
}

TEST_F(EvaluateTest, ResolutionErrors) {
  EXPECT_EQ(EvalError(Col("Price")), ErrorCode::kUnknownColumn);
  EXPECT_EQ(EvalError(Call("nation", {Col("Model")})),
            ErrorCode::kUnknownFunction);
  EXPECT_EQ(EvalError(Call("upper", {Col("Model"), Col("Color")})),
            ErrorCode::kArityMismatch);
  EXPECT_EQ(EvalError(Call("day", {Col("Model")})), ErrorCode::kTypeMismatch);
  EXPECT_EQ(EvalError(Binary(BinaryOp::kEq, Col("Model"), Col("Year"))),
            ErrorCode::kTypeMismatch);
}

TEST_F(EvaluateTest, NullComparisonsAreUnknown) {
  Tuple row = {kNull, I(1994), T("black"), I(50)};
  auto eq = Binary(BinaryOp::kEq, Col("Model"), Lit(T("Chevy")));
  EXPECT_EQ(Evaluate(*eq, row, schema_, registry_), kNull);
  BoundExpr bound = Bind(eq, schema_, registry_);
  EXPECT_FALSE(bound.Test(row));
  auto negated = Unary(UnaryOp::kNot, eq);
  EXPECT_FALSE(Bind(negated, schema_, registry_).Test(row));
}

TEST_F(EvaluateTest, AllIsOpaqueToFunctionsAndArithmetic) {
  Tuple row = {kAll, kAll, T("black"), I(50)};
  EXPECT_EQ(Evaluate(*Call("upper", {Col("Model")}), row, schema_, registry_),
            kNull);
  EXPECT_EQ(Evaluate(*Binary(BinaryOp::kAdd, Col("Year"), Lit(I(1))), row,
                     schema_, registry_),
            kNull);
  // Equality against ALL is plain value equality.
  EXPECT_EQ(Evaluate(*Binary(BinaryOp::kEq, Col("Model"), Lit(kAll)), row,
                     schema_, registry_),
            Value::Bool(true));
  EXPECT_EQ(Evaluate(*Binary(BinaryOp::kEq, Col("Color"), Lit(kAll)), row,
                     schema_, registry_),
            Value::Bool(false));
}

TEST_F(EvaluateTest, ThreeValuedConnectives) {
  auto t = Lit(Value::Bool(true)), f = Lit(Value::Bool(false)), u = Lit(kNull);
  EXPECT_EQ(Eval(Binary(BinaryOp::kAnd, u, f)), Value::Bool(false));
  EXPECT_EQ(Eval(Binary(BinaryOp::kAnd, u, t)), kNull);
  EXPECT_EQ(Eval(Binary(BinaryOp::kOr, u, t)), Value::Bool(true));
  EXPECT_EQ(Eval(Binary(BinaryOp::kOr, f, u)), kNull);
}

TEST_F(EvaluateTest, InBetweenAndIsNull) {
  Expr in{InListExpr{Col("Model"), {Lit(T("Ford")), Lit(T("Chevy"))}, false}};
  EXPECT_EQ(Eval(MakeExpr(in)), Value::Bool(true));
  Expr between{BetweenExpr{Col("Year"), Lit(I(1990)), Lit(I(1992)), false}};
  EXPECT_EQ(Eval(MakeExpr(between)), Value::Bool(false));
  Expr not_between{BetweenExpr{Col("Year"), Lit(I(1990)), Lit(I(1992)), true}};
  EXPECT_EQ(Eval(MakeExpr(not_between)), Value::Bool(true));
  Expr in_null{InListExpr{Col("Model"), {Lit(T("Ford")), Lit(kNull)}, false}};
  EXPECT_EQ(Eval(MakeExpr(in_null)), kNull);
  Expr is_null{IsNullExpr{Col("Model"), false}};
  EXPECT_EQ(Eval(MakeExpr(is_null)), Value::Bool(false));
}

TEST_F(EvaluateTest, ArithmeticTyping) {
  EXPECT_EQ(Eval(Binary(BinaryOp::kMul, Col("Units"), Lit(I(2)))), I(100));
  EXPECT_EQ(Eval(Binary(BinaryOp::kDiv, Col("Units"), Lit(I(4)))),
            Value::Real(12.5));
  EXPECT_EQ(Eval(Binary(BinaryOp::kDiv, Col("Units"), Lit(I(0)))), kNull);
  EXPECT_EQ(Bind(Binary(BinaryOp::kAdd, Col("Units"), Lit(I(1))), schema_,
                 registry_)
                .type(),
            DataType::kInteger);
}

TEST_F(EvaluateTest, CalendarFunctions) {
  // 1995-01-25T15:00:00Z
  Schema s({{"Time", DataType::kInteger, {}}});
  Tuple row = {I(791046000)};
  EXPECT_EQ(Evaluate(*Call("day", {Col("Time")}), row, s, registry_),
            T("1995-01-25"));
  EXPECT_EQ(Evaluate(*Call("month", {Col("Time")}), row, s, registry_), I(1));
  EXPECT_EQ(Evaluate(*Call("year", {Col("Time")}), row, s, registry_), I(1995));
}

TEST_F(EvaluateTest, EvaluationIsPure) {
  auto e = Binary(BinaryOp::kAdd, Col("Units"), Col("Year"));
  BoundExpr bound = Bind(e, schema_, registry_);
  Value first = bound.Evaluate(chevy_);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(bound.Evaluate(chevy_), first);
  EXPECT_EQ(chevy_[3], I(50));
}

TEST(ExpressionTest, SqlTextAndEquivalence) {
  auto e = Binary(BinaryOp::kAnd,
                  Binary(BinaryOp::kEq, Col("Model"), Lit(T("Chevy's"))),
                  Unary(UnaryOp::kNot, Col("select")));
  EXPECT_EQ(ToSql(e), "((Model = 'Chevy''s') AND (NOT \"select\"))");
  EXPECT_TRUE(SameExpr(Col("MODEL"), Col("model"), true));
  EXPECT_FALSE(SameExpr(Col("MODEL"), Col("model"), false));
  EXPECT_EQ(ToSql(Lit(Value::Real(2.0))), "2.0");
}

}  // namespace
}  // namespace datacube
