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

#include <cmath>
#include <limits>

#include "datacube/error.h"

namespace datacube {

struct BoundExpr::Node {
  enum class Kind { kColumn, kLiteral, kCall, kNot, kNegate, kBinary, kIn,
                    kBetween, kIsNull };
  Kind kind = Kind::kLiteral;
  std::size_t column = 0;
  Value literal;
  std::shared_ptr<const ScalarFunction> fn;
  BinaryOp op = BinaryOp::kEq;
  bool negated = false;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using Node = BoundExpr::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

// Three-valued logic: nullopt is "unknown".
using Tri = std::optional<bool>;

Tri ToTri(const Value& v) {
  if (v.kind() == ValueKind::kBoolean) return v.as_bool();
  return std::nullopt;
}

Value FromTri(Tri t) { return t ? Value::Bool(*t) : Value::Null(); }

bool IsComparison(BinaryOp op) {
  return op == BinaryOp::kEq || op == BinaryOp::kNe || op == BinaryOp::kLt ||
         op == BinaryOp::kLe || op == BinaryOp::kGt || op == BinaryOp::kGe;
}

bool IsArithmetic(BinaryOp op) {
  return op == BinaryOp::kAdd || op == BinaryOp::kSub ||
         op == BinaryOp::kMul || op == BinaryOp::kDiv;
}

Tri Compare(BinaryOp op, const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return std::nullopt;
  if (a.is_all() || b.is_all()) {
    if (op == BinaryOp::kEq) return a == b;
    if (op == BinaryOp::kNe) return !(a == b);
    return std::nullopt;
  }
  int c = CompareForSql(a, b);
  switch (op) {
    case BinaryOp::kEq: return c == 0;
    case BinaryOp::kNe: return c != 0;
    case BinaryOp::kLt: return c < 0;
    case BinaryOp::kLe: return c <= 0;
    case BinaryOp::kGt: return c > 0;
    case BinaryOp::kGe: return c >= 0;
    default: break;
  }
  return std::nullopt;
}

Value Arithmetic(BinaryOp op, const Value& a, const Value& b) {
  if (a.is_marker() || b.is_marker()) return Value::Null();
  if (!a.is_numeric() || !b.is_numeric()) {
    Fail(ErrorCode::kTypeMismatch, "arithmetic on non-numeric values");
  }
  if (op == BinaryOp::kDiv) {
    double d = b.as_number();
    if (d == 0.0) return Value::Null();
    return Value::Real(a.as_number() / d);
  }
  if (a.kind() == ValueKind::kInteger && b.kind() == ValueKind::kInteger) {
    std::int64_t out = 0;
    bool overflow = false;
    switch (op) {
      case BinaryOp::kAdd: overflow = __builtin_add_overflow(a.as_int(), b.as_int(), &out); break;
      case BinaryOp::kSub: overflow = __builtin_sub_overflow(a.as_int(), b.as_int(), &out); break;
      case BinaryOp::kMul: overflow = __builtin_mul_overflow(a.as_int(), b.as_int(), &out); break;
      default: break;
    }
    if (overflow) Fail(ErrorCode::kNumericOverflow, "integer overflow");
    return Value::Int(out);
  }
  double x = a.as_number(), y = b.as_number();
  switch (op) {
    case BinaryOp::kAdd: return Value::Real(x + y);
    case BinaryOp::kSub: return Value::Real(x - y);
    case BinaryOp::kMul: return Value::Real(x * y);
    default: break;
  }
  return Value::Null();
}

Value Eval(const Node& n, std::span<const Value> row) {
  switch (n.kind) {
    case Kind::kColumn: return row[n.column];
    case Kind::kLiteral: return n.literal;
    case Kind::kCall: {
      std::vector<Value> args;
      args.reserve(n.children.size());
      for (const NodePtr& c : n.children) {
        Value v = Eval(*c, row);
        if (v.is_all()) return Value::Null();
        if (v.is_null() && n.fn->strict) return Value::Null();
        args.push_back(std::move(v));
      }
      return n.fn->fn(args);
    }
    case Kind::kNot: {
      Tri t = ToTri(Eval(*n.children[0], row));
      return t ? Value::Bool(!*t) : Value::Null();
    }
    case Kind::kNegate: {
      Value v = Eval(*n.children[0], row);
      if (v.is_marker()) return Value::Null();
      if (v.kind() == ValueKind::kInteger) {
        if (v.as_int() == std::numeric_limits<std::int64_t>::min()) {
          Fail(ErrorCode::kNumericOverflow, "integer overflow");
        }
        return Value::Int(-v.as_int());
      }
      return Value::Real(-v.as_real());
    }
    case Kind::kBinary: {
      if (n.op == BinaryOp::kAnd || n.op == BinaryOp::kOr) {
        Tri l = ToTri(Eval(*n.children[0], row));
        bool is_and = n.op == BinaryOp::kAnd;
        // Short circuit on the absorbing element.
        if (l && *l != is_and) return Value::Bool(*l);
        Tri r = ToTri(Eval(*n.children[1], row));
        if (r && *r != is_and) return Value::Bool(*r);
        if (l && r) return Value::Bool(is_and);
        return Value::Null();
      }
      Value l = Eval(*n.children[0], row);
      Value r = Eval(*n.children[1], row);
      if (IsComparison(n.op)) return FromTri(Compare(n.op, l, r));
      return Arithmetic(n.op, l, r);
    }
    case Kind::kIn: {
      Value v = Eval(*n.children[0], row);
      if (v.is_null()) return Value::Null();
      bool unknown = false;
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        Tri eq = Compare(BinaryOp::kEq, v, Eval(*n.children[i], row));
        if (eq && *eq) return Value::Bool(!n.negated);
        if (!eq) unknown = true;
      }
      if (unknown) return Value::Null();
      return Value::Bool(n.negated);
    }
    case Kind::kBetween: {
      Value v = Eval(*n.children[0], row);
      Tri lo = Compare(BinaryOp::kGe, v, Eval(*n.children[1], row));
      Tri hi = Compare(BinaryOp::kLe, v, Eval(*n.children[2], row));
      Tri both;
      if ((lo && !*lo) || (hi && !*hi)) {
        both = false;
      } else if (lo && hi) {
        both = true;
      }
      if (!both) return Value::Null();
      return Value::Bool(n.negated ? !*both : *both);
    }
    case Kind::kIsNull: {
      bool is_null = Eval(*n.children[0], row).is_null();
      return Value::Bool(n.negated ? !is_null : is_null);
    }
  }
  return Value::Null();
}

using Typed = std::pair<NodePtr, std::optional<DataType>>;

bool Comparable(DataType a, DataType b) {
  if (IsNumeric(a) && IsNumeric(b)) return true;
  return a == b;
}

void RequireComparable(const std::optional<DataType>& a,
                       const std::optional<DataType>& b,
                       const std::string& context) {
  if (a && b && !Comparable(*a, *b)) {
    Fail(ErrorCode::kTypeMismatch,
         "cannot compare " + std::string(DataTypeName(*a)) + " with " +
             std::string(DataTypeName(*b)) + " in " + context);
  }
}

void RequireBoolean(const std::optional<DataType>& t,
                    const std::string& context) {
  if (t && *t != DataType::kBoolean) {
    Fail(ErrorCode::kTypeMismatch, context + " requires a BOOLEAN operand");
  }
}

void RequireNumeric(const std::optional<DataType>& t,
                    const std::string& context) {
  if (t && !IsNumeric(*t)) {
    Fail(ErrorCode::kTypeMismatch, context + " requires a numeric operand");
  }
}

Typed BindNode(const Expr& e, const Schema& schema,
               const ScalarRegistry& registry) {
  auto node = std::make_shared<Node>();
  std::optional<DataType> type;
  auto bind_child = [&](const ExprPtr& c) {
    Typed t = BindNode(*c, schema, registry);
    node->children.push_back(t.first);
    return t.second;
  };

  if (auto* c = e.As<ColumnRef>()) {
    node->kind = Kind::kColumn;
    node->column = schema.IndexOf(c->name, c->qualifier);
    type = schema[node->column].type;
  } else if (auto* l = e.As<Literal>()) {
    node->kind = Kind::kLiteral;
    node->literal = l->value;
    if (!l->value.is_marker()) type = TypeOf(l->value);
  } else if (auto* f = e.As<FunctionCall>()) {
    const ScalarFunction* fn = registry.Find(f->name);
    if (fn == nullptr) {
      Fail(ErrorCode::kUnknownFunction, "no scalar function named " + f->name);
    }
    if (f->star || f->distinct) {
      Fail(ErrorCode::kInvalidArgument,
           "* and DISTINCT are only valid in aggregate calls, not " + f->name);
    }
    if (f->args.size() < fn->min_arity || f->args.size() > fn->max_arity) {
      Fail(ErrorCode::kArityMismatch,
           f->name + "() takes " + std::to_string(fn->min_arity) +
               (fn->min_arity == fn->max_arity
                    ? ""
                    : ".." + std::to_string(fn->max_arity)) +
               " arguments, got " + std::to_string(f->args.size()));
    }
    node->kind = Kind::kCall;
    node->fn = std::make_shared<const ScalarFunction>(*fn);
    std::vector<DataType> arg_types;
    bool all_known = true;
    for (const ExprPtr& a : f->args) {
      auto t = bind_child(a);
      if (t) {
        arg_types.push_back(*t);
      } else {
        all_known = false;
      }
    }
    if (all_known) type = fn->result_type(arg_types);
  } else if (auto* u = e.As<UnaryExpr>()) {
    auto t = bind_child(u->operand);
    if (u->op == UnaryOp::kNot) {
      node->kind = Kind::kNot;
      RequireBoolean(t, "NOT");
      type = DataType::kBoolean;
    } else {
      node->kind = Kind::kNegate;
      RequireNumeric(t, "unary minus");
      type = t;
    }
  } else if (auto* b = e.As<BinaryExpr>()) {
    node->kind = Kind::kBinary;
    node->op = b->op;
    auto lt = bind_child(b->lhs);
    auto rt = bind_child(b->rhs);
    std::string op(BinaryOpSql(b->op));
    if (IsComparison(b->op)) {
      RequireComparable(lt, rt, op);
      type = DataType::kBoolean;
    } else if (IsArithmetic(b->op)) {
      RequireNumeric(lt, op);
      RequireNumeric(rt, op);
      if (b->op == BinaryOp::kDiv || lt == DataType::kReal ||
          rt == DataType::kReal) {
        type = DataType::kReal;
      } else {
        type = DataType::kInteger;
      }
    } else {
      RequireBoolean(lt, op);
      RequireBoolean(rt, op);
      type = DataType::kBoolean;
    }
  } else if (auto* in = e.As<InListExpr>()) {
    node->kind = Kind::kIn;
    node->negated = in->negated;
    auto ot = bind_child(in->operand);
    for (const ExprPtr& item : in->items) {
      RequireComparable(ot, bind_child(item), "IN");
    }
    type = DataType::kBoolean;
  } else if (auto* bt = e.As<BetweenExpr>()) {
    node->kind = Kind::kBetween;
    node->negated = bt->negated;
    auto ot = bind_child(bt->operand);
    RequireComparable(ot, bind_child(bt->low), "BETWEEN");
    RequireComparable(ot, bind_child(bt->high), "BETWEEN");
    type = DataType::kBoolean;
  } else if (auto* n = e.As<IsNullExpr>()) {
    node->kind = Kind::kIsNull;
    node->negated = n->negated;
    bind_child(n->operand);
    type = DataType::kBoolean;
  }
  return {node, type};
}

}  // namespace

int CompareForSql(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) {
    if (a.kind() == ValueKind::kInteger && b.kind() == ValueKind::kInteger) {
      return a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
    }
    double x = a.as_number(), y = b.as_number();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.kind() != b.kind() || a.is_marker()) {
    Fail(ErrorCode::kTypeMismatch,
         "cannot compare " + a.ToString() + " with " + b.ToString());
  }
  return CompareTotal(a, b);
}

Value BoundExpr::Evaluate(std::span<const Value> row) const {
  if (!root_) return Value::Null();
  return Eval(*root_, row);
}

bool BoundExpr::Test(std::span<const Value> row) const {
  Value v = Evaluate(row);
  return v.kind() == ValueKind::kBoolean && v.as_bool();
}

BoundExpr Bind(const Expr& expr, const Schema& schema,
               const ScalarRegistry& registry) {
  Typed t = BindNode(expr, schema, registry);
  BoundExpr out;
  out.root_ = t.first;
  out.type_ = t.second;
  return out;
}

BoundExpr Bind(const ExprPtr& expr, const Schema& schema,
               const ScalarRegistry& registry) {
  return Bind(*expr, schema, registry);
}

Value Evaluate(const Expr& expr, const Tuple& row, const Schema& schema,
               const ScalarRegistry& registry) {
  return Bind(expr, schema, registry).Evaluate(row);
}

}  // namespace datacube
