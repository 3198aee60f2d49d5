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

#include "datacube/model/expression.h"

#include <array>
#include <cctype>

#include "datacube/model/relation.h"

namespace datacube {

ExprPtr MakeExpr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr Col(std::string name) {
  return MakeExpr(Expr{ColumnRef{"", std::move(name)}});
}

ExprPtr Col(std::string qualifier, std::string name) {
  return MakeExpr(Expr{ColumnRef{std::move(qualifier), std::move(name)}});
}

ExprPtr Lit(Value value) { return MakeExpr(Expr{Literal{std::move(value)}}); }

ExprPtr Call(std::string name, std::vector<ExprPtr> args) {
  return MakeExpr(Expr{FunctionCall{std::move(name), std::move(args)}});
}

ExprPtr Unary(UnaryOp op, ExprPtr operand) {
  return MakeExpr(Expr{UnaryExpr{op, std::move(operand)}});
}

ExprPtr Binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return MakeExpr(Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}});
}

namespace {

bool SameName(const std::string& a, const std::string& b, bool ignore_case) {
  return ignore_case ? EqualsIgnoreCase(a, b) : a == b;
}

bool SameList(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b,
              bool ignore_case) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!SameExpr(a[i], b[i], ignore_case)) return false;
  }
  return true;
}

}  // namespace

bool SameExpr(const ExprPtr& a, const ExprPtr& b, bool ignore_case) {
  if (!a || !b) return !a && !b;
  return SameExpr(*a, *b, ignore_case);
}

bool SameExpr(const Expr& a, const Expr& b, bool ignore_case) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* x = a.As<ColumnRef>()) {
    auto* y = b.As<ColumnRef>();
    return SameName(x->qualifier, y->qualifier, ignore_case) &&
           SameName(x->name, y->name, ignore_case);
  }
  if (auto* x = a.As<Literal>()) return x->value == b.As<Literal>()->value;
  if (auto* x = a.As<FunctionCall>()) {
    auto* y = b.As<FunctionCall>();
    return SameName(x->name, y->name, ignore_case) &&
           x->distinct == y->distinct && x->star == y->star &&
           SameList(x->args, y->args, ignore_case);
  }
  if (auto* x = a.As<UnaryExpr>()) {
    auto* y = b.As<UnaryExpr>();
    return x->op == y->op && SameExpr(x->operand, y->operand, ignore_case);
  }
  if (auto* x = a.As<BinaryExpr>()) {
    auto* y = b.As<BinaryExpr>();
    return x->op == y->op && SameExpr(x->lhs, y->lhs, ignore_case) &&
           SameExpr(x->rhs, y->rhs, ignore_case);
  }
  if (auto* x = a.As<InListExpr>()) {
    auto* y = b.As<InListExpr>();
    return x->negated == y->negated &&
           SameExpr(x->operand, y->operand, ignore_case) &&
           SameList(x->items, y->items, ignore_case);
  }
  if (auto* x = a.As<BetweenExpr>()) {
    auto* y = b.As<BetweenExpr>();
    return x->negated == y->negated &&
           SameExpr(x->operand, y->operand, ignore_case) &&
           SameExpr(x->low, y->low, ignore_case) &&
           SameExpr(x->high, y->high, ignore_case);
  }
  if (auto* x = a.As<IsNullExpr>()) {
    auto* y = b.As<IsNullExpr>();
    return x->negated == y->negated &&
           SameExpr(x->operand, y->operand, ignore_case);
  }
  return false;
}

namespace {

constexpr std::array<std::string_view, 29> kReserved = {
    "ALL",   "AND",     "AS",      "ASC",   "BETWEEN", "BY",    "COLLATE",
    "CUBE",  "DESC",    "DISTINCT", "FALSE", "FROM",    "GROUP", "HAVING",
    "IN",    "IS",      "JOIN",    "NOT",   "NULL",    "ON",    "OR",
    "ORDER", "ROLLUP",  "SELECT",  "TRUE",  "UNION",   "USING",   "WHERE",
    "WITH"};

std::string LiteralSql(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kNull: return "NULL";
    case ValueKind::kAll: return "ALL";
    case ValueKind::kBoolean: return v.as_bool() ? "TRUE" : "FALSE";
    case ValueKind::kInteger: return v.ToString();
    case ValueKind::kReal: {
      std::string s = v.ToString();
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
    case ValueKind::kText: return QuoteString(v.as_text());
  }
  return {};
}

}  // namespace

bool IsReservedWord(std::string_view word) {
  for (std::string_view r : kReserved) {
    if (EqualsIgnoreCase(r, word)) return true;
  }
  return false;
}

std::string QuoteIdentifierIfNeeded(const std::string& ident) {
  bool plain = !ident.empty() &&
               (std::isalpha(static_cast<unsigned char>(ident[0])) ||
                ident[0] == '_');
  for (char c : ident) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
  }
  if (plain && !IsReservedWord(ident)) return ident;
  std::string out = "\"";
  for (char c : ident) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string QuoteString(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

std::string_view BinaryOpSql(BinaryOp op) {
  switch (op) {
    case BinaryOp::kEq: return "=";
    case BinaryOp::kNe: return "<>";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kAnd: return "AND";
    case BinaryOp::kOr: return "OR";
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
  }
  return "?";
}

std::string ToSql(const ExprPtr& e) { return e ? ToSql(*e) : std::string(); }

std::string ToSql(const Expr& e) {
  if (auto* c = e.As<ColumnRef>()) {
    std::string out;
    if (!c->qualifier.empty()) out = QuoteIdentifierIfNeeded(c->qualifier) + ".";
    return out + QuoteIdentifierIfNeeded(c->name);
  }
  if (auto* l = e.As<Literal>()) return LiteralSql(l->value);
  if (auto* f = e.As<FunctionCall>()) {
    std::string out = QuoteIdentifierIfNeeded(f->name) + "(";
    if (f->star) return out + "*)";
    if (f->distinct) out += "DISTINCT ";
    for (std::size_t i = 0; i < f->args.size(); ++i) {
      if (i > 0) out += ", ";
      out += ToSql(f->args[i]);
    }
    return out + ")";
  }
  if (auto* u = e.As<UnaryExpr>()) {
    return std::string(u->op == UnaryOp::kNot ? "(NOT " : "(- ") +
           ToSql(u->operand) + ")";
  }
  if (auto* b = e.As<BinaryExpr>()) {
    return "(" + ToSql(b->lhs) + " " + std::string(BinaryOpSql(b->op)) + " " +
           ToSql(b->rhs) + ")";
  }
  if (auto* in = e.As<InListExpr>()) {
    std::string out = "(" + ToSql(in->operand) +
                      (in->negated ? " NOT IN (" : " IN (");
    for (std::size_t i = 0; i < in->items.size(); ++i) {
      if (i > 0) out += ", ";
      out += ToSql(in->items[i]);
    }
    return out + "))";
  }
  if (auto* bt = e.As<BetweenExpr>()) {
    return "(" + ToSql(bt->operand) +
           (bt->negated ? " NOT BETWEEN " : " BETWEEN ") + ToSql(bt->low) +
           " AND " + ToSql(bt->high) + ")";
  }
  if (auto* n = e.As<IsNullExpr>()) {
    return "(" + ToSql(n->operand) +
           (n->negated ? " IS NOT NULL)" : " IS NULL)");
  }
  return "?";
}

ExprPtr Rewrite(const ExprPtr& e,
                const std::function<ExprPtr(const ExprPtr&)>& fn) {
  if (!e) return e;
  if (ExprPtr r = fn(e)) return r;
  auto list = [&](const std::vector<ExprPtr>& in) {
    std::vector<ExprPtr> out;
    out.reserve(in.size());
    for (const ExprPtr& x : in) out.push_back(Rewrite(x, fn));
    return out;
  };
  Expr copy = *e;
  if (auto* f = std::get_if<FunctionCall>(&copy.node)) {
    f->args = list(f->args);
  } else if (auto* u = std::get_if<UnaryExpr>(&copy.node)) {
    u->operand = Rewrite(u->operand, fn);
  } else if (auto* b = std::get_if<BinaryExpr>(&copy.node)) {
    b->lhs = Rewrite(b->lhs, fn);
    b->rhs = Rewrite(b->rhs, fn);
  } else if (auto* in = std::get_if<InListExpr>(&copy.node)) {
    in->operand = Rewrite(in->operand, fn);
    in->items = list(in->items);
  } else if (auto* bt = std::get_if<BetweenExpr>(&copy.node)) {
    bt->operand = Rewrite(bt->operand, fn);
    bt->low = Rewrite(bt->low, fn);
    bt->high = Rewrite(bt->high, fn);
  } else if (auto* n = std::get_if<IsNullExpr>(&copy.node)) {
    n->operand = Rewrite(n->operand, fn);
  } else {
    return e;
  }
  return MakeExpr(std::move(copy));
}

void Visit(const ExprPtr& e, const std::function<bool(const Expr&)>& fn) {
  if (!e || !fn(*e)) return;
  if (auto* f = e->As<FunctionCall>()) {
    for (const ExprPtr& a : f->args) Visit(a, fn);
  } else if (auto* u = e->As<UnaryExpr>()) {
    Visit(u->operand, fn);
  } else if (auto* b = e->As<BinaryExpr>()) {
    Visit(b->lhs, fn);
    Visit(b->rhs, fn);
  } else if (auto* in = e->As<InListExpr>()) {
    Visit(in->operand, fn);
    for (const ExprPtr& a : in->items) Visit(a, fn);
  } else if (auto* bt = e->As<BetweenExpr>()) {
    Visit(bt->operand, fn);
    Visit(bt->low, fn);
    Visit(bt->high, fn);
  } else if (auto* n = e->As<IsNullExpr>()) {
    Visit(n->operand, fn);
  }
}

}  // namespace datacube
