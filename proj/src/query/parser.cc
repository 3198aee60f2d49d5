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

#include "datacube/query/parser.h"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "datacube/error.h"
#include "datacube/model/relation.h"

namespace datacube {
namespace {

enum class Tok { kEnd, kIdent, kQuotedIdent, kInteger, kReal, kString, kSymbol };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // identifier spelling, literal payload or symbol
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;
  std::size_t end = 0;  // offset one past the last character
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      SkipSpace();
      Token t;
      t.line = line_;
      t.column = pos_ - line_start_ + 1;
      t.offset = pos_;
      if (pos_ >= text_.size()) {
        t.end = pos_;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
          ++pos_;
        }
        t.kind = Tok::kIdent;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        LexNumber(t);
      } else if (c == '\'') {
        t.kind = Tok::kString;
        t.text = Quoted('\'', t);
      } else if (c == '"') {
        t.kind = Tok::kQuotedIdent;
        t.text = Quoted('"', t);
        if (t.text.empty()) Error(t, "empty quoted identifier");
      } else {
        LexSymbol(t);
      }
      t.end = pos_;
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void Error(const Token& t, const std::string& what) {
    throw SyntaxError(t.line, t.column, {what}, Found());
  }

  std::string Found() const {
    if (pos_ >= text_.size()) return "end of input";
    return "'" + std::string(1, text_[pos_]) + "'";
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void SkipSpace() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (c == '-' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  void LexNumber(Token& t) {
    std::size_t start = pos_;
    bool real = false;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      real = true;
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        real = true;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      } else {
        pos_ = save;
      }
    }
    t.kind = real ? Tok::kReal : Tok::kInteger;
    t.text = std::string(text_.substr(start, pos_ - start));
  }

  std::string Quoted(char quote, const Token& t) {
    std::string out;
    ++pos_;
    while (true) {
      if (pos_ >= text_.size()) {
        Error(t, quote == '\'' ? "closing quote" : "closing double quote");
      }
      if (text_[pos_] == quote) {
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == quote) {
          out += quote;
          pos_ += 2;
          continue;
        }
        ++pos_;
        return out;
      }
      out += text_[pos_];
      Advance();
    }
  }

  void LexSymbol(Token& t) {
    static const char* kTwo[] = {"<>", "!=", "<=", ">="};
    for (const char* two : kTwo) {
      if (text_.substr(pos_, 2) == two) {
        t.kind = Tok::kSymbol;
        t.text = two;
        pos_ += 2;
        return;
      }
    }
    static const std::string kOne = ",(){}.;*+-/=<>";
    if (kOne.find(text_[pos_]) == std::string::npos) {
      throw SyntaxError(t.line, t.column, {"a token"}, Found());
    }
    t.kind = Tok::kSymbol;
    t.text = std::string(1, text_[pos_]);
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).Run()) {}

  Query ParseQueryToEnd() {
    Query q = ParseQuery();
    Accept(";");
    ExpectEnd();
    return q;
  }

  ExprPtr ParseExpressionToEnd() {
    ExprPtr e = ParseExpr();
    ExpectEnd();
    return e;
  }

 private:
  // ---- token helpers -----------------------------------------------------

  const Token& Peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  void Next() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
    expected_.clear();
  }

  bool IsKeyword(const Token& t, std::string_view kw) const {
    return t.kind == Tok::kIdent && EqualsIgnoreCase(t.text, kw);
  }

  bool PeekKeyword(std::string_view kw) {
    if (IsKeyword(Peek(), kw)) return true;
    expected_.insert(std::string(kw));
    return false;
  }

  bool AcceptKeyword(std::string_view kw) {
    if (!PeekKeyword(kw)) return false;
    Next();
    return true;
  }

  void ExpectKeyword(std::string_view kw) {
    if (!AcceptKeyword(kw)) Fail();
  }

  // Checks that do not add to the expected set, for the start of an
  // expression where "expression" alone is the useful report.
  bool IsSymbol(std::string_view s) const {
    return Peek().kind == Tok::kSymbol && Peek().text == s;
  }

  bool PeekSymbol(std::string_view s) {
    if (Peek().kind == Tok::kSymbol && Peek().text == s) return true;
    expected_.insert("'" + std::string(s) + "'");
    return false;
  }

  bool Accept(std::string_view s) {
    if (!PeekSymbol(s)) return false;
    Next();
    return true;
  }

  void Expect(std::string_view s) {
    if (!Accept(s)) Fail();
  }

  void ExpectEnd() {
    if (Peek().kind != Tok::kEnd) {
      expected_.insert("end of input");
      Fail();
    }
  }

  [[noreturn]] void Fail() {
    const Token& t = Peek();
    std::string found;
    switch (t.kind) {
      case Tok::kEnd: found = "end of input"; break;
      case Tok::kString: found = QuoteString(t.text); break;
      case Tok::kQuotedIdent: found = "\"" + t.text + "\""; break;
      default: found = "'" + t.text + "'"; break;
    }
    throw SyntaxError(t.line, t.column,
                      std::vector<std::string>(expected_.begin(),
                                               expected_.end()),
                      found);
  }

  bool PeekIdentifier() {
    const Token& t = Peek();
    if (t.kind == Tok::kQuotedIdent ||
        (t.kind == Tok::kIdent && !IsReservedWord(t.text))) {
      return true;
    }
    expected_.insert("identifier");
    return false;
  }

  std::string ExpectIdentifier() {
    if (!PeekIdentifier()) Fail();
    std::string name = Peek().text;
    Next();
    return name;
  }

  // ---- statements --------------------------------------------------------

  Query ParseQuery() {
    Query q;
    q.selects.push_back(ParseSelect());
    while (AcceptKeyword("UNION")) {
      q.union_all.push_back(AcceptKeyword("ALL"));
      q.selects.push_back(ParseSelect());
    }
    if (AcceptKeyword("ORDER")) {
      ExpectKeyword("BY");
      do {
        OrderItem item;
        item.expr = ParseExpr();
        if (AcceptKeyword("DESC")) {
          item.descending = true;
        } else {
          AcceptKeyword("ASC");
        }
        q.order_by.push_back(std::move(item));
      } while (Accept(","));
    }
    return q;
  }

  SelectStmt ParseSelect() {
    SelectStmt s;
    ExpectKeyword("SELECT");
    do {
      SelectItem item;
      item.expr = ParseExpr();
      if (AcceptKeyword("AS")) item.alias = ExpectIdentifier();
      s.items.push_back(std::move(item));
    } while (Accept(","));
    ExpectKeyword("FROM");
    s.from = ParseSource();
    if (AcceptKeyword("WHERE")) s.where = ParseExpr();
    if (AcceptKeyword("GROUP")) {
      ExpectKeyword("BY");
      s.grouping = ParseGrouping();
    }
    if (AcceptKeyword("HAVING")) s.having = ParseExpr();
    return s;
  }

  TableRef ParseSource() {
    TableRef ref;
    if (Accept("(")) {
      ref.subquery = std::make_shared<const Query>(ParseQuery());
      Expect(")");
    } else {
      ref.table = ExpectIdentifier();
    }
    ref.alias = ParseOptionalAlias();
    while (AcceptKeyword("JOIN")) {
      JoinClause join;
      join.table = ExpectIdentifier();
      join.alias = ParseOptionalAlias();
      ExpectKeyword("USING");
      Expect("(");
      do {
        join.using_columns.push_back(ExpectIdentifier());
      } while (Accept(","));
      Expect(")");
      ref.joins.push_back(std::move(join));
    }
    return ref;
  }

  std::string ParseOptionalAlias() {
    if (AcceptKeyword("AS")) return ExpectIdentifier();
    if (PeekIdentifier()) return ExpectIdentifier();
    return {};
  }

  bool AtListBreak() {
    return PeekKeyword("ROLLUP") || PeekKeyword("CUBE") ||
           PeekKeyword("WITH");
  }

  GroupByClause ParseGrouping() {
    GroupByClause g;
    g.present = true;
    bool any = false;
    if (!AtListBreak()) {
      g.group_by = ParseAggregationList();
      any = true;
      if (AcceptKeyword("WITH")) {
        // Older suffix form: the whole list is rolled up or cubed.
        if (AcceptKeyword("CUBE")) {
          g.cube = std::move(g.group_by);
        } else {
          ExpectKeyword("ROLLUP");
          g.rollup = std::move(g.group_by);
        }
        g.group_by.clear();
        return g;
      }
    }
    if (AcceptKeyword("ROLLUP")) {
      g.rollup = ParseAggregationList();
      any = true;
    }
    if (AcceptKeyword("CUBE")) {
      g.cube = ParseAggregationList();
      any = true;
    }
    if (!any) {
      expected_.insert("expression");
      Fail();
    }
    return g;
  }

  std::vector<AggregationItem> ParseAggregationList() {
    std::vector<AggregationItem> items;
    while (true) {
      AggregationItem item;
      item.expr = ParseExpr();
      if (AcceptKeyword("AS")) item.alias = ExpectIdentifier();
      if (AcceptKeyword("COLLATE")) item.collation = ExpectIdentifier();
      items.push_back(std::move(item));
      if (!PeekSymbol(",")) break;
      // A comma may also introduce the next list.
      const Token& after = Peek(1);
      if (IsKeyword(after, "ROLLUP") || IsKeyword(after, "CUBE")) {
        Next();
        break;
      }
      Next();
    }
    return items;
  }

  // ---- expressions -------------------------------------------------------

  ExprPtr ParseExpr() { return ParseOr(); }

  ExprPtr ParseOr() {
    ExprPtr lhs = ParseAnd();
    while (AcceptKeyword("OR")) lhs = Binary(BinaryOp::kOr, lhs, ParseAnd());
    return lhs;
  }

  ExprPtr ParseAnd() {
    ExprPtr lhs = ParseNot();
    while (AcceptKeyword("AND")) lhs = Binary(BinaryOp::kAnd, lhs, ParseNot());
    return lhs;
  }

  ExprPtr ParseNot() {
    if (IsKeyword(Peek(), "NOT")) {
      Next();
      return Unary(UnaryOp::kNot, ParseNot());
    }
    return ParsePredicate();
  }

  ExprPtr ParsePredicate() {
    ExprPtr lhs = ParseAdditive();
    static const std::pair<const char*, BinaryOp> kCompare[] = {
        {"=", BinaryOp::kEq},  {"<>", BinaryOp::kNe}, {"!=", BinaryOp::kNe},
        {"<=", BinaryOp::kLe}, {">=", BinaryOp::kGe}, {"<", BinaryOp::kLt},
        {">", BinaryOp::kGt}};
    for (const auto& [sym, op] : kCompare) {
      if (Accept(sym)) return Binary(op, lhs, ParseAdditive());
    }
    if (AcceptKeyword("IS")) {
      bool negated = AcceptKeyword("NOT");
      ExpectKeyword("NULL");
      return MakeExpr(Expr{IsNullExpr{lhs, negated}});
    }
    bool negated = false;
    if (IsKeyword(Peek(), "NOT") &&
        (IsKeyword(Peek(1), "IN") || IsKeyword(Peek(1), "BETWEEN"))) {
      Next();
      negated = true;
    }
    if (AcceptKeyword("IN")) {
      std::string close;
      if (Accept("(")) {
        close = ")";
      } else {
        Expect("{");
        close = "}";
      }
      InListExpr in{lhs, {}, negated};
      do {
        in.items.push_back(ParseExpr());
      } while (Accept(","));
      Expect(close);
      return MakeExpr(Expr{std::move(in)});
    }
    if (AcceptKeyword("BETWEEN")) {
      ExprPtr low = ParseAdditive();
      ExpectKeyword("AND");
      ExprPtr high = ParseAdditive();
      return MakeExpr(Expr{BetweenExpr{lhs, low, high, negated}});
    }
    return lhs;
  }

  ExprPtr ParseAdditive() {
    ExprPtr lhs = ParseMultiplicative();
    while (true) {
      if (Accept("+")) {
        lhs = Binary(BinaryOp::kAdd, lhs, ParseMultiplicative());
      } else if (Accept("-")) {
        lhs = Binary(BinaryOp::kSub, lhs, ParseMultiplicative());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr ParseMultiplicative() {
    ExprPtr lhs = ParseUnary();
    while (true) {
      if (Accept("*")) {
        lhs = Binary(BinaryOp::kMul, lhs, ParseUnary());
      } else if (Accept("/")) {
        lhs = Binary(BinaryOp::kDiv, lhs, ParseUnary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr ParseUnary() {
    if (IsSymbol("-")) {
      const Token& minus = Peek();
      const Token& next = Peek(1);
      // "-5" written without a gap is a negative literal; "- x" negates.
      if ((next.kind == Tok::kInteger || next.kind == Tok::kReal) &&
          next.offset == minus.end) {
        Next();
        return NumberLiteral("-");
      }
      Next();
      return Unary(UnaryOp::kNegate, ParseUnary());
    }
    if (IsSymbol("+")) Next();
    return ParsePrimary();
  }

  ExprPtr NumberLiteral(const std::string& sign) {
    const Token& t = Peek();
    std::string text = sign + t.text;
    if (t.kind == Tok::kInteger) {
      std::int64_t v = 0;
      auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec == std::errc() && ptr == text.data() + text.size()) {
        Next();
        return Lit(Value::Int(v));
      }
    }
    double d = std::stod(text);
    Next();
    return Lit(Value::Real(d));
  }

  ExprPtr ParsePrimary() {
    const Token& t = Peek();
    switch (t.kind) {
      case Tok::kInteger:
      case Tok::kReal:
        return NumberLiteral("");
      case Tok::kString: {
        ExprPtr e = Lit(Value::Text(t.text));
        Next();
        return e;
      }
      case Tok::kSymbol:
        if (IsSymbol("(")) {
          Next();
          ExprPtr e = ParseExpr();
          Expect(")");
          return e;
        }
        break;
      case Tok::kIdent: {
        static const std::pair<const char*, Value> kLiterals[] = {
            {"NULL", Value::Null()},
            {"ALL", Value::All()},
            {"TRUE", Value::Bool(true)},
            {"FALSE", Value::Bool(false)}};
        for (const auto& [kw, v] : kLiterals) {
          if (IsKeyword(t, kw)) {
            Next();
            return Lit(v);
          }
        }
        if (!IsReservedWord(t.text)) return ParseNameOrCall();
        break;
      }
      case Tok::kQuotedIdent:
        return ParseNameOrCall();
      case Tok::kEnd:
        break;
    }
    expected_.insert("expression");
    Fail();
  }

  ExprPtr ParseNameOrCall() {
    std::string name = ExpectIdentifier();
    if (Accept("(")) {
      FunctionCall call;
      call.name = std::move(name);
      if (Accept("*")) {
        call.star = true;
      } else if (!PeekSymbol(")")) {
        call.distinct = AcceptKeyword("DISTINCT");
        do {
          call.args.push_back(ParseExpr());
        } while (Accept(","));
      }
      Expect(")");
      return MakeExpr(Expr{std::move(call)});
    }
    if (Accept(".")) return Col(std::move(name), ExpectIdentifier());
    return Col(std::move(name));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> expected_;
};

}  // namespace

Query Parse(std::string_view text) { return Parser(text).ParseQueryToEnd(); }

ExprPtr ParseExpression(std::string_view text) {
  return Parser(text).ParseExpressionToEnd();
}

}  // namespace datacube
