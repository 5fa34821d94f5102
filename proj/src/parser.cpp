#include <fmt/format.h>

#include <optional>
#include <utility>

#include "castbridge/syntax.hpp"
#include "lexer.hpp"

namespace castbridge::syntax {

SyntaxError::SyntaxError(std::string message, int line, int column)
    : Error(fmt::format("syntax error at {}:{}: {}", line, column, message)),
      message_(std::move(message)),
      line_(line),
      column_(column) {}

UnsupportedConstruct::UnsupportedConstruct(std::string construct, int line, int column)
    : Error(fmt::format("unsupported construct at {}:{}: {}", line, column, construct)),
      construct_(std::move(construct)),
      line_(line),
      column_(column) {}

namespace {

using detail::Tok;
using detail::Token;

struct UnsupportedKeyword {
  std::string_view keyword;
  std::string_view construct;
};

constexpr UnsupportedKeyword kUnsupportedStatements[] = {
    {"def", "function definition"},   {"class", "class definition"},
    {"import", "import statement"},   {"from", "import statement"},
    {"return", "return statement"},   {"try", "try statement"},
    {"with", "with statement"},       {"pass", "pass statement"},
    {"break", "break statement"},     {"continue", "continue statement"},
    {"del", "del statement"},         {"global", "global statement"},
    {"nonlocal", "nonlocal statement"}, {"raise", "raise statement"},
    {"assert", "assert statement"},   {"async", "async statement"},
    {"yield", "yield expression"},    {"await", "await expression"},
    {"lambda", "lambda expression"},
};

std::optional<std::string_view> unsupported_keyword(std::string_view word) {
  for (const auto& entry : kUnsupportedStatements)
    if (entry.keyword == word) return entry.construct;
  return std::nullopt;
}

bool assignable(const Expr& e) {
  if (e.is<Name>() || e.is<Attribute>() || e.is<Subscript>()) return true;
  if (e.is<TupleLit>()) {
    for (const auto& x : e.as<TupleLit>().elts)
      if (!assignable(x)) return false;
    return true;
  }
  if (e.is<ListLit>()) {
    for (const auto& x : e.as<ListLit>().elts)
      if (!assignable(x)) return false;
    return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program program() {
    Program p;
    while (!at(Tok::End)) {
      if (at(Tok::Indent)) fail("unexpected indent");
      p.body.push_back(statement());
    }
    return p;
  }

  /// Parses an expression list spanning the whole input.
  Expr lone_expression() {
    if (at(Tok::Indent)) fail("unexpected indent");
    if (at(Tok::End) || at(Tok::Newline)) fail("expected an expression");
    if (at(Tok::Name)) {
      const auto& w = cur().text;
      if (w == "if" || w == "for" || w == "while" || w == "elif" || w == "else" ||
          (unsupported_keyword(w) && w != "lambda" && w != "yield" && w != "await"))
        throw KindMismatch("expected an expression, found a '" + w + "' statement");
    }
    Expr e = testlist();
    if (at_op("=") || at_op("+=") || at_op(":") || is_augmented_op())
      throw KindMismatch("expected an expression, found an assignment statement");
    expect_end_of_line();
    if (!at(Tok::End)) {
      if (at(Tok::Indent)) fail("unexpected indent");
      throw KindMismatch("expected a single expression, found several statements");
    }
    return e;
  }

 private:
  // --- token helpers ---------------------------------------------------
  const Token& cur() const { return toks_[i_]; }
  const Token& peek_tok(std::size_t ahead) const {
    return toks_[std::min(i_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_op(std::string_view op) const { return cur().kind == Tok::Op && cur().text == op; }
  bool at_kw(std::string_view kw) const { return cur().kind == Tok::Name && cur().text == kw; }
  Token take() { return toks_[i_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, cur().line, cur().column);
  }
  [[noreturn]] void unsupported(const std::string& what) const {
    throw UnsupportedConstruct(what, cur().line, cur().column);
  }
  std::string describe() const {
    switch (cur().kind) {
      case Tok::Newline: return "end of line";
      case Tok::Indent: return "indent";
      case Tok::Dedent: return "dedent";
      case Tok::End: return "end of input";
      default: return "'" + cur().text + "'";
    }
  }
  void expect_op(std::string_view op) {
    if (!at_op(op)) fail(fmt::format("expected '{}', found {}", op, describe()));
    ++i_;
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail(fmt::format("expected '{}', found {}", kw, describe()));
    ++i_;
  }
  bool is_augmented_op() const {
    static constexpr std::string_view ops[] = {"-=", "*=", "/=", "//=", "%=", "**=",
                                               ">>=", "<<=", "&=", "|=", "^=", "@="};
    for (auto op : ops)
      if (at_op(op)) return true;
    return false;
  }
  void expect_end_of_line() {
    if (at_op(";")) unsupported("semicolon-separated statements");
    if (!at(Tok::Newline)) fail("expected end of line, found " + describe());
    ++i_;
  }

  // --- statements --------------------------------------------------------
  Stmt statement() {
    if (at(Tok::Name)) {
      const std::string& w = cur().text;
      if (w == "if") return if_statement();
      if (w == "for") return for_statement();
      if (w == "while") return while_statement();
      if (w == "elif" || w == "else") fail("'" + w + "' without a matching block");
      if (auto what = unsupported_keyword(w)) unsupported(std::string(*what));
    }
    if (at_op("@")) unsupported("decorator");
    Stmt s = simple_statement();
    expect_end_of_line();
    return s;
  }

  Stmt simple_statement() {
    int line = cur().line;
    int col = cur().column;
    Expr first = testlist();
    if (at_op(":")) {
      if (!(first.is<Name>() || first.is<Attribute>() || first.is<Subscript>()))
        throw SyntaxError("only single target can be annotated", line, col);
      ++i_;
      AnnAssign ann{std::move(first), test(), {}};
      if (at_op("=")) {
        ++i_;
        ann.value.push_back(testlist());
      }
      return Stmt{std::move(ann)};
    }
    if (at_op("+=")) {
      if (!(first.is<Name>() || first.is<Attribute>() || first.is<Subscript>()))
        throw SyntaxError("illegal expression for augmented assignment", line, col);
      ++i_;
      return Stmt{AugAssign{std::move(first), testlist()}};
    }
    if (is_augmented_op()) unsupported("augmented assignment '" + cur().text + "'");
    if (!at_op("=")) return Stmt{ExprStmt{std::move(first)}};

    std::vector<Expr> chain;
    chain.push_back(std::move(first));
    while (at_op("=")) {
      ++i_;
      line = cur().line;
      col = cur().column;
      chain.push_back(testlist());
    }
    Expr value = std::move(chain.back());
    chain.pop_back();
    for (const auto& t : chain)
      if (!assignable(t)) throw SyntaxError("cannot assign to expression", line, col);
    return Stmt{Assign{std::move(chain), std::move(value)}};
  }

  std::vector<Stmt> suite() {
    expect_op(":");
    std::vector<Stmt> body;
    if (!at(Tok::Newline)) {
      if (at_kw("if") || at_kw("for") || at_kw("while")) fail("compound statement on the same line");
      body.push_back(statement());
      return body;
    }
    ++i_;
    if (!at(Tok::Indent)) fail("expected an indented block");
    ++i_;
    while (!at(Tok::Dedent) && !at(Tok::End)) body.push_back(statement());
    if (at(Tok::Dedent)) ++i_;
    return body;
  }

  std::vector<Stmt> else_suite() {
    if (!at_kw("else")) return {};
    ++i_;
    return suite();
  }

  Stmt if_statement() {
    ++i_;  // 'if' or 'elif'
    Expr cond = test();
    std::vector<Stmt> body = suite();
    std::vector<Stmt> orelse;
    if (at_kw("elif")) {
      orelse.push_back(if_statement());
    } else {
      orelse = else_suite();
    }
    return Stmt{If{std::move(cond), std::move(body), std::move(orelse)}};
  }

  Stmt while_statement() {
    ++i_;
    Expr cond = test();
    std::vector<Stmt> body = suite();
    std::vector<Stmt> orelse = else_suite();
    return Stmt{While{std::move(cond), std::move(body), std::move(orelse)}};
  }

  Stmt for_statement() {
    ++i_;
    int line = cur().line;
    int col = cur().column;
    Expr target = target_list();
    if (!assignable(target)) throw SyntaxError("cannot assign to expression in for target", line, col);
    expect_kw("in");
    Expr iterable = testlist();
    std::vector<Stmt> body = suite();
    std::vector<Stmt> orelse = else_suite();
    return Stmt{For{std::move(target), std::move(iterable), std::move(body), std::move(orelse)}};
  }

  Expr target_list() {
    Expr first = arith();
    if (!at_op(",")) return first;
    std::vector<Expr> elts;
    elts.push_back(std::move(first));
    while (at_op(",")) {
      ++i_;
      if (at_kw("in")) break;
      elts.push_back(arith());
    }
    return Expr{TupleLit{std::move(elts)}};
  }

  // --- expressions -------------------------------------------------------
  bool starts_expression() const {
    if (at(Tok::Name)) return !detail::is_keyword(cur().text) || at_kw("not") || at_kw("True") ||
                               at_kw("False") || at_kw("None") || at_kw("lambda");
    if (at(Tok::Number) || at(Tok::String)) return true;
    return at_op("(") || at_op("[") || at_op("{") || at_op("-") || at_op("+") || at_op("~") ||
           at_op("*");
  }

  Expr testlist() {
    Expr first = test();
    if (!at_op(",")) return first;
    std::vector<Expr> elts;
    elts.push_back(std::move(first));
    while (at_op(",")) {
      ++i_;
      if (!starts_expression()) break;
      elts.push_back(test());
    }
    return Expr{TupleLit{std::move(elts)}};
  }

  Expr test() {
    if (at_kw("lambda")) unsupported("lambda expression");
    Expr e = or_test();
    if (at_kw("if")) unsupported("conditional expression");
    if (at_op(":=")) unsupported("assignment expression");
    return e;
  }

  Expr or_test() {
    Expr first = and_test();
    if (!at_kw("or")) return first;
    std::vector<Expr> values;
    values.push_back(std::move(first));
    while (at_kw("or")) {
      ++i_;
      values.push_back(and_test());
    }
    return Expr{BoolOp{BoolOpKind::Or, std::move(values)}};
  }

  Expr and_test() {
    Expr first = not_test();
    if (!at_kw("and")) return first;
    std::vector<Expr> values;
    values.push_back(std::move(first));
    while (at_kw("and")) {
      ++i_;
      values.push_back(not_test());
    }
    return Expr{BoolOp{BoolOpKind::And, std::move(values)}};
  }

  Expr not_test() {
    if (at_kw("not")) {
      ++i_;
      return Expr{UnaryOp{UnaryOpKind::Not, not_test()}};
    }
    return comparison();
  }

  std::optional<CmpOp> comparison_operator() {
    if (at(Tok::Op)) {
      const auto& t = cur().text;
      std::optional<CmpOp> op;
      if (t == "==") op = CmpOp::Eq;
      else if (t == "!=") op = CmpOp::NotEq;
      else if (t == "<") op = CmpOp::Lt;
      else if (t == "<=") op = CmpOp::LtE;
      else if (t == ">") op = CmpOp::Gt;
      else if (t == ">=") op = CmpOp::GtE;
      if (op) ++i_;
      return op;
    }
    if (at_kw("in")) {
      ++i_;
      return CmpOp::In;
    }
    if (at_kw("not") && peek_tok(1).kind == Tok::Name && peek_tok(1).text == "in") {
      i_ += 2;
      return CmpOp::NotIn;
    }
    if (at_kw("is")) unsupported("identity comparison");
    return std::nullopt;
  }

  Expr comparison() {
    Expr left = arith();
    std::vector<CmpOp> ops;
    std::vector<Expr> comparators;
    while (auto op = comparison_operator()) {
      ops.push_back(*op);
      comparators.push_back(arith());
    }
    if (ops.empty()) return left;
    return Expr{Compare{std::move(left), std::move(ops), std::move(comparators)}};
  }

  void reject_bitwise() const {
    if (at_op("|") || at_op("&") || at_op("^") || at_op("<<") || at_op(">>"))
      unsupported("bitwise operator '" + cur().text + "'");
  }

  Expr arith() {
    Expr left = term();
    while (at_op("+") || at_op("-")) {
      BinOpKind op = take().text == "+" ? BinOpKind::Add : BinOpKind::Sub;
      left = Expr{BinOp{std::move(left), op, term()}};
    }
    reject_bitwise();
    return left;
  }

  Expr term() {
    Expr left = factor();
    while (true) {
      if (at_op("%") || at_op("//") || at_op("@")) unsupported("operator '" + cur().text + "'");
      if (!at_op("*") && !at_op("/")) break;
      BinOpKind op = take().text == "*" ? BinOpKind::Mult : BinOpKind::Div;
      left = Expr{BinOp{std::move(left), op, factor()}};
    }
    return left;
  }

  Expr factor() {
    if (at_op("-")) {
      ++i_;
      return Expr{UnaryOp{UnaryOpKind::Neg, factor()}};
    }
    if (at_op("+")) unsupported("unary plus");
    if (at_op("~")) unsupported("bitwise inversion");
    Expr e = postfix();
    if (at_op("**")) unsupported("power operator");
    return e;
  }

  Expr postfix() {
    Expr e = atom();
    while (true) {
      if (at_op(".")) {
        ++i_;
        if (!at(Tok::Name) || detail::is_keyword(cur().text)) fail("expected attribute name");
        e = Expr{Attribute{std::move(e), take().text}};
      } else if (at_op("(")) {
        ++i_;
        e = call_arguments(std::move(e));
      } else if (at_op("[")) {
        ++i_;
        Expr index = subscript_index();
        expect_op("]");
        e = Expr{Subscript{std::move(e), std::move(index)}};
      } else {
        return e;
      }
    }
  }

  Expr subscript_index() {
    if (at_op(":")) unsupported("slice");
    Expr first = test();
    if (at_op(":")) unsupported("slice");
    if (!at_op(",")) return first;
    std::vector<Expr> elts;
    elts.push_back(std::move(first));
    while (at_op(",")) {
      ++i_;
      if (at_op("]")) break;
      elts.push_back(test());
    }
    return Expr{TupleLit{std::move(elts)}};
  }

  Expr call_arguments(Expr func) {
    Call call{std::move(func), {}, {}};
    while (!at_op(")")) {
      if (at_op("*") || at_op("**")) unsupported("argument unpacking");
      if (at(Tok::Name) && peek_tok(1).kind == Tok::Op && peek_tok(1).text == "=") {
        if (detail::is_keyword(cur().text)) fail("keyword argument name is a reserved word");
        std::string kw = take().text;
        ++i_;  // '='
        call.keywords.push_back(Keyword{std::move(kw), test()});
      } else {
        if (!call.keywords.empty()) fail("positional argument follows keyword argument");
        call.args.push_back(test());
      }
      if (at_kw("for")) unsupported("comprehension");
      if (!at_op(",")) break;
      ++i_;
    }
    expect_op(")");
    return Expr{std::move(call)};
  }

  std::vector<Expr> bracketed_elements(std::string_view close) {
    std::vector<Expr> elts;
    while (!at_op(close)) {
      if (at_op("*")) unsupported("starred expression");
      elts.push_back(test());
      if (at_kw("for")) unsupported("comprehension");
      if (!at_op(",")) break;
      ++i_;
    }
    expect_op(close);
    return elts;
  }

  Expr atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Name: {
        if (t.text == "True" || t.text == "False") {
          ++i_;
          return Expr{Constant{ConstKind::Boolean, t.text}};
        }
        if (t.text == "None") {
          ++i_;
          return Expr{Constant{ConstKind::None, "None"}};
        }
        if (detail::is_keyword(t.text)) {
          if (auto what = unsupported_keyword(t.text)) unsupported(std::string(*what));
          fail("unexpected keyword '" + t.text + "'");
        }
        return Expr{Name{take().text}};
      }
      case Tok::Number: {
        std::string lexeme = take().text;
        bool is_int = lexeme.find_first_of(".eE") == std::string::npos;
        return Expr{Constant{is_int ? ConstKind::Integer : ConstKind::Float, std::move(lexeme)}};
      }
      case Tok::String: {
        std::string value = take().text;
        while (at(Tok::String)) value += take().text;  // implicit concatenation
        return Expr{Constant{ConstKind::String, std::move(value)}};
      }
      case Tok::Op: {
        if (t.text == "(") {
          ++i_;
          if (at_op(")")) {
            ++i_;
            return Expr{TupleLit{}};
          }
          if (at_op("*")) unsupported("starred expression");
          if (at_kw("yield")) unsupported("yield expression");
          Expr first = test();
          if (at_kw("for")) unsupported("comprehension");
          if (at_op(")")) {
            ++i_;
            return first;
          }
          expect_op(",");
          std::vector<Expr> elts;
          elts.push_back(std::move(first));
          auto rest = bracketed_elements(")");
          for (auto& e : rest) elts.push_back(std::move(e));
          return Expr{TupleLit{std::move(elts)}};
        }
        if (t.text == "[") {
          ++i_;
          return Expr{ListLit{bracketed_elements("]")}};
        }
        if (t.text == "{") unsupported("dict or set literal");
        if (t.text == "...") unsupported("ellipsis");
        if (t.text == "*") unsupported("starred expression");
        fail("unexpected " + describe());
      }
      default:
        fail("unexpected " + describe());
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

bool is_assignment_target(const Expr& e) { return assignable(e); }

Program parse_program(std::string_view source) {
  return Parser(detail::tokenize(source)).program();
}

Stmt parse_statement(std::string_view text) {
  Program p = parse_program(text);
  if (p.body.empty()) throw SyntaxError("expected a statement", 1, 1);
  if (p.body.size() > 1) throw SyntaxError("expected a single statement", 1, 1);
  return std::move(p.body.front());
}

Expr parse_expression(std::string_view text) {
  return Parser(detail::tokenize(text)).lone_expression();
}

Fragment parse_fragment(std::string_view text, FragmentKind kind) {
  if (kind == FragmentKind::Statement) return parse_statement(text);
  return parse_expression(text);
}

}  // namespace castbridge::syntax
