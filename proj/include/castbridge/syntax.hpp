#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "castbridge/ast.hpp"
#include "castbridge/error.hpp"

namespace castbridge::syntax {

/// Malformed input. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, int line, int column);
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Valid Python that falls outside the subset (def, import, lambda, ...).
class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(std::string construct, int line, int column);
  const std::string& construct() const { return construct_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string construct_;
  int line_;
  int column_;
};

/// parse_fragment found a statement where an expression was requested, or
/// the reverse.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

enum class FragmentKind { Statement, Expression };

using Fragment = std::variant<Stmt, Expr>;

/// Parses a whole source file. Blocks are delimited by indentation; any
/// consistent indent width is accepted. Rejects a UTF-8 byte-order mark.
Program parse_program(std::string_view source);

/// Parses a single statement (which may be a compound statement) or a
/// single expression.
Fragment parse_fragment(std::string_view text, FragmentKind kind);
Stmt parse_statement(std::string_view text);
Expr parse_expression(std::string_view text);

/// Name, Attribute, Subscript, or a tuple/list of those.
bool is_assignment_target(const Expr& e);

/// Canonical rendering. Never emits a `[` or `]` with whitespace on both
/// sides, so the output is safe to embed in bracket notation.
std::string unparse(const Program& program);
std::string unparse(const Stmt& stmt);
std::string unparse(const Expr& expr);

}  // namespace castbridge::syntax
