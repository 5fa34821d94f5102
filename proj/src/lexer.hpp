#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace castbridge::syntax::detail {

enum class Tok { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
  Tok kind;
  std::string text;  // decoded value for strings, lexeme otherwise
  int line;
  int column;
};

/// Splits source into logical-line tokens with INDENT/DEDENT markers.
/// Newlines inside (), [] and {} are insignificant. Comments are dropped.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace castbridge::syntax::detail
