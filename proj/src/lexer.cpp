#include "lexer.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>

#include "castbridge/syntax.hpp"

namespace castbridge::syntax::detail {
namespace {

constexpr std::string_view kKeywords[] = {
    "False", "None",   "True",    "and",      "as",     "assert", "async", "await", "break",
    "class", "continue", "def",   "del",      "elif",   "else",   "except", "finally", "for",
    "from",  "global", "if",      "import",   "in",     "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",    "while",  "with",  "yield"};

// Longest first so that maximal munch works by linear scan.
constexpr std::string_view kOperators[] = {
    "**=", "//=", ">>=", "<<=", "...", "==", "!=", "<=", ">=", "+=", "-=", "*=",
    "/=",  "%=",  "&=",  "|=",  "^=",  "@=", "->", ":=", "**", "//", "<<", ">>",
    "(",   ")",   "[",   "]",   "{",   "}",  ",",  ":",  ".",  ";",  "+",  "-",
    "*",   "/",   "%",   "<",   ">",   "=",  "@",  "&",  "|",  "^",  "~"};

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    if (src_.size() >= 3 && src_.substr(0, 3) == "\xEF\xBB\xBF")
      throw SyntaxError("byte-order mark is not allowed", 1, 1);
    indents_.push_back(0);
    bool at_line_start = true;
    while (pos_ < src_.size()) {
      if (at_line_start && depth_ == 0) {
        if (!handle_indentation()) continue;  // blank or comment-only line
        at_line_start = false;
      }
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\f') {
        ++pos_;
        ++col_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '\\' && peek(1) == '\n') {
        pos_ += 2;
        ++line_;
        col_ = 1;
      } else if (c == '\r' && peek(1) == '\n') {
        ++pos_;
        ++col_;
      } else if (c == '\n') {
        if (depth_ == 0) {
          emit(Tok::Newline, "", line_, col_);
          at_line_start = true;
        }
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (is_name_start(static_cast<unsigned char>(c))) {
        lex_name();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number();
      } else if (c == '\'' || c == '"') {
        lex_string();
      } else {
        lex_operator();
      }
    }
    if (!tokens_.empty() && tokens_.back().kind != Tok::Newline && tokens_.back().kind != Tok::Dedent)
      emit(Tok::Newline, "", line_, col_);
    if (depth_ > 0) throw SyntaxError("unexpected end of input inside brackets", line_, col_);
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(Tok::Dedent, "", line_, col_);
    }
    emit(Tok::End, "", line_, col_);
    return std::move(tokens_);
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  void advance() {
    ++pos_;
    ++col_;
  }
  void emit(Tok kind, std::string text, int line, int column) {
    tokens_.push_back(Token{kind, std::move(text), line, column});
  }

  // Returns false when the line carries no tokens.
  bool handle_indentation() {
    int width = 0;
    std::size_t p = pos_;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t')) {
      if (src_[p] == '\t') throw SyntaxError("tab indentation is not supported", line_, static_cast<int>(p - pos_) + 1);
      ++width;
      ++p;
    }
    if (p < src_.size() && src_[p] == '\r' && p + 1 < src_.size() && src_[p + 1] == '\n') ++p;
    if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#') {
      while (p < src_.size() && src_[p] != '\n') ++p;
      if (p < src_.size()) {
        ++line_;
        ++p;
      }
      pos_ = p;
      col_ = 1;
      return false;
    }
    col_ += static_cast<int>(p - pos_);
    pos_ = p;
    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(Tok::Indent, "", line_, 1);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(Tok::Dedent, "", line_, 1);
      }
      if (width != indents_.back())
        throw SyntaxError("unindent does not match any outer indentation level", line_, width + 1);
    }
    return true;
  }

  void lex_name() {
    int start_col = col_;
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_name_char(static_cast<unsigned char>(src_[pos_]))) advance();
    std::string word(src_.substr(start, pos_ - start));
    if (pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"') && word.size() <= 2 &&
        std::all_of(word.begin(), word.end(), [](char ch) {
          return std::string_view("rRbBfFuU").find(ch) != std::string_view::npos;
        })) {
      bool fstring = word.find_first_of("fF") != std::string::npos;
      throw UnsupportedConstruct(fstring ? "f-string" : "string prefix '" + word + "'", line_, start_col);
    }
    emit(Tok::Name, std::move(word), line_, start_col);
  }

  void lex_number() {
    int start_col = col_;
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
    };
    if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' || peek(1) == 'O' ||
                              peek(1) == 'b' || peek(1) == 'B'))
      throw UnsupportedConstruct("non-decimal integer literal", line_, start_col);
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save_pos = pos_;
      int save_col = col_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save_pos;
        col_ = save_col;
      }
    }
    if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J'))
      throw UnsupportedConstruct("complex literal", line_, start_col);
    if (pos_ < src_.size() && is_name_char(static_cast<unsigned char>(src_[pos_])))
      throw SyntaxError("invalid decimal literal", line_, start_col);
    std::string lexeme(src_.substr(start, pos_ - start));
    if (lexeme.back() == '_' || lexeme.find("__") != std::string::npos)
      throw SyntaxError("invalid decimal literal", line_, start_col);
    bool is_int = lexeme.find_first_of(".eE") == std::string::npos;
    if (is_int && lexeme.size() > 1 && lexeme[0] == '0' &&
        lexeme.find_first_not_of("0_") != std::string::npos)
      throw SyntaxError("leading zeros in decimal integer literals are not permitted", line_, start_col);
    emit(Tok::Number, std::move(lexeme), line_, start_col);
  }

  void lex_string() {
    int start_line = line_;
    int start_col = col_;
    char quote = src_[pos_];
    if (peek(1) == quote && peek(2) == quote)
      throw UnsupportedConstruct("triple-quoted string", line_, col_);
    advance();
    std::string value;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n')
        throw SyntaxError("unterminated string literal", start_line, start_col);
      char c = src_[pos_];
      if (c == quote) {
        advance();
        break;
      }
      if (c != '\\') {
        value += c;
        advance();
        continue;
      }
      char e = peek(1);
      switch (e) {
        case '\n':
          pos_ += 2;
          ++line_;
          col_ = 1;
          continue;
        case '\\': value += '\\'; break;
        case '\'': value += '\''; break;
        case '"': value += '"'; break;
        case 'n': value += '\n'; break;
        case 't': value += '\t'; break;
        case 'r': value += '\r'; break;
        case 'a': value += '\a'; break;
        case 'b': value += '\b'; break;
        case 'f': value += '\f'; break;
        case 'v': value += '\v'; break;
        case 'x':
        case 'u': {
          int count = e == 'x' ? 2 : 4;
          unsigned cp = 0;
          for (int i = 0; i < count; ++i) {
            int h = hex_value(peek(2 + static_cast<std::size_t>(i)));
            if (h < 0) throw SyntaxError("truncated \\" + std::string(1, e) + " escape", line_, col_);
            cp = cp * 16 + static_cast<unsigned>(h);
          }
          append_utf8(value, cp);
          pos_ += 2 + static_cast<std::size_t>(count);
          col_ += 2 + count;
          continue;
        }
        default:
          if (e >= '0' && e <= '7') {
            unsigned cp = 0;
            std::size_t n = 0;
            while (n < 3 && peek(1 + n) >= '0' && peek(1 + n) <= '7') {
              cp = cp * 8 + static_cast<unsigned>(peek(1 + n) - '0');
              ++n;
            }
            append_utf8(value, cp);
            pos_ += 1 + n;
            col_ += 1 + static_cast<int>(n);
            continue;
          }
          if (e == '\0' && pos_ + 1 >= src_.size())
            throw SyntaxError("unterminated string literal", start_line, start_col);
          value += '\\';  // unknown escapes are kept verbatim
          advance();
          continue;
      }
      pos_ += 2;
      col_ += 2;
    }
    emit(Tok::String, std::move(value), start_line, start_col);
  }

  void lex_operator() {
    std::string_view rest = src_.substr(pos_);
    for (std::string_view op : kOperators) {
      if (rest.substr(0, op.size()) == op) {
        if (op == "(" || op == "[" || op == "{") ++depth_;
        if (op == ")" || op == "]" || op == "}") {
          if (depth_ == 0) throw SyntaxError("unmatched '" + std::string(op) + "'", line_, col_);
          --depth_;
        }
        emit(Tok::Op, std::string(op), line_, col_);
        pos_ += op.size();
        col_ += static_cast<int>(op.size());
        return;
      }
    }
    throw SyntaxError("invalid character '" + std::string(1, src_[pos_]) + "'", line_, col_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords);
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace castbridge::syntax::detail
