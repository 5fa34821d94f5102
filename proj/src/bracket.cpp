#include "castbridge/bracket.hpp"

#include <fmt/format.h>

#include <tuple>
#include <vector>

namespace castbridge::bracket {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::pair<int, int> line_column(std::string_view text, std::size_t pos) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

class Reader {
 public:
  Reader(std::string_view text, const LabelSet& labels) : text_(text), labels_(labels) {}

  Tree document() {
    check_balance();
    skip_space();
    if (pos_ >= text_.size()) throw BracketError(ErrorKind::EmptyDocument, pos_, text_);
    if (!at_open()) throw BracketError(ErrorKind::UnexpectedText, pos_, text_);
    Tree root = node();
    skip_space();
    if (pos_ < text_.size()) throw BracketError(ErrorKind::TrailingContent, pos_, text_);
    return root;
  }

 private:
  bool at_open() const { return pos_ < text_.size() && text_[pos_] == '[' && is_structural(text_, pos_); }
  bool at_close() const { return pos_ < text_.size() && text_[pos_] == ']' && is_structural(text_, pos_); }
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  void check_balance() const {
    std::vector<std::size_t> opens;
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if ((text_[i] != '[' && text_[i] != ']') || !is_structural(text_, i)) continue;
      if (text_[i] == '[') {
        opens.push_back(i);
      } else if (opens.empty()) {
        throw BracketError(ErrorKind::UnbalancedBrackets, i, text_);
      } else {
        opens.pop_back();
      }
    }
    if (!opens.empty()) throw BracketError(ErrorKind::UnbalancedBrackets, opens.back(), text_);
  }

  // Precondition: at a structural '['.
  Tree node() {
    ++pos_;
    skip_space();
    std::size_t token_start = pos_;
    std::size_t token_end = token_start;
    while (token_end < text_.size() && !is_space(text_[token_end])) ++token_end;
    std::string_view token = text_.substr(token_start, token_end - token_start);

    std::size_t after = token_end;
    while (after < text_.size() && is_space(text_[after])) ++after;
    bool next_is_open = after < text_.size() && text_[after] == '[' && is_structural(text_, after);
    bool next_is_close = after < text_.size() && text_[after] == ']' && is_structural(text_, after);
    bool token_is_bracket = token.size() == 1 && (token[0] == '[' || token[0] == ']') &&
                            is_structural(text_, token_start);

    if (!token_is_bracket && !token.empty() && labels_.contains(token) &&
        (next_is_open || (next_is_close && labels_.options().allow_empty_structures))) {
      Tree tree = Tree::node(std::string(token));
      pos_ = after;
      while (true) {
        skip_space();
        if (at_close()) {
          ++pos_;
          return tree;
        }
        if (!at_open()) throw BracketError(ErrorKind::UnexpectedText, pos_, text_);
        tree.children.push_back(node());
      }
    }

    // Leaf: everything up to the matching structural ']'.
    std::size_t start = pos_;
    int depth = 0;
    while (true) {
      if (pos_ >= text_.size()) throw BracketError(ErrorKind::UnbalancedBrackets, start, text_);
      if (at_open()) {
        ++depth;
      } else if (at_close()) {
        if (depth == 0) break;
        --depth;
      }
      ++pos_;
    }
    Tree leaf = Tree::leaf(collapse_whitespace(text_.substr(start, pos_ - start)));
    ++pos_;
    return leaf;
  }

  std::string_view text_;
  const LabelSet& labels_;
  std::size_t pos_ = 0;
};

void write_compact(const Tree& t, std::string& out) {
  out += "[ ";
  out += t.text;
  if (t.is_leaf()) {
    if (!t.text.empty()) out += ' ';
    out += ']';
    return;
  }
  for (const auto& c : t.children) {
    out += ' ';
    write_compact(c, out);
  }
  out += " ]";
}

void write_pretty(const Tree& t, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  if (t.is_leaf() || t.children.empty()) {
    out += pad;
    write_compact(t, out);
    out += '\n';
    return;
  }
  out += pad + "[ " + t.text + "\n";
  for (const auto& c : t.children) write_pretty(c, depth + 1, out);
  out += pad + "]\n";
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnbalancedBrackets: return "UnbalancedBrackets";
    case ErrorKind::TrailingContent: return "TrailingContent";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::UnexpectedText: return "UnexpectedText";
  }
  return "Unknown";
}

BracketError::BracketError(ErrorKind kind, std::size_t position, std::string_view text)
    : Error(fmt::format("{} at {}:{} (offset {})", to_string(kind), line_column(text, position).first,
                        line_column(text, position).second, position)),
      kind_(kind),
      position_(position) {
  std::tie(line_, column_) = line_column(text, position);
}

LabelSet::LabelSet(std::set<std::string> labels, Options options)
    : labels_(labels.begin(), labels.end()), options_(options) {}

bool LabelSet::contains(std::string_view label) const {
  if (labels_.count(label)) return true;
  if (options_.accept_conj_suffix && label.size() > 5 && label.substr(label.size() - 5) == "_conj") {
    label.remove_suffix(5);
    if (labels_.count(label)) return true;
  }
  if (options_.accept_subtypes) {
    auto colon = label.find(':');
    if (colon != std::string_view::npos && colon > 0 && colon + 1 < label.size())
      return labels_.count(label.substr(0, colon)) > 0;
  }
  return false;
}

bool is_structural(std::string_view text, std::size_t pos) {
  bool before = pos == 0 || is_space(text[pos - 1]);
  bool after = pos + 1 >= text.size() || is_space(text[pos + 1]);
  return before && after;
}

std::string linearize(const Tree& tree, Style style) {
  std::string out;
  if (style == Style::Compact) {
    write_compact(tree, out);
  } else {
    write_pretty(tree, 0, out);
    out.pop_back();
  }
  return out;
}

Tree parse_bracket(std::string_view text, const LabelSet& labels) {
  return Reader(text, labels).document();
}

}  // namespace castbridge::bracket
