#pragma once

// Bracket notation for labelled trees:
//
//   [ Module [ x = 1 ] [ For [ test [ iter [ xs ] ] [ Name [ x ] ] ] [ body [ f(x) ] ] ] ]
//
// Only a `[` or `]` with whitespace (or the text boundary) on both sides is
// structural; brackets glued to other characters, as in `xs[0]` or `[]`,
// belong to leaf text. After a structural `[`, a first token that is a known
// label and is followed by another structural `[` opens a structure; anything
// else up to the matching `]` is one leaf, with whitespace runs collapsed.

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "castbridge/error.hpp"
#include "castbridge/tree.hpp"

namespace castbridge::bracket {

enum class ErrorKind { UnbalancedBrackets, TrailingContent, EmptyDocument, UnexpectedText };

std::string_view to_string(ErrorKind kind);

class BracketError : public Error {
 public:
  BracketError(ErrorKind kind, std::size_t position, std::string_view text);
  ErrorKind kind() const { return kind_; }
  /// Byte offset into the parsed text.
  std::size_t position() const { return position_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ErrorKind kind_;
  std::size_t position_;
  int line_;
  int column_;
};

class LabelSet {
 public:
  struct Options {
    /// `[ Label ]` parses as an empty structure rather than a leaf.
    bool allow_empty_structures = false;
    /// `base:subtype` is accepted when `base` is a member.
    bool accept_subtypes = false;
    /// `label_conj` is accepted when `label` is a member.
    bool accept_conj_suffix = false;
  };

  LabelSet(std::set<std::string> labels, Options options);
  explicit LabelSet(std::set<std::string> labels) : LabelSet(std::move(labels), Options{}) {}

  bool contains(std::string_view label) const;
  const Options& options() const { return options_; }
  const std::set<std::string, std::less<>>& labels() const { return labels_; }

 private:
  std::set<std::string, std::less<>> labels_;
  Options options_;
};

enum class Style {
  Compact,  // single line, single spaces
  Pretty,   // one child per line, four-space indent, leaves inline
};

std::string linearize(const Tree& tree, Style style);

/// Parses exactly one bracket document. Throws BracketError.
Tree parse_bracket(std::string_view text, const LabelSet& labels);

/// True when the `[`/`]` at `pos` is whitespace-isolated.
bool is_structural(std::string_view text, std::size_t pos);

}  // namespace castbridge::bracket
