#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace castbridge {

/// Labelled ordered tree shared by the cAST and the LIR serializations.
/// A structure node has a label and children; a leaf carries free text.
struct Tree {
  enum class Kind { Structure, Leaf };

  Kind kind = Kind::Leaf;
  std::string text;  // label for structures, content for leaves
  std::vector<Tree> children;

  static Tree leaf(std::string content) { return Tree{Kind::Leaf, std::move(content), {}}; }
  static Tree node(std::string label, std::vector<Tree> children = {}) {
    return Tree{Kind::Structure, std::move(label), std::move(children)};
  }

  bool is_leaf() const { return kind == Kind::Leaf; }
  bool is_structure() const { return kind == Kind::Structure; }
  bool is(std::string_view label) const { return kind == Kind::Structure && text == label; }

  bool operator==(const Tree&) const = default;
};

}  // namespace castbridge
