#pragma once

// Compact AST (cAST): the program's control-flow skeleton with every
// assignment, call and expression statement collapsed to its source text.
//
//   Module  := (leaf | If | For | While)*
//   For     := test(iter(expr-leaf) Name(target-leaf)) body orelse?
//   If      := test(expr-leaf) body orelse?
//   While   := test(expr-leaf) body orelse?
//   body    := (leaf | If | For | While)+        orelse likewise
//
// `elif` chains appear as an If nested directly inside orelse.

#include <string>

#include "castbridge/ast.hpp"
#include "castbridge/bracket.hpp"
#include "castbridge/error.hpp"
#include "castbridge/tree.hpp"

namespace castbridge::cast {

using CompactTree = Tree;

/// A tree that does not describe a program. `path` locates the offending
/// node as `/Module/1:For/0:test`, child index before each label.
class MalformedCast : public Error {
 public:
  MalformedCast(std::string path, std::string reason);
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

/// Module, If, For, While, test, body, orelse, iter, Name.
const bracket::LabelSet& labels();

CompactTree compactize(const syntax::Program& program);

/// Throws MalformedCast.
syntax::Program expand(const CompactTree& tree);

/// Shape check only; leaves are parsed as well. Throws MalformedCast.
void validate(const CompactTree& tree);

}  // namespace castbridge::cast
