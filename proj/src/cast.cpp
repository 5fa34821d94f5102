#include "castbridge/cast.hpp"

#include <fmt/format.h>

#include "castbridge/syntax.hpp"

namespace castbridge::cast {

MalformedCast::MalformedCast(std::string path, std::string reason)
    : Error(fmt::format("malformed cAST at {}: {}", path, reason)),
      path_(std::move(path)),
      reason_(std::move(reason)) {}

const bracket::LabelSet& labels() {
  static const bracket::LabelSet set(
      {"Module", "If", "For", "While", "test", "body", "orelse", "iter", "Name"});
  return set;
}

namespace {

using namespace castbridge::syntax;

Tree expr_group(std::string label, const Expr& e) {
  return Tree::node(std::move(label), {Tree::leaf(unparse(e))});
}

std::vector<Tree> compact_block(const std::vector<Stmt>& body);

Tree compact_stmt(const Stmt& s) {
  if (s.is<If>() || s.is<While>()) {
    const Expr& test = s.is<If>() ? s.as<If>().test : s.as<While>().test;
    const auto& body = s.is<If>() ? s.as<If>().body : s.as<While>().body;
    const auto& orelse = s.is<If>() ? s.as<If>().orelse : s.as<While>().orelse;
    Tree t = Tree::node(s.is<If>() ? "If" : "While");
    t.children.push_back(expr_group("test", test));
    t.children.push_back(Tree::node("body", compact_block(body)));
    if (!orelse.empty()) t.children.push_back(Tree::node("orelse", compact_block(orelse)));
    return t;
  }
  if (s.is<For>()) {
    const auto& f = s.as<For>();
    Tree t = Tree::node("For");
    t.children.push_back(Tree::node("test", {expr_group("iter", f.iter), expr_group("Name", f.target)}));
    t.children.push_back(Tree::node("body", compact_block(f.body)));
    if (!f.orelse.empty()) t.children.push_back(Tree::node("orelse", compact_block(f.orelse)));
    return t;
  }
  return Tree::leaf(unparse(s));
}

std::vector<Tree> compact_block(const std::vector<Stmt>& body) {
  std::vector<Tree> out;
  out.reserve(body.size());
  for (const auto& s : body) out.push_back(compact_stmt(s));
  return out;
}

class Expander {
 public:
  Program module(const Tree& t) {
    if (!t.is("Module")) fail("/", t.is_leaf() ? "document is a leaf, expected Module" : "expected Module, found " + t.text);
    return Program{block(t, "/Module")};
  }

 private:
  [[noreturn]] static void fail(const std::string& path, const std::string& reason) {
    throw MalformedCast(path, reason);
  }

  static std::string child_path(const std::string& parent, std::size_t i, const Tree& c) {
    return fmt::format("{}/{}:{}", parent, i, c.is_leaf() ? std::string("leaf") : c.text);
  }

  std::vector<Stmt> block(const Tree& group, const std::string& path) {
    std::vector<Stmt> out;
    for (std::size_t i = 0; i < group.children.size(); ++i) {
      const Tree& c = group.children[i];
      std::string p = child_path(path, i, c);
      if (c.is_leaf()) {
        out.push_back(leaf_statement(c, p));
      } else if (c.is("If") || c.is("While")) {
        out.push_back(conditional(c, p));
      } else if (c.is("For")) {
        out.push_back(loop(c, p));
      } else {
        fail(p, fmt::format("label '{}' cannot appear in a statement list", c.text));
      }
    }
    return out;
  }

  static Stmt leaf_statement(const Tree& leaf, const std::string& path) {
    if (leaf.text.empty()) fail(path, "empty leaf");
    Stmt s = [&] {
      try {
        return parse_statement(leaf.text);
      } catch (const Error& e) {
        fail(path, fmt::format("leaf '{}' is not a statement: {}", leaf.text, e.what()));
      }
    }();
    if (s.is<If>() || s.is<For>() || s.is<While>())
      fail(path, "control flow must be expressed as structure, not leaf text");
    return s;
  }

  static Expr leaf_expression(const Tree& group, const std::string& path) {
    if (group.children.size() != 1 || !group.children[0].is_leaf())
      fail(path, fmt::format("'{}' must hold exactly one expression leaf", group.text));
    const std::string& code = group.children[0].text;
    if (code.empty()) fail(path, "empty leaf");
    try {
      return parse_expression(code);
    } catch (const Error& e) {
      fail(path + "/0:leaf", fmt::format("leaf '{}' is not an expression: {}", code, e.what()));
    }
  }

  // Returns body and optional orelse, checking the trailing child layout.
  std::pair<std::vector<Stmt>, std::vector<Stmt>> suites(const Tree& t, const std::string& path) {
    if (t.children.size() < 2 || t.children.size() > 3)
      fail(path, fmt::format("{} needs test, body and an optional orelse", t.text));
    const Tree& body = t.children[1];
    std::string body_path = child_path(path, 1, body);
    if (!body.is("body")) fail(body_path, "expected body");
    if (body.children.empty()) fail(body_path, "body is empty");
    std::vector<Stmt> orelse;
    if (t.children.size() == 3) {
      const Tree& other = t.children[2];
      std::string other_path = child_path(path, 2, other);
      if (!other.is("orelse")) fail(other_path, "expected orelse");
      if (other.children.empty()) fail(other_path, "orelse is empty");
      orelse = block(other, other_path);
    }
    return {block(body, body_path), std::move(orelse)};
  }

  Stmt conditional(const Tree& t, const std::string& path) {
    if (t.children.empty() || !t.children[0].is("test")) fail(path, t.text + " is missing its test group");
    Expr test = leaf_expression(t.children[0], child_path(path, 0, t.children[0]));
    auto [body, orelse] = suites(t, path);
    if (t.is("If")) return Stmt{If{std::move(test), std::move(body), std::move(orelse)}};
    return Stmt{While{std::move(test), std::move(body), std::move(orelse)}};
  }

  Stmt loop(const Tree& t, const std::string& path) {
    if (t.children.empty() || !t.children[0].is("test")) fail(path, "For is missing its test group");
    const Tree& test = t.children[0];
    std::string test_path = child_path(path, 0, test);
    if (test.children.size() != 2 || !test.children[0].is("iter") || !test.children[1].is("Name"))
      fail(test_path, "For test must hold exactly iter and Name groups");
    Expr iterable = leaf_expression(test.children[0], child_path(test_path, 0, test.children[0]));
    std::string target_path = child_path(test_path, 1, test.children[1]);
    Expr target = leaf_expression(test.children[1], target_path);
    if (!is_assignment_target(target))
      fail(target_path, fmt::format("'{}' is not an assignable loop target", unparse(target)));
    auto [body, orelse] = suites(t, path);
    return Stmt{For{std::move(target), std::move(iterable), std::move(body), std::move(orelse)}};
  }
};

}  // namespace

CompactTree compactize(const Program& program) {
  return Tree::node("Module", compact_block(program.body));
}

Program expand(const CompactTree& tree) { return Expander().module(tree); }

void validate(const CompactTree& tree) { (void)expand(tree); }

}  // namespace castbridge::cast
