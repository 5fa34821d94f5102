#include <doctest.h>

#include "ast_fuzz.hpp"
#include "castbridge/bracket.hpp"
#include "castbridge/cast.hpp"
#include "castbridge/syntax.hpp"
#include "fixtures.hpp"

using namespace castbridge;
using namespace castbridge::syntax;
using castbridge::testing::fixture;

namespace {

std::string path_of(const std::string& text) {
  try {
    cast::expand(bracket::parse_bracket(text, cast::labels()));
  } catch (const cast::MalformedCast& e) {
    return e.path();
  }
  return "<valid>";
}

}  // namespace

TEST_CASE("minimal program") {
  auto t = cast::compactize(parse_program("x = 1"));
  CHECK(bracket::linearize(t, bracket::Style::Compact) == "[ Module [ x = 1 ] ]");
}

TEST_CASE("resolve program compacts to the stored pretty cAST") {
  Program p = parse_program(fixture("programs/resolve_from.py"));
  std::string pretty = bracket::linearize(cast::compactize(p), bracket::Style::Pretty) + "\n";
  CHECK(pretty == fixture("programs/resolve_from.cast"));
  Program back = cast::expand(bracket::parse_bracket(fixture("programs/resolve_from.cast"), cast::labels()));
  CHECK(back == p);
}

TEST_CASE("for loop layout") {
  auto t = cast::compactize(parse_program("for e in events:\n    f(e)\nelse:\n    g()\n"));
  CHECK(bracket::linearize(t, bracket::Style::Compact) ==
        "[ Module [ For [ test [ iter [ events ] ] [ Name [ e ] ] ] [ body [ f(e) ] ] [ orelse [ g() ] ] ] ]");
}

TEST_CASE("if and while layout, elif nests under orelse") {
  auto t = cast::compactize(parse_program("if a:\n    x = 1\nelif b:\n    x = 2\nwhile c:\n    c = f(c)\n"));
  CHECK(bracket::linearize(t, bracket::Style::Compact) ==
        "[ Module [ If [ test [ a ] ] [ body [ x = 1 ] ] [ orelse [ If [ test [ b ] ] [ body [ x = 2 ] ] ] ] ]"
        " [ While [ test [ c ] ] [ body [ c = f(c) ] ] ] ]");
}

TEST_CASE("leaves holding list brackets survive") {
  Program p = parse_program("messages = []\nx = messages[0]\ny = [[1], [2]]\n");
  auto text = bracket::linearize(cast::compactize(p), bracket::Style::Compact);
  CHECK(text == "[ Module [ messages = [] ] [ x = messages[0] ] [ y = [[1], [2]] ] ]");
  CHECK(cast::expand(bracket::parse_bracket(text, cast::labels())) == p);
}

TEST_CASE("malformed trees report a path") {
  CHECK(path_of("[ Module [ x = 1 ] ]") == "<valid>");
  CHECK(path_of("[ x = 1 ]") == "/");
  CHECK(path_of("[ For [ body [ x ] ] ]") == "/");
  CHECK(path_of("[ Module [ For [ body [ x = 1 ] ] ] ]") == "/Module/0:For");
  CHECK(path_of("[ Module [ y = 1 ] [ For [ test [ iter [ xs ] ] ] [ body [ x = 1 ] ] ] ]") ==
        "/Module/1:For/0:test");
  CHECK(path_of("[ Module [ For [ test [ iter [ xs ] ] [ Name [ f(x) ] ] ] [ body [ g() ] ] ] ]") ==
        "/Module/0:For/0:test/1:Name");
  CHECK(path_of("[ Module [ If [ test [ x = 1 ] ] [ body [ y ] ] ] ]") == "/Module/0:If/0:test/0:leaf");
  CHECK(path_of("[ Module [ If [ test [ a ] ] [ body [ y = ] ] ] ]") == "/Module/0:If/1:body/0:leaf");
  CHECK(path_of("[ Module [ If [ test [ a ] ] [ orelse [ y ] ] ] ]") == "/Module/0:If/1:orelse");
  CHECK(path_of("[ Module [ If [ test [ a ] ] [ body [ if b: y ] ] ] ]") == "/Module/0:If/1:body/0:leaf");
  CHECK(path_of("[ Module [ body [ x ] ] ]") == "/Module/0:body");
  CHECK(path_of("[ Module [ ] ]") == "/Module/0:leaf");
  CHECK(path_of("[ Module [ def f(): pass ] ]") == "/Module/0:leaf");
}

TEST_CASE("validate accepts what compactize produces") {
  castbridge::testing::AstFuzzer fuzz(5);
  for (int i = 0; i < 200; ++i) CHECK_NOTHROW(cast::validate(cast::compactize(fuzz.program())));
}

TEST_CASE("fuzz: expand(compactize(p)) == p and the bracket round trip") {
  castbridge::testing::AstFuzzer fuzz(424242);
  for (int i = 0; i < 1200; ++i) {
    Program p = fuzz.program();
    auto tree = cast::compactize(p);
    REQUIRE(cast::expand(tree) == p);
    for (auto style : {bracket::Style::Compact, bracket::Style::Pretty}) {
      std::string text = bracket::linearize(tree, style);
      CAPTURE(text);
      auto parsed = bracket::parse_bracket(text, cast::labels());
      REQUIRE(parsed == tree);
      REQUIRE(cast::expand(parsed) == p);
    }
  }
}
