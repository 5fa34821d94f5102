#include <doctest.h>

#include <functional>
#include <random>

#include "castbridge/bracket.hpp"
#include "castbridge/ud.hpp"
#include "fixtures.hpp"
#include "ud_fuzz.hpp"

using namespace castbridge;
using namespace castbridge::ud;
using castbridge::testing::fixture;

namespace {

LirTree W(std::string form, int index) { return LirTree::word(std::move(form), index); }
LirTree N(std::string label, std::vector<LirTree> children = {}) {
  return LirTree::node(std::move(label), std::move(children));
}

std::string row(int id, const char* form, int head, const char* rel) {
  return std::to_string(id) + "\t" + form + "\t_\t_\t_\t_\t" + std::to_string(head) + "\t" + rel + "\t_\t_\n";
}

DepTree tree_of(std::vector<std::tuple<const char*, int, const char*>> rows) {
  DepTree t;
  int i = 1;
  for (auto& [form, head, rel] : rows) t.tokens.push_back(DepToken{i++, form, head, rel});
  return t;
}

std::string run(Rule rule, LirTree t) {
  apply_to_fixpoint(rule, t);
  return lir_to_bracket(t);
}

void walk(const LirTree& t, const std::function<void(const LirTree&)>& f) {
  f(t);
  for (const auto& c : t.children) walk(c, f);
}

std::size_t count_nodes(const LirTree& t) {
  std::size_t n = 0;
  walk(t, [&](const LirTree&) { ++n; });
  return n;
}

}  // namespace

TEST_CASE("read_conllu: basic sentence") {
  std::string text = "# text = it rains today\n" + row(1, "it", 2, "nsubj") + row(2, "rains", 0, "root") +
                     row(3, "today", 2, "obl:tmod") + "\n";
  auto sents = read_conllu(text);
  REQUIRE(sents.size() == 1);
  REQUIRE(sents[0].tokens.size() == 3);
  CHECK(sents[0].tokens[1] == DepToken{2, "rains", 0, "root"});
  CHECK(sents[0].tokens[2].deprel == "obl:tmod");
  LirTree t = to_ordered_tree(sents[0]);
  CHECK(t.label == "root");
  CHECK(yield_text(t) == "it rains today");
}

TEST_CASE("read_conllu: several sentences, multiword and empty nodes skipped, CRLF") {
  std::string text = row(1, "a", 0, "root") + "\n\n" + "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n" +
                     row(1, "do", 0, "root") + row(2, "n't", 1, "advmod") + "1.1\tx\t_\t_\t_\t_\t_\t_\t_\t_\r\n";
  auto sents = read_conllu(text);
  REQUIRE(sents.size() == 2);
  CHECK(sents[1].tokens.size() == 2);
  CHECK(read_conllu("").empty());
}

TEST_CASE("read_conllu: errors") {
  // A line with a missing column.
  std::string missing = row(1, "it", 2, "nsubj") + "2\trains\t_\t_\t_\t_\t0\troot\t_\n";
  try {
    read_conllu(missing);
    FAIL("accepted");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(read_conllu(row(1, "a", 0, "root") + row(2, "b", 0, "root")), MultipleRoots);
  CHECK_THROWS_AS(read_conllu(row(1, "a", 2, "obj") + row(2, "b", 1, "obj") + row(3, "c", 0, "root")), CycleError);
  CHECK_THROWS_AS(read_conllu(row(1, "a", 1, "obj") + row(2, "c", 0, "root")), CycleError);
  CHECK_THROWS_AS(read_conllu(row(1, "a", 2, "obj") + row(2, "b", 1, "obj")), CycleError);
  CHECK_THROWS_AS(read_conllu(row(1, "a", 5, "obj") + row(2, "c", 0, "root")), FormatError);
  CHECK_THROWS_AS(read_conllu(row(1, "a", 0, "root") + row(3, "c", 1, "obj")), FormatError);
  CHECK_THROWS_AS(read_conllu(row(1, "a", 0, "root") + row(2, "c", 1, "blah")), FormatError);
  CHECK_THROWS_AS(read_conllu(row(1, "a", 0, "nsubj")), FormatError);
  CHECK_THROWS_AS(read_conllu("1\ta\t_\t_\t_\t_\tx\troot\t_\t_\n"), FormatError);
}

TEST_CASE("to_ordered_tree interleaves the head word by index") {
  LirTree t = to_ordered_tree(tree_of({{"it", 2, "nsubj"}, {"rains", 0, "root"}}));
  CHECK(t == N("root", {N("nsubj", {W("it", 1)}), W("rains", 2)}));

  LirTree c = to_ordered_tree(
      tree_of({{"remind", 0, "root"}, {"me", 1, "obj"}, {"if", 5, "mark"}, {"it", 5, "nsubj"}, {"rains", 1, "advcl"}}));
  LirTree expected = N("root", {W("remind", 1), N("obj", {W("me", 2)}),
                                N("advcl", {N("mark", {W("if", 3)}), N("nsubj", {W("it", 4)}), W("rains", 5)})});
  CHECK(c == expected);
  CHECK(yield_text(c.children[2]) == "if it rains");
  CHECK(yield_text(c) == "remind me if it rains");
}

TEST_CASE("yield_text edge cases") {
  CHECK(yield_text(N("Command")) == "");
  CHECK(yield_text(W("otherwise", 1)) == "otherwise");
  // Order comes from token indices, not from child order.
  CHECK(yield_text(N("x", {W("b", 2), N("y", {W("a", 1)})})) == "a b");
}

TEST_CASE("golden fixtures") {
  for (const char* name : {"unconditional", "conditional", "trigger_free", "if_otherwise"}) {
    CAPTURE(name);
    auto sents = read_conllu(fixture(std::string("ud/") + name + ".conllu"));
    REQUIRE(sents.size() == 1);
    CHECK(sentence_to_lir(sents[0]) + "\n" == fixture(std::string("ud/") + name + ".lir"));
  }
}

TEST_CASE("trigger-free sentence has no Condition") {
  auto sents = read_conllu(fixture("ud/trigger_free.conllu"));
  std::string lir = sentence_to_lir(sents[0]);
  CHECK(lir.rfind("[ root [ S [ Command [ Action ", 0) == 0);
  CHECK(lir.find("Condition") == std::string::npos);
}

TEST_CASE("S and Command") {
  CHECK(run(Rule::S, N("root", {W("go", 1)})) == "[ root [ S [ go ] ] ]");
  CHECK(run(Rule::S, N("root", {N("S", {W("go", 1)})})) == "[ root [ S [ go ] ] ]");
  CHECK(run(Rule::S, N("obj", {W("go", 1)})) == "[ obj [ go ] ]");
  CHECK(run(Rule::Command, N("S", {W("go", 1), N("ccomp", {W("see", 2)}), N("xcomp:pred", {W("x", 3)})})) ==
        "[ S [ Command [ go ] [ ccomp [ Command [ see ] ] ] [ xcomp:pred [ Command [ x ] ] ] ] ]");
}

TEST_CASE("Condition: trigger words, case, longest match, word boundaries") {
  auto with_clause = [](std::vector<LirTree> words, const char* rel = "advcl") {
    return N("Command", {W("go", 1), N(rel, std::move(words))});
  };
  CHECK(run(Rule::Condition, with_clause({W("If", 2), W("so", 3)})) ==
        "[ Command [ go ] [ Condition [ If [ advcl [ \\If ] [ so ] ] ] ] ]");
  CHECK(run(Rule::Condition, with_clause({W("in", 2), W("the", 3), W("case", 4)})).find("Condition") !=
        std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("in", 2), W("case", 3)})).find("Condition") != std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("SO", 2), W("long", 3)})).find("Condition") != std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("so", 2), W("far", 3)})).find("Condition") == std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("iffy", 2)})).find("Condition") == std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("shoulder", 2)})).find("Condition") == std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("if", 2)}, "obj")).find("Condition") == std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("unless", 2)}, "advmod")).find("Condition") != std::string::npos);
  CHECK(run(Rule::Condition, with_clause({W("if", 2)}, "acl:relcl")).find("Condition") != std::string::npos);
  // Only a Command's children qualify.
  CHECK(run(Rule::Condition, N("S", {N("advcl", {W("if", 1)})})) == "[ S [ advcl [ if ] ] ]");
}

TEST_CASE("Condition gathers later trigger and else clauses into the first If") {
  LirTree t = N("Command", {N("advcl", {W("if", 1), W("a", 2)}), W("go", 3), N("advcl", {W("unless", 4)}),
                            N("parataxis", {W("otherwise", 5), W("stop", 6)}), N("obj", {W("x", 7)})});
  CHECK(run(Rule::Condition, t) ==
        "[ Command [ Condition [ If [ advcl [ if ] [ a ] ] [ advcl [ unless ] ] [ parataxis [ otherwise ] [ stop ] ] ] ]"
        " [ go ] [ obj [ x ] ] ]");
}

TEST_CASE("ElseIf: second clause under the branch") {
  LirTree t = N("Condition", {N("If", {N("advcl", {W("if", 1)}), N("advcl", {W("unless", 2)}),
                                       N("advcl", {W("given", 3)})})});
  CHECK(run(Rule::ElseIf, t) ==
        "[ Condition [ If [ advcl [ if ] ] ] [ ElseIf [ advcl [ unless ] ] ] [ ElseIf [ advcl [ given ] ] ] ]");
}

TEST_CASE("ElseIf: clause coordinated under the branch") {
  LirTree t = N("Condition", {N("If", {N("advcl", {W("if", 1)}), N("conj", {W("or", 2), N("advcl", {W("if", 3)}),
                                                                             W("b", 4)})})});
  CHECK(run(Rule::ElseIf, t) ==
        "[ Condition [ If [ advcl [ if ] ] [ conj [ or ] [ b ] ] ] [ ElseIf [ advcl [ if ] ] ] ]");
}

TEST_CASE("Else lifts the clause's children and goes after the ElseIf run") {
  LirTree t = N("Condition", {N("If", {N("advcl", {W("if", 1)}), N("conj", {W("or", 2), W("else", 3), W("x", 4)})}),
                              N("ElseIf", {N("advcl", {W("if", 5)})})});
  CHECK(run(Rule::Else, t) ==
        "[ Condition [ If [ advcl [ if ] ] ] [ ElseIf [ advcl [ if ] ] ] [ Else [ or ] [ else ] [ x ] ] ]");
  LirTree not_else = N("Condition", {N("If", {N("obj", {W("otherwise", 1)})})});
  CHECK(run(Rule::Else, not_else) == "[ Condition [ If [ obj [ otherwise ] ] ] ]");
}

TEST_CASE("Body and Test") {
  LirTree t = N("If", {N("advcl", {N("mark", {W("if", 1)}), W("rains", 2)})});
  apply_to_fixpoint(Rule::Body, t);
  CHECK(lir_to_bracket(t) == "[ If [ Body [ Command [ advcl [ mark [ if ] ] [ rains ] ] ] ] ]");
  apply_to_fixpoint(Rule::Test, t);
  CHECK(lir_to_bracket(t) == "[ If [ Test [ Command [ mark [ if ] ] [ rains ] ] ] [ Body [ Command ] ] ]");
  CHECK(run(Rule::Body, N("Else", {W("x", 1)})) == "[ Else [ Body [ Command [ x ] ] ] ]");
  CHECK(run(Rule::Body, N("Else")) == "[ Else ]");
  // Else has no test.
  CHECK(run(Rule::Test, N("Else", {N("Body", {N("Command", {N("advcl", {W("if", 1)})})})})) ==
        "[ Else [ Body [ Command [ advcl [ if ] ] ] ] ]");
}

TEST_CASE("mark, conj, cc, Action, Arg, punct") {
  CHECK(run(Rule::Mark, N("xcomp", {N("Command", {N("mark", {W("to", 1)}), W("go", 2)})})) ==
        "[ xcomp [ mark [ to ] ] [ Command [ go ] ] ]");
  CHECK(run(Rule::Mark, N("obj", {N("Command", {N("mark", {W("to", 1)})})})) == "[ obj [ Command [ mark [ to ] ] ] ]");

  CHECK(run(Rule::Conj, N("x", {N("obj", {W("a", 1)}), N("conj", {W("b", 2)}), N("conj", {W("c", 3)})})) ==
        "[ x [ obj [ a ] ] [ obj_conj [ b ] ] [ conj [ c ] ] ]");
  CHECK(run(Rule::Conj, N("x", {W("a", 1), N("conj", {W("b", 2)})})) == "[ x [ a ] [ conj [ b ] ] ]");
  CHECK(run(Rule::Conj, N("x", {N("Arg", {W("a", 1)}), N("conj", {W("b", 2)})})) == "[ x [ Arg [ a ] ] [ conj [ b ] ] ]");
  CHECK(run(Rule::Conj, N("x", {N("obl:tmod", {W("a", 1)}), N("conj", {W("b", 2)})})) ==
        "[ x [ obl:tmod [ a ] ] [ obl:tmod_conj [ b ] ] ]");

  CHECK(run(Rule::Cc, N("x", {N("obj", {W("a", 1)}), N("obj_conj", {N("cc", {W("and", 2)}), W("b", 3)})})) ==
        "[ x [ obj [ a ] ] [ cc [ and ] ] [ obj_conj [ b ] ] ]");
  CHECK(run(Rule::Cc, N("x", {N("conj", {N("cc", {W("and", 2)}), W("b", 3)})})) ==
        "[ x [ conj [ cc [ and ] ] [ b ] ] ]");

  CHECK(run(Rule::Action, N("Command", {W("go", 1)})) == "[ Command [ Action [ go ] ] ]");
  CHECK(run(Rule::Action, N("Command")) == "[ Command ]");

  CHECK(run(Rule::Arg, N("Action", {W("give", 1), N("iobj", {W("me", 2)}), N("obj", {W("it", 3)}),
                                    N("advmod", {W("now", 4)})})) ==
        "[ Action [ give ] [ Arg [ iobj [ me ] ] ] [ Arg [ obj [ it ] ] ] [ advmod [ now ] ] ]");

  CHECK(run(Rule::Punct, N("S", {N("Command", {W("go", 1), N("punct", {W(".", 2)})})})) ==
        "[ S [ Command [ go ] ] [ punct [ . ] ] ]");
  CHECK(run(Rule::Punct, N("S", {N("Command", {N("punct", {W(".", 1)})})})) == "[ S [ Command [ punct [ . ] ] ] ]");
}

TEST_CASE("word leaves that look like labels are escaped and round trip") {
  LirTree t = N("root", {W("root", 1), N("obj", {W("[", 2)}), N("obl", {W("\\x", 3)}), N("dep", {W("Command", 4)}),
                         N("nmod", {W("obl:tmod", 5)}), N("amod", {W("obj_conj", 6)})});
  std::string text = lir_to_bracket(t);
  CHECK(text == "[ root [ \\root ] [ obj [ \\[ ] ] [ obl [ \\\\x ] ] [ dep [ \\Command ] ] [ nmod [ \\obl:tmod ] ] "
                "[ amod [ \\obj_conj ] ] ]");
  CHECK(bracket::parse_bracket(text, lir_labels()) == to_bracket_tree(t));
}

TEST_CASE("rule names and order") {
  std::vector<std::string> names;
  for (Rule r : rule_order()) names.emplace_back(rule_name(r));
  CHECK(names == std::vector<std::string>{"S", "Command", "Condition", "ElseIf", "Else", "Body", "Test", "mark",
                                          "conj", "cc", "Action", "Arg", "punct"});
}

TEST_CASE("property: 500 random trees") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    DepTree dep = castbridge::testing::random_dep_tree(rng);
    const std::string expected_yield = castbridge::testing::forms_joined(dep);
    LirTree t = to_ordered_tree(dep);
    REQUIRE(yield_text(t) == expected_yield);
    const std::size_t bound = count_nodes(t) * rule_order().size();

    std::size_t firings = 0;
    bool yield_ok = true;
    LirTree out = apply_rules(t, [&](Rule, const LirTree& snapshot) {
      ++firings;
      if (yield_text(snapshot) != expected_yield) yield_ok = false;
    });
    CAPTURE(lir_to_bracket(t));
    REQUIRE(yield_ok);
    REQUIRE(firings <= bound);
    REQUIRE(yield_text(out) == expected_yield);

    // Determinism and stability.
    REQUIRE(apply_rules(t) == out);
    REQUIRE(apply_rules(out) == out);

    // Labels stay inside the declared set; bracket form parses back.
    walk(out, [&](const LirTree& n) {
      if (!n.is_word()) REQUIRE(lir_labels().contains(n.label));
    });
    std::string text = lir_to_bracket(out);
    REQUIRE(bracket::parse_bracket(text, lir_labels()) == to_bracket_tree(out));
    REQUIRE(bracket::parse_bracket(lir_to_bracket(out, bracket::Style::Pretty), lir_labels()) == to_bracket_tree(out));
  }
}

TEST_CASE("each rule alone preserves yield on random trees") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    DepTree dep = castbridge::testing::random_dep_tree(rng);
    const std::string expected = castbridge::testing::forms_joined(dep);
    LirTree t = to_ordered_tree(dep);
    for (Rule r : rule_order()) {
      LirTree copy = t;
      apply_to_fixpoint(r, copy);
      REQUIRE(yield_text(copy) == expected);
      // A fired site never fires again.
      REQUIRE_FALSE(apply_once(r, copy));
      t = std::move(copy);
    }
  }
}
