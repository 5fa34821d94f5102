#pragma once

// Universal Dependencies ingestion and the rewrite into the language
// intermediate representation (LIR).
//
// A dependency tree is first turned into an ordered constituency-style tree:
// every token becomes a node labelled with its relation whose children are
// its dependents plus one word terminal for the token itself, all ordered by
// token index. The sentence root becomes the top node, labelled `root`.
//
//   "remind me if it rains"
//   root[ remind  obj[ me ]  advcl[ mark[ if ]  nsubj[ it ]  rains ] ]
//
// apply_rules() then runs thirteen schema rewrites in a fixed order:
//
//   S          root(*)                      -> root(S(*))
//   Command    S|ccomp|xcomp(*)             -> x(Command(*))
//   Condition  Command(.. n1 ..)            -> Command(.. Condition(If(n1 ..)) ..)
//              n1 in {acl advcl advmod parataxis} whose text starts with a
//              condition trigger; later trigger clauses and else clauses
//              (see Else) among the Command's children join the same If
//   ElseIf     Condition(n0(.. n1 ..))      -> Condition(n0, ElseIf(n1))
//              n0 in {If ElseIf}, n1 a later trigger clause of n0, or the
//              trigger clause under a conj child of n0
//   Else       Condition(n0(.. n1(*) ..))   -> Condition(n0, Else(*))
//              n1 in {conj parataxis} starting with else / or else / otherwise
//   Body       If|ElseIf|Else(*)            -> x(Body(Command(*)))
//   Test       n0(Body(Command(.. n1(*) ..))) -> n0(Test(Command(*)), Body(Command(..)))
//   mark       n0(Command(.. mark ..))      -> n0(mark, Command(..)), n0 in {Test advcl ccomp xcomp}
//   conj       n(.. n1, conj ..)            -> n(.. n1, n1_conj ..)
//   cc         n(n1_conj(.. cc ..))         -> n(cc, n1_conj(..))
//   Action     Command(*)                   -> Command(Action(*))
//   Arg        Action(.. n1 ..)             -> Action(.. Arg(n1) ..), n1 in {csubj iobj obj obl nsubj nmod}
//   punct      n(Command(n1 .. punct))      -> n(Command(n1 ..), punct)
//
// Each rule is applied to fixpoint, leftmost-outermost, before the next one
// starts. Rules only move nodes, so the word sequence is never altered.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "castbridge/bracket.hpp"
#include "castbridge/error.hpp"
#include "castbridge/tree.hpp"

namespace castbridge::ud {

class FormatError : public Error {
 public:
  FormatError(int line, const std::string& reason);
  int line() const { return line_; }

 private:
  int line_;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class MultipleRoots : public Error {
 public:
  using Error::Error;
};

struct DepToken {
  int index;  // 1-based
  std::string form;
  int head;  // 0 for the root
  std::string deprel;
  bool operator==(const DepToken&) const = default;
};

struct DepTree {
  std::vector<DepToken> tokens;
  bool operator==(const DepTree&) const = default;
};

/// Reads CoNLL-U. Only ID, FORM, HEAD and DEPREL are used; multiword and
/// empty-node lines are skipped.
std::vector<DepTree> read_conllu(std::string_view text);

/// Checks contiguity, single root, acyclicity and known relations.
void validate(const DepTree& tree);

/// Node of the LIR. Word terminals carry a form and the token index and have
/// no label or children; every other node is a labelled structure.
struct LirTree {
  std::string label;
  std::optional<std::string> form;
  int index = 0;
  std::vector<LirTree> children;

  static LirTree word(std::string form, int index) { return LirTree{"", std::move(form), index, {}}; }
  static LirTree node(std::string label, std::vector<LirTree> children = {}) {
    return LirTree{std::move(label), std::nullopt, 0, std::move(children)};
  }
  bool is_word() const { return form.has_value(); }

  bool operator==(const LirTree&) const = default;
};

LirTree to_ordered_tree(const DepTree& tree);

/// Words under `t` in sentence order, space separated.
std::string yield_text(const LirTree& t);

/// Relation without its `:subtype`.
std::string_view base_relation(std::string_view label);

/// The 37 universal relations.
const std::vector<std::string>& universal_relations();

/// Structural LIR labels, universal relations and their `_conj` forms.
const bracket::LabelSet& lir_labels();

enum class Rule { S, Command, Condition, ElseIf, Else, Body, Test, Mark, Conj, Cc, Action, Arg, Punct };

std::string_view rule_name(Rule rule);

/// In application order.
const std::vector<Rule>& rule_order();

/// Called after each firing with the rule and the whole tree after it.
using TraceFn = std::function<void(Rule, const LirTree&)>;

/// Applies one rule at its leftmost-outermost site. Returns false when the
/// rule matches nowhere.
bool apply_once(Rule rule, LirTree& tree);

/// Runs one rule to fixpoint; returns the number of firings.
int apply_to_fixpoint(Rule rule, LirTree& tree, const TraceFn& trace = {});

LirTree apply_rules(LirTree tree, const TraceFn& trace = {});

/// Word terminals render as leaves; forms that would read as a label or as
/// structural brackets are prefixed with a backslash.
Tree to_bracket_tree(const LirTree& t);
std::string lir_to_bracket(const LirTree& t, bracket::Style style = bracket::Style::Compact);

/// Full pipeline for one sentence.
std::string sentence_to_lir(const DepTree& tree, const TraceFn& trace = {});

}  // namespace castbridge::ud
