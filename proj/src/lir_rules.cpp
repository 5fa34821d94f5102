#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <iterator>

#include "castbridge/ud.hpp"

namespace castbridge::ud {
namespace {

using Words = std::vector<std::string>;

const std::vector<Words>& condition_triggers() {
  // Longest first, so "in the case" is tried before "in case".
  static const std::vector<Words> t = [] {
    std::vector<Words> v = {{"assuming"}, {"given"},  {"having"},       {"if"},     {"in", "case"},
                            {"in", "the", "case"},     {"provided"}, {"should"}, {"so", "long"},
                            {"supposing"}, {"unless"}};
    std::stable_sort(v.begin(), v.end(), [](const Words& a, const Words& b) { return a.size() > b.size(); });
    return v;
  }();
  return t;
}

const std::vector<Words>& else_triggers() {
  static const std::vector<Words> t = {{"or", "else"}, {"otherwise"}, {"else"}};
  return t;
}

Words lower_words(const std::string& text) {
  Words out;
  std::string cur;
  for (char ch : text) {
    if (ch == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool starts_with_any(const LirTree& t, const std::vector<Words>& triggers) {
  Words words = lower_words(yield_text(t));
  for (const auto& trig : triggers) {
    if (trig.size() <= words.size() && std::equal(trig.begin(), trig.end(), words.begin())) return true;
  }
  return false;
}

bool base_in(const LirTree& t, std::initializer_list<std::string_view> set) {
  if (t.is_word()) return false;
  std::string_view base = base_relation(t.label);
  return std::find(set.begin(), set.end(), base) != set.end();
}

bool labelled(const LirTree& t, std::string_view label) { return !t.is_word() && t.label == label; }

bool ends_with_conj(const LirTree& t) {
  return !t.is_word() && t.label.size() > 5 && t.label.compare(t.label.size() - 5, 5, "_conj") == 0;
}

bool has_child(const LirTree& t, std::string_view label) {
  return std::any_of(t.children.begin(), t.children.end(), [&](const LirTree& c) { return labelled(c, label); });
}

bool condition_clause(const LirTree& t) {
  return base_in(t, {"acl", "advcl", "advmod", "parataxis"}) && starts_with_any(t, condition_triggers());
}

bool else_clause(const LirTree& t) {
  return base_in(t, {"conj", "parataxis"}) && starts_with_any(t, else_triggers());
}

bool plain_relation(const LirTree& t) {
  if (t.is_word() || ends_with_conj(t)) return false;
  std::string_view base = base_relation(t.label);
  if (base == "conj") return false;
  const auto& rels = universal_relations();
  return std::find(rels.begin(), rels.end(), base) != rels.end();
}

// Position in a Condition's children after `at` and the ElseIf/Else run
// that follows it.
std::size_t after_branch_run(const LirTree& condition, std::size_t at) {
  std::size_t i = at + 1;
  while (i < condition.children.size() &&
         (labelled(condition.children[i], "ElseIf") || labelled(condition.children[i], "Else")))
    ++i;
  return i;
}

template <class It>
LirTree take(std::vector<LirTree>& v, It it) {
  LirTree out = std::move(*it);
  v.erase(it);
  return out;
}

// Each site function inspects one node and rewrites its subtree in place.

bool site_s(LirTree& n) {
  if (!labelled(n, "root") || (n.children.size() == 1 && labelled(n.children[0], "S"))) return false;
  n.children = {LirTree::node("S", std::move(n.children))};
  return true;
}

bool site_command(LirTree& n) {
  if (!(labelled(n, "S") || base_in(n, {"ccomp", "xcomp"}))) return false;
  if (n.children.empty() || has_child(n, "Command")) return false;
  n.children = {LirTree::node("Command", std::move(n.children))};
  return true;
}

bool site_condition(LirTree& n) {
  if (!labelled(n, "Command")) return false;
  auto first = std::find_if(n.children.begin(), n.children.end(), condition_clause);
  if (first == n.children.end()) return false;
  std::size_t at = static_cast<std::size_t>(first - n.children.begin());
  LirTree branch = LirTree::node("If");
  std::vector<LirTree> kept;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    // Later trigger clauses and else clauses join the If so that the
    // ElseIf and Else rules can split them off again.
    if (i == at || (i > at && (condition_clause(n.children[i]) || else_clause(n.children[i]))))
      branch.children.push_back(std::move(n.children[i]));
    else
      kept.push_back(std::move(n.children[i]));
  }
  kept.insert(kept.begin() + static_cast<std::ptrdiff_t>(at), LirTree::node("Condition", {std::move(branch)}));
  n.children = std::move(kept);
  return true;
}

bool site_elseif(LirTree& n) {
  if (!labelled(n, "Condition")) return false;
  for (std::size_t b = 0; b < n.children.size(); ++b) {
    LirTree& branch = n.children[b];
    if (!labelled(branch, "If") && !labelled(branch, "ElseIf")) continue;

    // A second condition clause directly under the branch.
    auto first = std::find_if(branch.children.begin(), branch.children.end(), condition_clause);
    if (first != branch.children.end()) {
      auto second = std::find_if(std::next(first), branch.children.end(), condition_clause);
      if (second != branch.children.end()) {
        LirTree moved = take(branch.children, second);
        n.children.insert(n.children.begin() + static_cast<std::ptrdiff_t>(after_branch_run(n, b)),
                          LirTree::node("ElseIf", {std::move(moved)}));
        return true;
      }
    }
    // A condition clause coordinated with the branch's clause.
    for (auto& c : branch.children) {
      if (!base_in(c, {"conj"})) continue;
      auto clause = std::find_if(c.children.begin(), c.children.end(), condition_clause);
      if (clause == c.children.end()) continue;
      LirTree moved = take(c.children, clause);
      n.children.insert(n.children.begin() + static_cast<std::ptrdiff_t>(after_branch_run(n, b)),
                        LirTree::node("ElseIf", {std::move(moved)}));
      return true;
    }
  }
  return false;
}

bool site_else(LirTree& n) {
  if (!labelled(n, "Condition")) return false;
  for (std::size_t b = 0; b < n.children.size(); ++b) {
    LirTree& branch = n.children[b];
    if (!labelled(branch, "If") && !labelled(branch, "ElseIf")) continue;
    auto it = std::find_if(branch.children.begin(), branch.children.end(), else_clause);
    if (it == branch.children.end()) continue;
    LirTree moved = take(branch.children, it);
    n.children.insert(n.children.begin() + static_cast<std::ptrdiff_t>(after_branch_run(n, b)),
                      LirTree::node("Else", std::move(moved.children)));
    return true;
  }
  return false;
}

bool site_body(LirTree& n) {
  if (!labelled(n, "If") && !labelled(n, "ElseIf") && !labelled(n, "Else")) return false;
  if (n.children.empty() || has_child(n, "Body") || has_child(n, "Test")) return false;
  n.children = {LirTree::node("Body", {LirTree::node("Command", std::move(n.children))})};
  return true;
}

bool site_test(LirTree& n) {
  if (!labelled(n, "If") && !labelled(n, "ElseIf")) return false;
  if (n.children.size() != 1 || !labelled(n.children[0], "Body")) return false;
  LirTree& body = n.children[0];
  if (body.children.size() != 1 || !labelled(body.children[0], "Command")) return false;
  LirTree& command = body.children[0];
  auto clause = std::find_if(command.children.begin(), command.children.end(), condition_clause);
  if (clause == command.children.end()) return false;
  LirTree moved = take(command.children, clause);
  LirTree test = LirTree::node("Test", {LirTree::node("Command", std::move(moved.children))});
  n.children.insert(n.children.begin(), std::move(test));
  return true;
}

bool site_mark(LirTree& n) {
  if (!labelled(n, "Test") && !base_in(n, {"advcl", "ccomp", "xcomp"})) return false;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    LirTree& command = n.children[i];
    if (!labelled(command, "Command")) continue;
    auto mark = std::find_if(command.children.begin(), command.children.end(),
                             [](const LirTree& c) { return base_in(c, {"mark"}); });
    if (mark == command.children.end()) continue;
    LirTree moved = take(command.children, mark);
    n.children.insert(n.children.begin() + static_cast<std::ptrdiff_t>(i), std::move(moved));
    return true;
  }
  return false;
}

bool site_conj(LirTree& n) {
  for (std::size_t i = 1; i < n.children.size(); ++i) {
    LirTree& c = n.children[i];
    const LirTree& prev = n.children[i - 1];
    if (c.is_word() || c.label != "conj" || !plain_relation(prev)) continue;
    c.label = prev.label + "_conj";
    return true;
  }
  return false;
}

bool site_cc(LirTree& n) {
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    LirTree& c = n.children[i];
    if (!ends_with_conj(c)) continue;
    auto cc = std::find_if(c.children.begin(), c.children.end(), [](const LirTree& x) { return base_in(x, {"cc"}); });
    if (cc == c.children.end()) continue;
    LirTree moved = take(c.children, cc);
    n.children.insert(n.children.begin() + static_cast<std::ptrdiff_t>(i), std::move(moved));
    return true;
  }
  return false;
}

bool site_action(LirTree& n) {
  if (!labelled(n, "Command") || n.children.empty() || has_child(n, "Action")) return false;
  n.children = {LirTree::node("Action", std::move(n.children))};
  return true;
}

bool site_arg(LirTree& n) {
  if (!labelled(n, "Action")) return false;
  for (auto& c : n.children) {
    if (!base_in(c, {"csubj", "iobj", "obj", "obl", "nsubj", "nmod"})) continue;
    c = LirTree::node("Arg", {std::move(c)});
    return true;
  }
  return false;
}

bool site_punct(LirTree& n) {
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    LirTree& command = n.children[i];
    if (!labelled(command, "Command") || command.children.size() < 2) continue;
    if (!base_in(command.children.back(), {"punct"})) continue;
    LirTree moved = std::move(command.children.back());
    command.children.pop_back();
    n.children.insert(n.children.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(moved));
    return true;
  }
  return false;
}

using Site = bool (*)(LirTree&);

Site site_for(Rule rule) {
  switch (rule) {
    case Rule::S: return site_s;
    case Rule::Command: return site_command;
    case Rule::Condition: return site_condition;
    case Rule::ElseIf: return site_elseif;
    case Rule::Else: return site_else;
    case Rule::Body: return site_body;
    case Rule::Test: return site_test;
    case Rule::Mark: return site_mark;
    case Rule::Conj: return site_conj;
    case Rule::Cc: return site_cc;
    case Rule::Action: return site_action;
    case Rule::Arg: return site_arg;
    case Rule::Punct: return site_punct;
  }
  return nullptr;
}

bool apply_preorder(Site site, LirTree& t) {
  if (t.is_word()) return false;
  if (site(t)) return true;
  for (auto& c : t.children)
    if (apply_preorder(site, c)) return true;
  return false;
}

std::size_t node_count(const LirTree& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += node_count(c);
  return n;
}

std::string escape_form(const std::string& form) {
  if (form.empty() || form == "[" || form == "]" || form.front() == '\\' || lir_labels().contains(form))
    return "\\" + form;
  return form;
}

}  // namespace

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::S: return "S";
    case Rule::Command: return "Command";
    case Rule::Condition: return "Condition";
    case Rule::ElseIf: return "ElseIf";
    case Rule::Else: return "Else";
    case Rule::Body: return "Body";
    case Rule::Test: return "Test";
    case Rule::Mark: return "mark";
    case Rule::Conj: return "conj";
    case Rule::Cc: return "cc";
    case Rule::Action: return "Action";
    case Rule::Arg: return "Arg";
    case Rule::Punct: return "punct";
  }
  return "?";
}

const std::vector<Rule>& rule_order() {
  static const std::vector<Rule> order = {Rule::S,    Rule::Command, Rule::Condition, Rule::ElseIf, Rule::Else,
                                          Rule::Body, Rule::Test,    Rule::Mark,      Rule::Conj,   Rule::Cc,
                                          Rule::Action, Rule::Arg,   Rule::Punct};
  return order;
}

const bracket::LabelSet& lir_labels() {
  static const bracket::LabelSet set = [] {
    std::set<std::string> labels = {"root", "S",    "Command", "Condition", "If",   "ElseIf", "Else",
                                    "Body", "Test", "Action",  "Arg",       "mark", "cc",     "punct"};
    for (const auto& r : universal_relations()) labels.insert(r);
    bracket::LabelSet::Options opts;
    opts.allow_empty_structures = true;
    opts.accept_subtypes = true;
    opts.accept_conj_suffix = true;
    return bracket::LabelSet(std::move(labels), opts);
  }();
  return set;
}

bool apply_once(Rule rule, LirTree& tree) { return apply_preorder(site_for(rule), tree); }

int apply_to_fixpoint(Rule rule, LirTree& tree, const TraceFn& trace) {
  // Every rule consumes a pattern occurrence per firing, so we can bound
  // it by the node count times the rule count.
  const std::size_t cap = node_count(tree) * rule_order().size();
  int fired = 0;
  while (apply_once(rule, tree)) {
    ++fired;
    if (trace) trace(rule, tree);
    if (static_cast<std::size_t>(fired) > cap)
      throw Error(fmt::format("rule {} did not reach a fixpoint after {} firings", rule_name(rule), fired));
  }
  return fired;
}

LirTree apply_rules(LirTree tree, const TraceFn& trace) {
  for (Rule r : rule_order()) apply_to_fixpoint(r, tree, trace);
  return tree;
}

Tree to_bracket_tree(const LirTree& t) {
  if (t.is_word()) return Tree::leaf(escape_form(*t.form));
  Tree out = Tree::node(t.label);
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) out.children.push_back(to_bracket_tree(c));
  return out;
}

std::string lir_to_bracket(const LirTree& t, bracket::Style style) {
  return bracket::linearize(to_bracket_tree(t), style);
}

std::string sentence_to_lir(const DepTree& tree, const TraceFn& trace) {
  return lir_to_bracket(apply_rules(to_ordered_tree(tree), trace));
}

}  // namespace castbridge::ud
