#include <fmt/format.h>

#include <algorithm>
#include <charconv>

#include "castbridge/ud.hpp"

namespace castbridge::ud {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool known_relation(std::string_view deprel) {
  const auto& rels = universal_relations();
  std::string_view base = base_relation(deprel);
  if (base.size() != deprel.size() && base.size() + 1 == deprel.size()) return false;  // "obl:"
  return std::find(rels.begin(), rels.end(), base) != rels.end();
}

struct Pending {
  DepTree tree;
  std::vector<int> lines;
};

void finish(Pending& p, std::vector<DepTree>& out) {
  if (p.tree.tokens.empty()) return;
  for (std::size_t i = 0; i < p.tree.tokens.size(); ++i) {
    const auto& t = p.tree.tokens[i];
    if (t.head < 0 || t.head > static_cast<int>(p.tree.tokens.size()))
      throw FormatError(p.lines[i], fmt::format("head {} is outside the sentence", t.head));
    if (t.head == t.index) throw CycleError(fmt::format("token {} is its own head (line {})", t.index, p.lines[i]));
  }
  validate(p.tree);
  out.push_back(std::move(p.tree));
  p = Pending{};
}

}  // namespace

FormatError::FormatError(int line, const std::string& reason)
    : Error(fmt::format("CoNLL-U line {}: {}", line, reason)), line_(line) {}

const std::vector<std::string>& universal_relations() {
  static const std::vector<std::string> rels = {
      "acl",  "advcl",    "advmod", "amod",       "appos",     "aux",    "case",     "cc",
      "ccomp", "clf",     "compound", "conj",     "cop",       "csubj",  "dep",      "det",
      "discourse", "dislocated", "expl", "fixed", "flat",      "goeswith", "iobj",   "list",
      "mark", "nmod",     "nsubj",  "nummod",     "obj",       "obl",    "orphan",   "parataxis",
      "punct", "reparandum", "root", "vocative",  "xcomp"};
  return rels;
}

std::string_view base_relation(std::string_view label) {
  auto colon = label.find(':');
  return colon == std::string_view::npos ? label : label.substr(0, colon);
}

void validate(const DepTree& tree) {
  const auto n = static_cast<int>(tree.tokens.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const auto& t = tree.tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1) throw FormatError(0, fmt::format("token ids are not contiguous at {}", t.index));
    if (t.head < 0 || t.head > n) throw FormatError(0, fmt::format("head {} is outside the sentence", t.head));
    if (!known_relation(t.deprel)) throw FormatError(0, fmt::format("unknown relation '{}'", t.deprel));
    if (t.head == 0) {
      ++roots;
      if (t.deprel != "root") throw FormatError(0, fmt::format("root token has relation '{}'", t.deprel));
    } else if (base_relation(t.deprel) == "root") {
      throw FormatError(0, fmt::format("token {} is labelled root but has head {}", t.index, t.head));
    }
  }
  if (roots > 1) throw MultipleRoots(fmt::format("{} tokens have head 0", roots));
  // Walk up from every token; a path longer than n revisits a node.
  for (int i = 0; i < n; ++i) {
    int at = i + 1;
    for (int steps = 0; at != 0; ++steps) {
      if (steps > n) throw CycleError(fmt::format("token {} is on a head cycle", i + 1));
      at = tree.tokens[static_cast<std::size_t>(at - 1)].head;
    }
  }
  if (roots == 0 && n > 0) throw CycleError("no token has head 0");
}

std::vector<DepTree> read_conllu(std::string_view text) {
  std::vector<DepTree> out;
  Pending pending;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      finish(pending, out);
      continue;
    }
    if (line.front() == '#') continue;

    auto cols = split_tabs(line);
    if (cols.size() != 10)
      throw FormatError(line_no, fmt::format("expected 10 tab-separated columns, found {}", cols.size()));
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    DepToken tok;
    if (!parse_int(cols[0], tok.index)) throw FormatError(line_no, fmt::format("bad ID '{}'", cols[0]));
    if (!parse_int(cols[6], tok.head)) throw FormatError(line_no, fmt::format("bad HEAD '{}'", cols[6]));
    tok.form = std::string(cols[1]);
    tok.deprel = std::string(cols[7]);
    if (tok.form.empty()) throw FormatError(line_no, "empty FORM");
    if (tok.index != static_cast<int>(pending.tree.tokens.size()) + 1)
      throw FormatError(line_no, fmt::format("token id {} breaks the sequence", tok.index));
    if (!known_relation(tok.deprel)) throw FormatError(line_no, fmt::format("unknown relation '{}'", tok.deprel));
    if (tok.head == 0 && tok.deprel != "root")
      throw FormatError(line_no, fmt::format("root token has relation '{}'", tok.deprel));
    pending.tree.tokens.push_back(std::move(tok));
    pending.lines.push_back(line_no);
  }
  finish(pending, out);
  return out;
}

LirTree to_ordered_tree(const DepTree& tree) {
  const auto n = tree.tokens.size();
  std::vector<std::vector<std::size_t>> deps(n + 1);
  for (std::size_t i = 0; i < n; ++i) deps[static_cast<std::size_t>(tree.tokens[i].head)].push_back(i + 1);

  // Builds bottom-up from an explicit postorder so deep chains do not
  // exhaust the stack.
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack(deps[0].begin(), deps[0].end());
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    order.push_back(id);
    for (auto d : deps[id]) stack.push_back(d);
  }
  std::vector<LirTree> built(n + 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto id = *it;
    const auto& tok = tree.tokens[id - 1];
    LirTree node = LirTree::node(tok.deprel);
    std::vector<std::size_t> members(deps[id]);
    members.push_back(id);
    std::sort(members.begin(), members.end());
    for (auto m : members) {
      if (m == id)
        node.children.push_back(LirTree::word(tok.form, static_cast<int>(id)));
      else
        node.children.push_back(std::move(built[m]));
    }
    built[id] = std::move(node);
  }
  if (deps[0].empty()) return LirTree::node("root");
  return std::move(built[deps[0].front()]);
}

std::string yield_text(const LirTree& t) {
  std::vector<std::pair<int, const std::string*>> words;
  std::vector<const LirTree*> stack{&t};
  while (!stack.empty()) {
    const LirTree* at = stack.back();
    stack.pop_back();
    if (at->is_word()) words.emplace_back(at->index, &*at->form);
    for (const auto& c : at->children) stack.push_back(&c);
  }
  std::stable_sort(words.begin(), words.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [index, form] : words) {
    if (!out.empty()) out += ' ';
    out += *form;
  }
  return out;
}

}  // namespace castbridge::ud
