#pragma once

// Random dependency trees. Forms are drawn from a pool that is heavy in
// trigger words and label look-alikes so the conditional rules and the
// leaf escaping both get exercised.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "castbridge/ud.hpp"

namespace castbridge::testing {

inline ud::DepTree random_dep_tree(std::mt19937_64& rng, int max_tokens = 14) {
  static const char* const kForms[] = {"if", "If", "it", "rains", "otherwise", "else", "or", "in", "the",
                                       "case", "remind", "me", "unless", "so", "long", "obj", "Command",
                                       "[", "]", "\\x", "call", "mom", ",", ".", "should", "given", "text"};
  static const char* const kRels[] = {"advcl", "advcl", "conj", "conj", "mark", "nsubj", "obj", "obl",
                                      "iobj", "csubj", "nmod", "cc", "punct", "det", "advmod", "parataxis",
                                      "acl", "ccomp", "xcomp", "amod", "obl:tmod", "nmod:poss", "compound"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  const int n = pick(1, max_tokens);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);

  ud::DepTree tree;
  tree.tokens.resize(static_cast<std::size_t>(n));
  // order[0] is the root; everyone else attaches to an earlier entry.
  for (int j = 0; j < n; ++j) {
    int id = order[static_cast<std::size_t>(j)];
    auto& tok = tree.tokens[static_cast<std::size_t>(id - 1)];
    tok.index = id;
    tok.form = kForms[pick(0, static_cast<int>(std::size(kForms)) - 1)];
    if (j == 0) {
      tok.head = 0;
      tok.deprel = "root";
    } else {
      tok.head = order[static_cast<std::size_t>(pick(0, j - 1))];
      tok.deprel = kRels[pick(0, static_cast<int>(std::size(kRels)) - 1)];
    }
  }
  return tree;
}

inline std::string forms_joined(const ud::DepTree& tree) {
  std::string out;
  for (const auto& t : tree.tokens) {
    if (!out.empty()) out += ' ';
    out += t.form;
  }
  return out;
}

}  // namespace castbridge::testing
