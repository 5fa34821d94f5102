#pragma once

// Fuzzy comparison of entity spans: content words only, scored with
// sentence-level BLEU.
//
//   N    = min(max_order, |cand|, |ref|)
//   p_1  = clipped unigram matches / |cand|
//   p_i  = (matches_i + 1) / (total_i + 1)          for 2 <= i <= N
//   BP   = 1 if |cand| >= |ref| else exp(1 - |ref| / |cand|)
//   BLEU = BP * exp(mean(ln p_i)), and 0 when N == 0 or p_1 == 0
//
// A span matches when BLEU >= threshold.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "castbridge/error.hpp"

namespace castbridge::span {

/// The built-in list, identical to data/stopwords.txt.
const std::set<std::string>& default_stopwords();

/// One lowercase word per line; blank lines and `#` comments are ignored.
std::set<std::string> parse_stopwords(std::string_view text);
std::set<std::string> load_stopwords(const std::string& path);

struct MatcherConfig {
  std::set<std::string> stopwords = default_stopwords();
  double threshold = 0.5;
  int max_order = 4;

  /// Throws DomainError unless threshold is in [0,1] and max_order >= 1.
  void check() const;
};

/// Lowercase, split on whitespace, trim punctuation from both ends of each
/// token, then drop empty tokens and stopwords.
std::vector<std::string> normalize_span(std::string_view text, const MatcherConfig& cfg = {});

double bleu_score(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
                  const MatcherConfig& cfg = {});

struct MatchResult {
  double score;
  bool match;
};

MatchResult compare_spans(std::string_view candidate, std::string_view reference, const MatcherConfig& cfg = {});

bool spans_match(std::string_view candidate, std::string_view reference, const MatcherConfig& cfg = {});

}  // namespace castbridge::span
