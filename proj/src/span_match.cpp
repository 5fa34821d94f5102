#include "castbridge/span_match.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace castbridge::span {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

using Gram = std::vector<std::string>;

std::map<Gram, int> count_grams(const std::vector<std::string>& tokens, std::size_t order) {
  std::map<Gram, int> out;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i)
    ++out[Gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
               tokens.begin() + static_cast<std::ptrdiff_t>(i + order))];
  return out;
}

// Clipped matches of candidate n-grams against the reference.
int clipped_matches(const std::map<Gram, int>& cand, const std::map<Gram, int>& ref) {
  int m = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) m += std::min(count, it->second);
  }
  return m;
}

}  // namespace

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {"the", "a",    "an",   "this", "that", "these", "those", "my",
                                              "your", "his", "her",  "its",  "our",  "their", "all",   "of",
                                              "in",  "on",   "at",   "to",   "for",  "from",  "with",  "by",
                                              "about", "as", "into", "over", "after", "before"};
  return words;
}

std::set<std::string> parse_stopwords(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
      out.insert(w);
    }
  }
  return out;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read stopword file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stopwords(buf.str());
}

void MatcherConfig::check() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError(fmt::format("threshold {} is outside [0,1]", threshold));
  if (max_order < 1) throw DomainError(fmt::format("max_order must be at least 1, got {}", max_order));
}

std::vector<std::string> normalize_span(std::string_view text, const MatcherConfig& cfg) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::string_view tok = text.substr(start, i - start);
    while (!tok.empty() && is_punct(tok.front())) tok.remove_prefix(1);
    while (!tok.empty() && is_punct(tok.back())) tok.remove_suffix(1);
    if (tok.empty()) continue;
    std::string word(tok);
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) { return std::tolower(c); });
    if (cfg.stopwords.count(word)) continue;
    out.push_back(std::move(word));
  }
  return out;
}

double bleu_score(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
                  const MatcherConfig& cfg) {
  cfg.check();
  const std::size_t n = std::min({static_cast<std::size_t>(cfg.max_order), candidate.size(), reference.size()});
  if (n == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t order = 1; order <= n; ++order) {
    int matches = clipped_matches(count_grams(candidate, order), count_grams(reference, order));
    int total = static_cast<int>(candidate.size() - order + 1);
    if (order == 1) {
      if (matches == 0) return 0.0;
      if (matches == total) continue;  // ln 1, kept exact
      log_sum += std::log(static_cast<double>(matches) / total);
    } else if (matches != total) {
      log_sum += std::log(static_cast<double>(matches + 1) / (total + 1));
    }
  }
  double bp = candidate.size() >= reference.size()
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(reference.size()) / static_cast<double>(candidate.size()));
  if (log_sum == 0.0) return bp;
  return std::clamp(bp * std::exp(log_sum / static_cast<double>(n)), 0.0, 1.0);
}

MatchResult compare_spans(std::string_view candidate, std::string_view reference, const MatcherConfig& cfg) {
  double s = bleu_score(normalize_span(candidate, cfg), normalize_span(reference, cfg), cfg);
  return {s, s >= cfg.threshold};
}

bool spans_match(std::string_view candidate, std::string_view reference, const MatcherConfig& cfg) {
  return compare_spans(candidate, reference, cfg).match;
}

}  // namespace castbridge::span
