#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "castbridge/error.hpp"

namespace castbridge::metrics {

/// Unbiased pass@k estimate from n samples with c correct:
///   1 - C(n-c, k) / C(n, k) = 1 - prod_{j<k} (n-c-j) / (n-j)
/// Throws DomainError unless 0 <= c <= n and 1 <= k <= n.
double pass_at_k(long long n, long long c, long long k);

enum class Category { Pass, Syntactic, Logical, Semantic };

inline constexpr std::array<Category, 4> kCategories = {Category::Pass, Category::Syntactic, Category::Logical,
                                                        Category::Semantic};

/// "pass", "syntactic", "logical", "semantic".
std::string_view to_string(Category c);

struct SampleOutcome {
  Category category = Category::Pass;
  std::string detail;

  bool operator==(const SampleOutcome&) const = default;
};

enum class HarnessStatus { Ok, Exception, AssertionFailure, Timeout };

std::string_view to_string(HarnessStatus s);
/// Throws Error on an unknown name.
HarnessStatus harness_status_from_string(std::string_view s);

struct StageResult {
  bool ok = true;
  std::string detail;
};

/// What happened to one sample. Stages that did not run stay empty. For
/// source-mode samples the parse is recorded as the expansion stage.
struct StageTrace {
  std::optional<StageResult> bracket;
  std::optional<StageResult> expansion;
  std::optional<HarnessStatus> harness;
  std::string harness_detail;
};

/// Bracket or expansion failure is syntactic; a harness exception or timeout
/// is logical; an assertion failure is semantic; anything else passes.
SampleOutcome classify_sample(const StageTrace& trace);

struct ProblemResult {
  std::string id;
  int n = 0;
  int c = 0;
  std::vector<SampleOutcome> outcomes;
};

ProblemResult make_result(std::string id, std::vector<SampleOutcome> outcomes);

struct MeanStd {
  double mean;
  double std;  // sample standard deviation, 0 for a single problem
};

/// Throws DomainError on empty input or when some problem has n < k.
MeanStd mean_pass_at_k(const std::vector<ProblemResult>& results, long long k);

struct CategoryStat {
  std::size_t count = 0;
  double fraction = 0.0;
};

struct Summary {
  std::size_t total = 0;
  std::array<CategoryStat, 4> categories{};  // indexed like kCategories

  const CategoryStat& operator[](Category c) const { return categories[static_cast<std::size_t>(c)]; }
};

/// Fractions are over all samples of all problems; all zero when there are
/// no samples.
Summary summarize(const std::vector<ProblemResult>& results);

}  // namespace castbridge::metrics
