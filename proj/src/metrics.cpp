#include "castbridge/metrics.hpp"

#include <fmt/format.h>

#include <cmath>

namespace castbridge::metrics {

double pass_at_k(long long n, long long c, long long k) {
  if (n < 0 || c < 0 || k < 0) throw DomainError(fmt::format("pass@k inputs must be non-negative: n={} c={} k={}", n, c, k));
  if (c > n) throw DomainError(fmt::format("c={} exceeds n={}", c, n));
  if (k < 1 || k > n) throw DomainError(fmt::format("k={} must lie in [1, n={}]", k, n));
  if (n - c < k) return 1.0;
  double miss = 1.0;
  for (long long j = 0; j < k; ++j) miss *= static_cast<double>(n - c - j) / static_cast<double>(n - j);
  return 1.0 - miss;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Pass: return "pass";
    case Category::Syntactic: return "syntactic";
    case Category::Logical: return "logical";
    case Category::Semantic: return "semantic";
  }
  return "?";
}

std::string_view to_string(HarnessStatus s) {
  switch (s) {
    case HarnessStatus::Ok: return "ok";
    case HarnessStatus::Exception: return "exception";
    case HarnessStatus::AssertionFailure: return "assertion_failure";
    case HarnessStatus::Timeout: return "timeout";
  }
  return "?";
}

HarnessStatus harness_status_from_string(std::string_view s) {
  for (auto st : {HarnessStatus::Ok, HarnessStatus::Exception, HarnessStatus::AssertionFailure, HarnessStatus::Timeout})
    if (to_string(st) == s) return st;
  throw Error(fmt::format("unknown harness status '{}'", s));
}

SampleOutcome classify_sample(const StageTrace& trace) {
  if (trace.bracket && !trace.bracket->ok) return {Category::Syntactic, trace.bracket->detail};
  if (trace.expansion && !trace.expansion->ok) return {Category::Syntactic, trace.expansion->detail};
  if (!trace.harness) return {Category::Pass, ""};
  switch (*trace.harness) {
    case HarnessStatus::Ok: return {Category::Pass, trace.harness_detail};
    case HarnessStatus::Exception: return {Category::Logical, trace.harness_detail};
    case HarnessStatus::Timeout:
      return {Category::Logical, trace.harness_detail.empty() ? "timeout" : trace.harness_detail};
    case HarnessStatus::AssertionFailure: return {Category::Semantic, trace.harness_detail};
  }
  return {Category::Pass, ""};
}

ProblemResult make_result(std::string id, std::vector<SampleOutcome> outcomes) {
  ProblemResult r;
  r.id = std::move(id);
  r.n = static_cast<int>(outcomes.size());
  for (const auto& o : outcomes)
    if (o.category == Category::Pass) ++r.c;
  r.outcomes = std::move(outcomes);
  return r;
}

MeanStd mean_pass_at_k(const std::vector<ProblemResult>& results, long long k) {
  if (results.empty()) throw DomainError("mean pass@k over no problems");
  std::vector<double> values;
  values.reserve(results.size());
  for (const auto& r : results) values.push_back(pass_at_k(r.n, r.c, k));
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

Summary summarize(const std::vector<ProblemResult>& results) {
  Summary s;
  for (const auto& r : results) {
    for (const auto& o : r.outcomes) {
      ++s.categories[static_cast<std::size_t>(o.category)].count;
      ++s.total;
    }
  }
  if (s.total == 0) return s;
  for (auto& c : s.categories) c.fraction = static_cast<double>(c.count) / static_cast<double>(s.total);
  return s;
}

}  // namespace castbridge::metrics
