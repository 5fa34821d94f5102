#pragma once

// End-to-end evaluation: load a manifest, gate every sample syntactically,
// run the survivors through the execution harness and aggregate pass@k.
//
// Manifest (paths relative to the manifest file):
//   {"problems": [{"id": "p1", "samples_path": "p1/samples", "mode": "cast",
//                  "scenario_path": "p1/scenario.json"}],
//    "k_values": [1, 2],
//    "harness_endpoint": "none"}
//
// samples_path names a directory; each regular file in it is one sample, in
// filename order. A problem without scenario_path is only gated.
//
// Harness protocol: one child process per sample. The request
//   {"scenario": <scenario file contents>, "code": "<source>", "timeout_s": 10}
// is written to its stdin; it answers on stdout with
//   {"status": "ok" | "exception" | "assertion_failure" | "timeout",
//    "detail": "...", "mutations": {...}}

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "castbridge/error.hpp"
#include "castbridge/metrics.hpp"

namespace castbridge::eval {

/// Bad or unreadable manifest.
class ManifestError : public Error {
 public:
  using Error::Error;
};

/// The harness is required but cannot be started.
class HarnessUnavailable : public Error {
 public:
  using Error::Error;
};

enum class Mode { Cast, Code };

struct ProblemSpec {
  std::string id;
  std::filesystem::path samples_path;
  std::optional<std::filesystem::path> scenario_path;
  Mode mode = Mode::Cast;
};

struct Manifest {
  std::vector<ProblemSpec> problems;
  std::vector<int> k_values;
  std::string harness_endpoint = "none";
};

/// Throws ManifestError; an empty problem list is a DomainError.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir);

struct HarnessResponse {
  metrics::HarnessStatus status = metrics::HarnessStatus::Ok;
  std::string detail;
  nlohmann::json mutations = nlohmann::json::object();
};

/// Runs the harness command, split on whitespace and executed without a
/// shell. The child is killed after the timeout.
class HarnessClient {
 public:
  explicit HarnessClient(std::string command);

  /// A child that crashes or answers garbage yields status exception; a
  /// command that cannot be executed throws HarnessUnavailable.
  HarnessResponse run(const nlohmann::json& scenario, const std::string& code, double timeout_s) const;

 private:
  std::vector<std::string> argv_;
};

struct EvalOptions {
  int jobs = 1;
  double timeout_s = 10.0;
  /// Replaces the manifest's harness_endpoint when set.
  std::optional<std::string> harness_override;
};

/// Returns problem results sorted by id.
std::vector<metrics::ProblemResult> evaluate(const Manifest& manifest, const EvalOptions& options = {});

/// Judges one sample's text; `harness` may be null when there is no scenario.
metrics::StageTrace run_sample(const std::string& text, Mode mode, const HarnessClient* harness,
                               const nlohmann::json& scenario, double timeout_s);

/// Results document: {"problems": [...], "summary": {...}}.
nlohmann::json results_document(const std::vector<metrics::ProblemResult>& results, const std::vector<int>& k_values);

}  // namespace castbridge::eval
