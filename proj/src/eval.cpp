#include "castbridge/eval.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "castbridge/bracket.hpp"
#include "castbridge/cast.hpp"
#include "castbridge/syntax.hpp"

namespace castbridge::eval {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ManifestError(fmt::format("cannot read '{}'", p.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

class Fd {
 public:
  Fd() = default;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  int get() const { return fd_; }
  void adopt(int fd) {
    reset();
    fd_ = fd;
  }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read;
  Fd write;
};

void open_pipe(Pipe& p) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw Error(fmt::format("pipe: {}", std::strerror(errno)));
  p.read.adopt(fds[0]);
  p.write.adopt(fds[1]);
}

// Keeps a broken stdin pipe from raising SIGPIPE in this thread; any
// SIGPIPE generated meanwhile is discarded on exit.
class SigpipeGuard {
 public:
  SigpipeGuard() {
    sigemptyset(&pipe_set_);
    sigaddset(&pipe_set_, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &pipe_set_, &old_);
  }
  ~SigpipeGuard() {
    timespec zero{0, 0};
    while (sigtimedwait(&pipe_set_, nullptr, &zero) > 0) {
    }
    pthread_sigmask(SIG_SETMASK, &old_, nullptr);
  }
  const sigset_t& old_mask() const { return old_; }

 private:
  sigset_t pipe_set_;
  sigset_t old_;
};

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left <= 0 ? 0 : static_cast<int>(std::min<long long>(left, 1 << 30));
}

void kill_and_reap(pid_t pid) {
  ::kill(pid, SIGKILL);
  int st = 0;
  while (::waitpid(pid, &st, 0) < 0 && errno == EINTR) {
  }
}

std::string tail(const std::string& s, std::size_t limit = 400) {
  return s.size() <= limit ? s : "..." + s.substr(s.size() - limit);
}

}  // namespace

Manifest parse_manifest(const json& doc, const fs::path& base_dir) {
  Manifest m;
  try {
    if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");
    if (!doc.contains("problems") || !doc["problems"].is_array()) throw ManifestError("manifest needs a problems array");
    std::set<std::string> ids;
    for (const auto& p : doc["problems"]) {
      ProblemSpec spec;
      spec.id = p.at("id").get<std::string>();
      if (!ids.insert(spec.id).second) throw ManifestError(fmt::format("duplicate problem id '{}'", spec.id));
      spec.samples_path = base_dir / p.at("samples_path").get<std::string>();
      if (p.contains("scenario_path") && !p["scenario_path"].is_null())
        spec.scenario_path = base_dir / p["scenario_path"].get<std::string>();
      std::string mode = p.value("mode", std::string("cast"));
      if (mode == "cast")
        spec.mode = Mode::Cast;
      else if (mode == "code")
        spec.mode = Mode::Code;
      else
        throw ManifestError(fmt::format("problem '{}': unknown mode '{}'", spec.id, mode));
      m.problems.push_back(std::move(spec));
    }
    if (doc.contains("k_values")) {
      for (const auto& k : doc["k_values"]) m.k_values.push_back(k.get<int>());
    } else {
      m.k_values = {1};
    }
    if (doc.contains("harness_endpoint")) m.harness_endpoint = doc["harness_endpoint"].get<std::string>();
  } catch (const json::exception& e) {
    throw ManifestError(fmt::format("invalid manifest: {}", e.what()));
  }
  if (m.problems.empty()) throw DomainError("manifest lists no problems");
  for (int k : m.k_values)
    if (k < 1) throw DomainError(fmt::format("k value {} must be at least 1", k));
  return m;
}

Manifest load_manifest(const fs::path& path) {
  std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ManifestError(fmt::format("'{}' is not JSON: {}", path.string(), e.what()));
  }
  return parse_manifest(doc, path.parent_path());
}

HarnessClient::HarnessClient(std::string command) : argv_(split_words(command)) {
  if (argv_.empty()) throw HarnessUnavailable("empty harness command");
}

HarnessResponse HarnessClient::run(const json& scenario, const std::string& code, double timeout_s) const {
  const std::string request = json{{"scenario", scenario}, {"code", code}, {"timeout_s", timeout_s}}.dump() + "\n";
  std::vector<char*> args;
  for (const auto& a : argv_) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  Pipe in, out, err, exec_status;
  open_pipe(in);
  open_pipe(out);
  open_pipe(err);
  open_pipe(exec_status);
  SigpipeGuard guard;

  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_s));
  pid_t pid = ::fork();
  if (pid < 0) throw Error(fmt::format("fork: {}", std::strerror(errno)));
  if (pid == 0) {
    ::dup2(in.read.get(), 0);
    ::dup2(out.write.get(), 1);
    ::dup2(err.write.get(), 2);
    sigset_t none;
    sigemptyset(&none);
    ::sigprocmask(SIG_SETMASK, &none, nullptr);
    ::execvp(args[0], args.data());
    int e = errno;
    [[maybe_unused]] auto n = ::write(exec_status.write.get(), &e, sizeof e);
    ::_exit(127);
  }
  in.read.reset();
  out.write.reset();
  err.write.reset();
  exec_status.write.reset();

  int exec_errno = 0;
  ssize_t got;
  do {
    got = ::read(exec_status.read.get(), &exec_errno, sizeof exec_errno);
  } while (got < 0 && errno == EINTR);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    int st = 0;
    ::waitpid(pid, &st, 0);
    throw HarnessUnavailable(fmt::format("cannot execute harness '{}': {}", argv_[0], std::strerror(exec_errno)));
  }

  ::fcntl(in.write.get(), F_SETFL, ::fcntl(in.write.get(), F_GETFL) | O_NONBLOCK);
  std::string stdout_text, stderr_text;
  std::size_t written = 0;
  bool out_open = true, err_open = true;
  char buf[4096];
  while (out_open || err_open) {
    pollfd fds[3];
    nfds_t count = 0;
    int in_slot = -1, out_slot = -1, err_slot = -1;
    if (in.write.get() >= 0) {
      fds[count] = {in.write.get(), POLLOUT, 0};
      in_slot = static_cast<int>(count++);
    }
    if (out_open) {
      fds[count] = {out.read.get(), POLLIN, 0};
      out_slot = static_cast<int>(count++);
    }
    if (err_open) {
      fds[count] = {err.read.get(), POLLIN, 0};
      err_slot = static_cast<int>(count++);
    }
    int wait = remaining_ms(deadline);
    if (wait == 0) {
      kill_and_reap(pid);
      return {metrics::HarnessStatus::Timeout, fmt::format("no answer within {} s", timeout_s), json::object()};
    }
    int ready = ::poll(fds, count, wait);
    if (ready < 0) {
      if (errno == EINTR) continue;
      kill_and_reap(pid);
      throw Error(fmt::format("poll: {}", std::strerror(errno)));
    }
    if (in_slot >= 0 && fds[in_slot].revents) {
      ssize_t n = ::write(in.write.get(), request.data() + written, request.size() - written);
      if (n > 0) written += static_cast<std::size_t>(n);
      if ((n < 0 && errno != EAGAIN && errno != EINTR) || written == request.size()) in.write.reset();
    }
    auto drain = [&](int slot, Fd& fd, std::string& sink, bool& open) {
      if (slot < 0 || !fds[slot].revents) return;
      ssize_t n = ::read(fd.get(), buf, sizeof buf);
      if (n > 0)
        sink.append(buf, static_cast<std::size_t>(n));
      else if (n == 0 || (errno != EAGAIN && errno != EINTR))
        open = false;
    };
    drain(out_slot, out.read, stdout_text, out_open);
    drain(err_slot, err.read, stderr_text, err_open);
  }
  in.write.reset();

  int st = 0;
  while (true) {
    pid_t r = ::waitpid(pid, &st, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) break;
    if (remaining_ms(deadline) == 0) {
      kill_and_reap(pid);
      return {metrics::HarnessStatus::Timeout, fmt::format("harness did not exit within {} s", timeout_s),
              json::object()};
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }

  HarnessResponse resp;
  json doc;
  try {
    doc = json::parse(stdout_text);
    resp.status = metrics::harness_status_from_string(doc.at("status").get<std::string>());
    resp.detail = doc.value("detail", std::string());
    if (doc.contains("mutations")) resp.mutations = doc["mutations"];
    return resp;
  } catch (const std::exception& e) {
    std::string why = WIFEXITED(st)     ? fmt::format("exit status {}", WEXITSTATUS(st))
                      : WIFSIGNALED(st) ? fmt::format("signal {}", WTERMSIG(st))
                                        : std::string("unknown exit");
    resp.status = metrics::HarnessStatus::Exception;
    resp.detail = fmt::format("harness failed ({}): {} {}", why, e.what(), tail(stderr_text));
    return resp;
  }
}

metrics::StageTrace run_sample(const std::string& text, Mode mode, const HarnessClient* harness, const json& scenario,
                               double timeout_s) {
  metrics::StageTrace trace;
  syntax::Program program;
  if (mode == Mode::Cast) {
    Tree tree;
    try {
      tree = bracket::parse_bracket(text, cast::labels());
      trace.bracket = metrics::StageResult{true, ""};
    } catch (const bracket::BracketError& e) {
      trace.bracket = metrics::StageResult{false, e.what()};
      return trace;
    }
    try {
      program = cast::expand(tree);
      trace.expansion = metrics::StageResult{true, ""};
    } catch (const Error& e) {
      trace.expansion = metrics::StageResult{false, e.what()};
      return trace;
    }
  } else {
    try {
      program = syntax::parse_program(text);
      trace.expansion = metrics::StageResult{true, ""};
    } catch (const Error& e) {
      trace.expansion = metrics::StageResult{false, e.what()};
      return trace;
    }
  }
  if (!harness) return trace;
  std::string code = mode == Mode::Cast ? syntax::unparse(program) : text;
  HarnessResponse resp = harness->run(scenario, code, timeout_s);
  trace.harness = resp.status;
  trace.harness_detail = resp.detail;
  return trace;
}

std::vector<metrics::ProblemResult> evaluate(const Manifest& manifest, const EvalOptions& options) {
  if (manifest.problems.empty()) throw DomainError("manifest lists no problems");

  std::string endpoint = manifest.harness_endpoint;
  if (const char* env = std::getenv("CASTBRIDGE_HARNESS"); env && *env) endpoint = env;
  if (options.harness_override) endpoint = *options.harness_override;

  struct Task {
    std::size_t problem;
    std::string text;
  };
  std::vector<Task> tasks;
  std::vector<json> scenarios(manifest.problems.size());
  std::vector<double> timeouts(manifest.problems.size(), options.timeout_s);
  std::vector<std::size_t> first_task(manifest.problems.size());
  bool needs_harness = false;
  for (std::size_t p = 0; p < manifest.problems.size(); ++p) {
    const auto& spec = manifest.problems[p];
    if (!fs::is_directory(spec.samples_path))
      throw ManifestError(fmt::format("problem '{}': samples_path '{}' is not a directory", spec.id,
                                      spec.samples_path.string()));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(spec.samples_path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    first_task[p] = tasks.size();
    for (const auto& f : files) tasks.push_back({p, read_file(f)});
    if (spec.scenario_path) {
      needs_harness = true;
      try {
        scenarios[p] = json::parse(read_file(*spec.scenario_path));
      } catch (const json::exception& e) {
        throw ManifestError(fmt::format("problem '{}': scenario is not JSON: {}", spec.id, e.what()));
      }
      if (scenarios[p].is_object() && scenarios[p].contains("timeout_s"))
        timeouts[p] = scenarios[p]["timeout_s"].get<double>();
    }
  }

  for (std::size_t p = 0; p < manifest.problems.size(); ++p) {
    std::size_t n = (p + 1 < manifest.problems.size() ? first_task[p + 1] : tasks.size()) - first_task[p];
    for (int k : manifest.k_values)
      if (static_cast<std::size_t>(k) > n)
        throw DomainError(fmt::format("k={} exceeds the {} samples of problem '{}'", k, n, manifest.problems[p].id));
  }

  std::optional<HarnessClient> client;
  if (needs_harness) {
    if (endpoint.empty() || endpoint == "none")
      throw HarnessUnavailable("a problem has a scenario but no harness endpoint is configured");
    client.emplace(endpoint);
  }

  std::vector<metrics::StageTrace> traces(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (!stop) {
      std::size_t i = next++;
      if (i >= tasks.size()) return;
      const auto& task = tasks[i];
      const auto& spec = manifest.problems[task.problem];
      try {
        traces[i] = run_sample(task.text, spec.mode, spec.scenario_path ? &*client : nullptr, scenarios[task.problem],
                               timeouts[task.problem]);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<metrics::ProblemResult> results;
  for (std::size_t p = 0; p < manifest.problems.size(); ++p) {
    std::size_t end = p + 1 < manifest.problems.size() ? first_task[p + 1] : tasks.size();
    std::vector<metrics::SampleOutcome> outcomes;
    for (std::size_t i = first_task[p]; i < end; ++i) outcomes.push_back(metrics::classify_sample(traces[i]));
    results.push_back(metrics::make_result(manifest.problems[p].id, std::move(outcomes)));
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return results;
}

json results_document(const std::vector<metrics::ProblemResult>& results, const std::vector<int>& k_values) {
  json problems = json::array();
  for (const auto& r : results) {
    json outcomes = json::array();
    for (const auto& o : r.outcomes) outcomes.push_back(std::string(metrics::to_string(o.category)));
    problems.push_back({{"id", r.id}, {"n", r.n}, {"c", r.c}, {"outcomes", outcomes}, {"k_values", k_values}});
  }
  json pass_at = json::object();
  for (int k : k_values) {
    auto [mean, sd] = metrics::mean_pass_at_k(results, k);
    pass_at[std::to_string(k)] = {{"mean", mean}, {"std", sd}};
  }
  auto summary = metrics::summarize(results);
  json fractions = json::object();
  json counts = json::object();
  for (auto c : metrics::kCategories) {
    std::string name(metrics::to_string(c));
    fractions[name] = summary[c].fraction;
    counts[name] = summary[c].count;
  }
  return {{"problems", problems},
          {"summary", {{"pass_at", pass_at}, {"categories", fractions}, {"counts", counts}, {"samples", summary.total}}}};
}

}  // namespace castbridge::eval
