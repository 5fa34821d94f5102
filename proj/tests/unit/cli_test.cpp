#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fixtures.hpp"

using castbridge::testing::fixture;
using castbridge::testing::fixture_path;
using castbridge::testing::read_text;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "castbridge_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

Run cli(const std::string& args, const std::string& env = "") {
  const fs::path err = scratch() / "stderr.txt";
  std::string cmd = env + " " + quote(CASTBRIDGE_CLI) + " " + args + " 2>" + quote(err.string());
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, read_text(err.string())};
}

std::string write_scratch(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

}  // namespace

TEST_CASE("code2cast and cast2code") {
  Run r = cli("code2cast --style pretty " + quote(fixture_path("programs/resolve_from.py")));
  CHECK(r.code == 0);
  CHECK(r.out == fixture("programs/resolve_from.cast"));

  Run back = cli("cast2code " + quote(fixture_path("programs/resolve_from.cast")));
  CHECK(back.code == 0);
  std::string py = write_scratch("back.py", back.out);
  Run again = cli("code2cast --style pretty " + quote(py));
  CHECK(again.out == r.out);

  Run compact = cli("code2cast " + quote(write_scratch("x.py", "x = 1\n")));
  CHECK(compact.out == "[ Module [ x = 1 ] ]\n");
}

TEST_CASE("meeting-deletion program round trips through the CLI") {
  Run c = cli("code2cast " + quote(fixture_path("programs/delete_meetings.py")));
  REQUIRE(c.code == 0);
  Run p = cli("cast2code " + quote(write_scratch("meetings.cast", c.out)));
  REQUIRE(p.code == 0);
  Run c2 = cli("code2cast " + quote(write_scratch("meetings.py", p.out)));
  CHECK(c2.out == c.out);
}

TEST_CASE("malformed cAST exits 2") {
  Run r = cli("cast2code " + quote(fixture_path("programs/truncated.cast")));
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("UnbalancedBrackets") != std::string::npos);

  Run j = cli("cast2code --json " + quote(write_scratch("bad.cast", "[ Module [ For [ body [ f() ] ] ] ]\n")));
  CHECK(j.code == 2);
  json e = json::parse(j.err);
  CHECK(e["path"] == "/Module/0:For");
  CHECK(e.contains("error"));
  CHECK(e.contains("message"));
}

TEST_CASE("input errors exit 1") {
  CHECK(cli("code2cast /nonexistent/file.py").code == 1);
  CHECK(cli("code2cast " + quote(write_scratch("bad.py", "def f():\n    return 1\n"))).code == 1);
  CHECK(cli("code2cast " + quote(write_scratch("syntax.py", "x = (\n"))).code == 1);
  CHECK(cli("ud2lir " + quote(write_scratch("bad.conllu", "1\ta\t_\n"))).code == 1);
  CHECK(cli("match a b --threshold 2").code != 0);
  CHECK(cli("eval /nonexistent/manifest.json").code == 1);
  CHECK(cli("nosuchcommand").code != 0);
}

TEST_CASE("ud2lir reproduces the goldens and traces") {
  for (const char* name : {"unconditional", "conditional", "trigger_free", "if_otherwise"}) {
    CAPTURE(name);
    Run r = cli("ud2lir " + quote(fixture_path(std::string("ud/") + name + ".conllu")));
    CHECK(r.code == 0);
    CHECK(r.out == fixture(std::string("ud/") + name + ".lir"));
  }
  Run t = cli("ud2lir --dump-trace " + quote(fixture_path("ud/conditional.conllu")));
  CHECK(t.code == 0);
  CHECK(t.err.rfind("# S\n[ root [ S ", 0) == 0);
  CHECK(t.err.find("# Condition\n") != std::string::npos);
  CHECK(t.err.find("# Test\n") != std::string::npos);
}

TEST_CASE("match prints score and decision") {
  Run r = cli("match 'all advisors in the committee' 'Committee advisors'");
  CHECK(r.code == 0);
  CHECK(r.out == "{\n  \"match\": true,\n  \"score\": 0.707107\n}\n");
  Run strict = cli("match 'all advisors in the committee' 'Committee advisors' --threshold 0.8");
  CHECK(json::parse(strict.out)["match"] == false);
  std::string stops = write_scratch("stops.txt", "committee\n");
  Run custom = cli("match 'the committee' 'committee' --stopwords " + quote(stops));
  CHECK(json::parse(custom.out)["score"] == 0.0);
}

TEST_CASE("eval writes results and maps harness problems to exit 3") {
  const std::string manifest = quote(fixture_path("eval/taxonomy/manifest.json"));
  Run missing = cli("eval " + manifest, "env -u CASTBRIDGE_HARNESS");
  CHECK(missing.code == 3);

  const std::string out = (scratch() / "results.json").string();
  Run ok = cli("eval --jobs 3 --output " + quote(out) + " " + manifest,
               "CASTBRIDGE_HARNESS=" + quote(CASTBRIDGE_STUB_HARNESS));
  CHECK(ok.code == 0);
  json doc = json::parse(read_text(out));
  CHECK(doc["problems"][0]["c"] == 1);
  for (const char* c : {"pass", "syntactic", "logical", "semantic"}) CHECK(doc["summary"]["categories"][c] == 0.25);

  Run gate = cli("eval " + quote(fixture_path("eval/gate/manifest.json")), "env -u CASTBRIDGE_HARNESS");
  CHECK(gate.code == 0);
  CHECK(json::parse(gate.out)["summary"]["counts"]["syntactic"] == 4);
}
