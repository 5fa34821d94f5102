// Stand-in execution harness for tests. Reads one request from stdin and
// judges the code against the scenario without running it:
//
//   {"expected_code": "...", "exception_markers": ["..."]}
//
//   code contains "while True"        -> never answers
//   code contains "HARNESS_CRASH"     -> aborts
//   code contains "HARNESS_GARBAGE"   -> answers with non-JSON
//   code contains a marker            -> exception
//   code parses to expected_code      -> ok
//   otherwise                         -> assertion_failure

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>

#include <json.hpp>

#include "castbridge/syntax.hpp"

using nlohmann::json;

namespace {

void answer(const char* status, const std::string& detail) {
  std::cout << json{{"status", status}, {"detail", detail}, {"mutations", json::object()}}.dump() << "\n";
}

}  // namespace

int main() {
  std::string input{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  json req = json::parse(input);
  const std::string code = req.at("code").get<std::string>();
  const json scenario = req.value("scenario", json::object());

  if (code.find("while True") != std::string::npos)
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
  if (code.find("HARNESS_CRASH") != std::string::npos) std::abort();
  if (code.find("HARNESS_GARBAGE") != std::string::npos) {
    std::cout << "this is not json\n";
    return 0;
  }
  for (const auto& m : scenario.value("exception_markers", json::array())) {
    std::string marker = m.get<std::string>();
    if (code.find(marker) != std::string::npos) {
      answer("exception", "TypeError: '" + marker + "' is not iterable");
      return 0;
    }
  }
  try {
    auto got = castbridge::syntax::parse_program(code);
    auto want = castbridge::syntax::parse_program(scenario.value("expected_code", std::string()));
    if (got == want)
      answer("ok", "");
    else
      answer("assertion_failure", "expected the program to produce the scenario's state");
  } catch (const castbridge::Error& e) {
    answer("exception", e.what());
  }
  return 0;
}
