// castbridge: command-line front end.
//
//   castbridge code2cast prog.py [--style compact|pretty]
//   castbridge cast2code prog.cast [--json]
//   castbridge ud2lir sentences.conllu [--dump-trace]
//   castbridge match "<candidate>" "<reference>" [--threshold 0.5] [--stopwords file]
//   castbridge eval manifest.json [--output results.json] [--jobs N] [--timeout S]
//
// Exit status: 0 ok, 1 input error, 2 malformed cAST, 3 harness unavailable.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "castbridge/bracket.hpp"
#include "castbridge/cast.hpp"
#include "castbridge/eval.hpp"
#include "castbridge/json_out.hpp"
#include "castbridge/span_match.hpp"
#include "castbridge/syntax.hpp"
#include "castbridge/ud.hpp"

namespace {

using namespace castbridge;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kMalformedCast = 2;
constexpr int kHarnessUnavailable = 3;

struct InputError : Error {
  using Error::Error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int code2cast(const std::string& path, const std::string& style) {
  auto program = syntax::parse_program(slurp(path));
  auto tree = cast::compactize(program);
  std::cout << bracket::linearize(tree, style == "pretty" ? bracket::Style::Pretty : bracket::Style::Compact) << "\n";
  return kOk;
}

int cast2code(const std::string& path, bool as_json) {
  const std::string text = slurp(path);
  auto report = [&](const std::string& kind, const std::string& where, const std::string& message) {
    if (as_json)
      std::cerr << json{{"error", kind}, {"path", where}, {"message", message}}.dump() << "\n";
    else
      std::cerr << "castbridge: " << message << "\n";
    return kMalformedCast;
  };
  try {
    auto tree = bracket::parse_bracket(text, cast::labels());
    std::cout << syntax::unparse(cast::expand(tree));
    return kOk;
  } catch (const bracket::BracketError& e) {
    return report(std::string(bracket::to_string(e.kind())), fmt::format("{}:{}", e.line(), e.column()), e.what());
  } catch (const cast::MalformedCast& e) {
    return report("MalformedCast", e.path(), e.what());
  }
}

int ud2lir(const std::string& path, bool dump_trace) {
  auto sentences = ud::read_conllu(slurp(path));
  for (const auto& s : sentences) {
    ud::TraceFn trace;
    if (dump_trace) {
      trace = [](ud::Rule r, const ud::LirTree& t) {
        std::cerr << "# " << ud::rule_name(r) << "\n" << ud::lir_to_bracket(t) << "\n";
      };
    }
    std::cout << ud::sentence_to_lir(s, trace) << "\n";
  }
  return kOk;
}

int match(const std::string& candidate, const std::string& reference, double threshold,
          const std::string& stopwords) {
  span::MatcherConfig cfg;
  cfg.threshold = threshold;
  if (!stopwords.empty()) cfg.stopwords = span::load_stopwords(stopwords);
  cfg.check();
  auto r = span::compare_spans(candidate, reference, cfg);
  std::cout << canonical_json(json{{"score", r.score}, {"match", r.match}});
  return kOk;
}

int evaluate(const std::string& manifest_path, const std::string& output, int jobs, double timeout) {
  auto manifest = eval::load_manifest(manifest_path);
  eval::EvalOptions opts;
  opts.jobs = jobs;
  opts.timeout_s = timeout;
  auto results = eval::evaluate(manifest, opts);
  std::string text = canonical_json(eval::results_document(results, manifest.k_values));
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write '{}'", output));
    out << text;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact AST, LIR and evaluation tools"};
  app.require_subcommand(1);

  std::string file, style = "compact", second, output, stopwords;
  bool as_json = false, dump_trace = false;
  double threshold = 0.5, timeout = 10.0;
  int jobs = 1;

  auto* c2c = app.add_subcommand("code2cast", "Python source to bracketed cAST");
  c2c->add_option("file", file, "source file")->required();
  c2c->add_option("--style", style, "compact or pretty")->check(CLI::IsMember({"compact", "pretty"}));

  auto* c2s = app.add_subcommand("cast2code", "bracketed cAST to Python source");
  c2s->add_option("file", file, "cAST file")->required();
  c2s->add_flag("--json", as_json, "report errors as JSON on stderr");

  auto* u2l = app.add_subcommand("ud2lir", "CoNLL-U to LIR, one bracket document per sentence");
  u2l->add_option("file", file, "CoNLL-U file")->required();
  u2l->add_flag("--dump-trace", dump_trace, "print the tree after every rule firing to stderr");

  auto* m = app.add_subcommand("match", "fuzzy span comparison");
  m->add_option("candidate", file, "span from generated code")->required();
  m->add_option("reference", second, "expected span")->required();
  m->add_option("--threshold", threshold, "BLEU threshold")->check(CLI::Range(0.0, 1.0));
  m->add_option("--stopwords", stopwords, "stopword file");

  auto* ev = app.add_subcommand("eval", "run a manifest and report pass@k");
  ev->add_option("manifest", file, "manifest JSON")->required();
  ev->add_option("--output", output, "write results here instead of stdout");
  ev->add_option("--jobs", jobs, "concurrent harness processes")->check(CLI::PositiveNumber);
  ev->add_option("--timeout", timeout, "per-sample timeout in seconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*c2c) return code2cast(file, style);
    if (*c2s) return cast2code(file, as_json);
    if (*u2l) return ud2lir(file, dump_trace);
    if (*m) return match(file, second, threshold, stopwords);
    if (*ev) return evaluate(file, output, jobs, timeout);
  } catch (const eval::HarnessUnavailable& e) {
    std::cerr << "castbridge: " << e.what() << "\n";
    return kHarnessUnavailable;
  } catch (const cast::MalformedCast& e) {
    std::cerr << "castbridge: " << e.what() << "\n";
    return kMalformedCast;
  } catch (const std::exception& e) {
    std::cerr << "castbridge: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
