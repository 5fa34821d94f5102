#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "castbridge/bracket.hpp"
#include "castbridge/cast.hpp"
#include "castbridge/eval.hpp"
#include "castbridge/json_out.hpp"
#include "castbridge/metrics.hpp"
#include "castbridge/span_match.hpp"
#include "castbridge/syntax.hpp"
#include "castbridge/ud.hpp"

namespace py = pybind11;
using namespace castbridge;

namespace {

bracket::Style style_of(const std::string& name) {
  if (name == "compact") return bracket::Style::Compact;
  if (name == "pretty") return bracket::Style::Pretty;
  throw py::value_error("style must be 'compact' or 'pretty'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compact AST, LIR and evaluation tools";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<syntax::SyntaxError>(m, "SyntaxError", error);
  py::register_exception<syntax::UnsupportedConstruct>(m, "UnsupportedConstruct", error);
  py::register_exception<bracket::BracketError>(m, "BracketError", error);
  py::register_exception<cast::MalformedCast>(m, "MalformedCast", error);
  py::register_exception<ud::FormatError>(m, "FormatError", error);
  py::register_exception<eval::ManifestError>(m, "ManifestError", error);
  py::register_exception<eval::HarnessUnavailable>(m, "HarnessUnavailable", error);

  m.def(
      "code_to_cast",
      [](const std::string& source, const std::string& style) {
        return bracket::linearize(cast::compactize(syntax::parse_program(source)), style_of(style));
      },
      py::arg("source"), py::arg("style") = "compact");

  m.def(
      "cast_to_code",
      [](const std::string& text) {
        return syntax::unparse(cast::expand(bracket::parse_bracket(text, cast::labels())));
      },
      py::arg("text"));

  m.def(
      "ud_to_lir",
      [](const std::string& conllu) {
        std::vector<std::string> out;
        for (const auto& s : ud::read_conllu(conllu)) out.push_back(ud::sentence_to_lir(s));
        return out;
      },
      py::arg("conllu"));

  m.def(
      "normalize_span", [](const std::string& text) { return span::normalize_span(text); }, py::arg("text"));

  m.def(
      "compare_spans",
      [](const std::string& candidate, const std::string& reference, double threshold) {
        span::MatcherConfig cfg;
        cfg.threshold = threshold;
        cfg.check();
        auto r = span::compare_spans(candidate, reference, cfg);
        return py::make_tuple(r.score, r.match);
      },
      py::arg("candidate"), py::arg("reference"), py::arg("threshold") = 0.5);

  m.def("pass_at_k", &metrics::pass_at_k, py::arg("n"), py::arg("c"), py::arg("k"));

  m.def(
      "evaluate_json",
      [](const std::string& manifest_path, std::optional<std::string> harness, int jobs, double timeout) {
        eval::Manifest manifest = eval::load_manifest(manifest_path);
        eval::EvalOptions options;
        options.jobs = jobs;
        options.timeout_s = timeout;
        options.harness_override = std::move(harness);
        std::vector<metrics::ProblemResult> results;
        {
          py::gil_scoped_release release;
          results = eval::evaluate(manifest, options);
        }
        return canonical_json(eval::results_document(results, manifest.k_values));
      },
      py::arg("manifest"), py::arg("harness") = py::none(), py::arg("jobs") = 1, py::arg("timeout") = 10.0);
}
