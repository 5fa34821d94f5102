"""Compact AST, LIR and evaluation tools."""

import json as _json

from ._core import (
    BracketError,
    DomainError,
    Error,
    FormatError,
    HarnessUnavailable,
    MalformedCast,
    ManifestError,
    SyntaxError,
    UnsupportedConstruct,
    cast_to_code,
    code_to_cast,
    compare_spans,
    normalize_span,
    pass_at_k,
    ud_to_lir,
)
from ._core import evaluate_json as _evaluate_json


def evaluate(manifest, harness=None, jobs=1, timeout=10.0):
    """Run a manifest and return the results document as a dict."""
    return _json.loads(_evaluate_json(str(manifest), harness, jobs, timeout))


__all__ = [
    "BracketError",
    "DomainError",
    "Error",
    "FormatError",
    "HarnessUnavailable",
    "MalformedCast",
    "ManifestError",
    "SyntaxError",
    "UnsupportedConstruct",
    "cast_to_code",
    "code_to_cast",
    "compare_spans",
    "evaluate",
    "normalize_span",
    "pass_at_k",
    "ud_to_lir",
]
