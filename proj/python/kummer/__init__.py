"""Kummer's test for positive series.

>>> import json, kummer
>>> json.loads(kummer.analyze("1/n^2", probe_window=500))["fused"]["outcome"]
'converges'
"""

import json as _json

from ._kummer import (
    ArgumentError,
    DomainError,
    KummerError,
    ParseError,
    PositivityViolation,
    ResourceError,
    Series,
    analyze,
    canonical,
    default_corpus_path,
    is_exact,
    kummer_sequence,
    run_corpus,
)


def analyze_dict(expression, **kwargs):
    """`analyze` with the JSON report decoded."""
    return _json.loads(analyze(expression, format="json", **kwargs))


__all__ = [
    "ArgumentError",
    "DomainError",
    "KummerError",
    "ParseError",
    "PositivityViolation",
    "ResourceError",
    "Series",
    "analyze",
    "analyze_dict",
    "canonical",
    "default_corpus_path",
    "is_exact",
    "kummer_sequence",
    "run_corpus",
]
