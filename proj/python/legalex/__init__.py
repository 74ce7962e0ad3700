"""Entity extraction pipeline for Argentine civil rulings (C++ core bindings)."""

try:
    from legalex._legalex import *  # noqa: F401,F403  (wheel layout)
    from legalex._legalex import VectorIndex  # noqa: F401
except ImportError:  # in-tree builds put the extension on PYTHONPATH directly
    from _legalex import *  # noqa: F401,F403
    from _legalex import VectorIndex  # noqa: F401

__all__ = [
    "clean_text",
    "tokenize",
    "block_texts",
    "percent_segments",
    "parse_spanish_number",
    "extract_percentages",
    "extract_amounts",
    "regex_extract",
    "parse_response",
    "detect_hallucination",
    "mock_embed",
    "point_value",
    "disability_histogram",
    "VectorIndex",
]
