"""Corpus tools and span-level evaluation for medication extraction.

The heavy lifting lives in the native ``_medmine`` extension; this package
re-exports its public surface. Installed wheels carry the extension inside
the package; in-tree builds put it on sys.path directly.
"""

try:
    from . import _medmine as _native
except ImportError:  # in-tree build: extension sits next to the package
    import _medmine as _native

__all__ = [
    "AnnotationSet",
    "Chunk",
    "Corpus",
    "Document",
    "EntitySpan",
    "Fragment",
    "MedmineError",
    "Token",
    "aggregate_rows",
    "aggregate_rows_excluding",
    "bio_to_spans",
    "chunk_document",
    "evaluate_corpus",
    "evaluate_document",
    "generate",
    "label_stats",
    "merge_per_label_best",
    "merge_predictions",
    "overlap",
    "oversample",
    "parse_label",
    "parse_standoff",
    "parse_token_tags",
    "perturb",
    "report_from_json",
    "spans_to_bio",
    "split_corpus",
    "token_accuracy",
    "tokenize",
    "validate_span",
    "write_standoff",
    "write_token_tags",
]

__version__ = _native.__version__

for _name in __all__:
    globals()[_name] = getattr(_native, _name)
del _name, _native
