"""Switch-parameterized grammar toolkit.

Thin python surface over the C++ core: build the documented grammar,
sample parallel corpora across switch configurations, score them with
n-gram models, and fit the random-intercept model to the scores.
"""

from ._core import (
    __version__,
    analyze,
    builtin_grammar_text,
    builtin_lexicon_text,
    enumerate_grammars,
    generate,
    sample_yields,
    score,
    switch_names,
    validate_grammar,
    word_order,
)

__all__ = [
    "__version__",
    "analyze",
    "builtin_grammar_text",
    "builtin_lexicon_text",
    "enumerate_grammars",
    "generate",
    "sample_yields",
    "score",
    "switch_names",
    "validate_grammar",
    "word_order",
]
