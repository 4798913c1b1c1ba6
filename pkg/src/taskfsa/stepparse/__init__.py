"""Rule-based semantic parsing of numbered step sentences."""

from taskfsa.stepparse.lexicon import KEYWORDS, Lexicon, default_lexicon, lemmatize
from taskfsa.stepparse.tagger import Token, tokenize_and_tag
from taskfsa.stepparse.phrases import (
    NoVerbFound,
    VerbPhrase,
    extract_phrases,
)
from taskfsa.stepparse.parser import (
    AmbiguousRule,
    ParsedStep,
    Rule,
    parse_step,
)

__all__ = [
    "KEYWORDS",
    "Lexicon",
    "default_lexicon",
    "lemmatize",
    "Token",
    "tokenize_and_tag",
    "NoVerbFound",
    "VerbPhrase",
    "extract_phrases",
    "AmbiguousRule",
    "ParsedStep",
    "Rule",
    "parse_step",
]
