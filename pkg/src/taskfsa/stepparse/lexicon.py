"""Tagging lexicon and lemmatizer.

The lexicon is a plain-text asset (one ``surface TAB lemma TAB pos`` entry
per line; a surface form may carry several entries).  Unknown words fall
back to suffix heuristics and finally default to N, so tagging is total.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional

# Grammar keywords in priority order: "once" is treated as a synonym of
# "after".  "and"/"or"/"no"/"not" refine verb phrases into formulas.
KEYWORDS = ("if", "wait", "until", "after", "once", "and", "or", "no", "not")

# Stative copula complements normalized to their change-of-state phrasing,
# so "the light is green" and "wait for the light to turn green" coincide.
COPULA_MAP = {
    "green": ("turn", "green"),
    "red": ("turn", "red"),
    "on": ("turn", "on"),
    "off": ("turn", "off"),
}

# Verb + particle pairs that lexicalize to a single verb.
PHRASAL_VERBS = {
    ("walk", "across"): "cross",
    ("go", "across"): "cross",
}

# Verbs whose "to VERB ..." complement carries the real action.
LIGHT_VERBS = {"proceed", "go", "continue", "return", "start", "begin", "try", "back"}

_VOWELS = "aeiou"


@dataclass
class Entry:
    lemma: str
    pos: str


class Lexicon:
    def __init__(self, entries: Dict[str, List[Entry]]):
        self.entries = entries
        self.bases = {e.lemma for items in entries.values() for e in items}

    def lookup(self, surface: str) -> List[Entry]:
        return self.entries.get(surface.lower(), [])

    def lemma_for(self, surface: str, pos: str) -> str:
        for e in self.lookup(surface):
            if e.pos == pos:
                return e.lemma
        return lemmatize(surface, bases=self.bases)


def load_lexicon(text: str) -> Lexicon:
    entries: Dict[str, List[Entry]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"malformed lexicon line: {line!r}")
        surface, lemma, pos = parts
        entries.setdefault(surface.lower(), []).append(Entry(lemma.lower(), pos))
    return Lexicon(entries)


_default: Optional[Lexicon] = None


def default_lexicon() -> Lexicon:
    global _default
    if _default is None:
        text = resources.files("taskfsa").joinpath("data/lexicon.txt").read_text()
        _default = load_lexicon(text)
    return _default


def lemmatize(token: str, bases=None) -> str:
    """Reduce an inflected form to its base: plural -s, -ing/-ed verb forms,
    3rd person -s.  Irregulars come from the lexicon; unknown forms are
    returned unchanged.  Idempotent."""
    word = token.lower()
    lex = default_lexicon()
    for e in lex.lookup(word):
        return e.lemma
    if bases is None:
        bases = lex.bases

    def known(w: str) -> bool:
        return w in bases

    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("sses") or word.endswith("shes") or word.endswith("ches") or word.endswith("xes"):
        return word[:-2]
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        if known(stem):
            return stem
        if known(stem + "e"):
            return stem + "e"
        if len(stem) > 2 and stem[-1] == stem[-2] and known(stem[:-1]):
            return stem[:-1]
        return stem
    if word.endswith("ed") and len(word) > 3:
        stem = word[:-2]
        if known(stem):
            return stem
        if known(stem + "e") or stem[-1] in "cusv":
            return stem + "e"
        if len(stem) > 2 and stem[-1] == stem[-2] and known(stem[:-1]):
            return stem[:-1]
        return stem
    if word.endswith("s") and not word.endswith("ss") and not word.endswith("us") and len(word) > 3:
        return word[:-1]
    return word
