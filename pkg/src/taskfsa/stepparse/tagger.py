"""Tokenizer and part-of-speech tagger.

Tagging is lexicon-first with suffix heuristics for unknown words and a
small set of context rules for noun/verb ambiguous forms; unknown words
default to N.  Deterministic by construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from taskfsa.stepparse.lexicon import KEYWORDS, Lexicon, default_lexicon, lemmatize

N, V, ADJ, ADV, DET, NUM, KEYWORD, STEPREF, PUNCT, OTHER = (
    "N", "V", "ADJ", "ADV", "DET", "NUM", "KEYWORD", "STEPREF", "PUNCT", "OTHER",
)


@dataclass
class Token:
    surface: str
    lemma: str
    pos: str

    def __repr__(self):
        return f"{self.pos}({self.lemma})"


_TOKEN_RE = re.compile(
    r"\[\d+(?:\.\d+)*\]"      # step reference
    r"|[A-Za-z][A-Za-z\-]*"   # word (hyphenated compounds allowed)
    r"|\d+"                   # bare number
    r"|'s"                    # possessive clitic
    r"|[.,;:!?()\"]"          # punctuation
)

_PRONOUNS = {"you", "they", "them", "it", "he", "she", "we", "i", "who", "whom",
             "which", "that", "yourself", "itself"}


def _suffix_pos(word: str) -> str:
    if word.endswith("ing") and len(word) > 4:
        return V
    if word.endswith("ed") and len(word) > 3:
        return V
    if word.endswith("ly") and len(word) > 3:
        return ADV
    for suf in ("tion", "sion", "ness", "ment", "ity", "ance", "ence", "ship", "hood"):
        if word.endswith(suf):
            return N
    return N


def tokenize_and_tag(sentence: str, lexicon: Optional[Lexicon] = None,
                     keywords=KEYWORDS) -> List[Token]:
    """Split a sentence into tokens and assign POS tags.  Keywords from the
    configured set are tagged KEYWORD, bracketed numbers STEPREF."""
    if not sentence.strip():
        raise ValueError("sentence must be non-empty")
    lexicon = lexicon or default_lexicon()
    raw = _TOKEN_RE.findall(sentence)

    tokens: List[Token] = []
    for piece in raw:
        low = piece.lower()
        if piece.startswith("["):
            tokens.append(Token(piece, piece[1:-1], STEPREF))
        elif piece == "'s":
            tokens.append(Token(piece, "'s", OTHER))
        elif low in keywords:
            tokens.append(Token(piece, low, KEYWORD))
        elif piece[0].isdigit():
            tokens.append(Token(piece, low, NUM))
        elif not piece[0].isalpha():
            tokens.append(Token(piece, low, PUNCT))
        else:
            tokens.append(_tag_word(piece, lexicon))

    _apply_context_rules(tokens, lexicon)
    _promote_verb(tokens, lexicon)
    return tokens


def _tag_word(piece: str, lexicon: Lexicon) -> Token:
    low = piece.lower()
    entries = lexicon.lookup(low)
    if len(entries) == 1:
        return Token(piece, entries[0].lemma, entries[0].pos)
    if entries:
        # ambiguous; keep first entry for now, context rules may retag
        tok = Token(piece, entries[0].lemma, entries[0].pos)
        return tok
    if low in _PRONOUNS:
        return Token(piece, low, OTHER)
    pos = _suffix_pos(low)
    return Token(piece, lemmatize(low), pos)


def _candidates(tok: Token, lexicon: Lexicon):
    return {e.pos: e.lemma for e in lexicon.lookup(tok.surface.lower())}


def _apply_context_rules(tokens: List[Token], lexicon: Lexicon) -> None:
    for i, tok in enumerate(tokens):
        cands = _candidates(tok, lexicon)
        if not (V in cands and N in cands):
            continue
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        prev = tokens[i - 1] if i > 0 else None
        if nxt is not None and nxt.pos in (DET, NUM) or (nxt is not None and nxt.pos == OTHER and nxt.lemma in _PRONOUNS):
            tok.pos, tok.lemma = V, cands[V]          # takes an object
        elif i == 0:
            tok.pos, tok.lemma = V, cands[V]          # imperative head
        elif prev is not None and prev.pos in (DET, ADJ, N, NUM):
            tok.pos, tok.lemma = N, cands[N]          # inside a noun phrase
        else:
            tok.pos, tok.lemma = V, cands[V]


def _promote_verb(tokens: List[Token], lexicon: Lexicon) -> None:
    """A sentence with no verb promotes its first verb-capable word (a
    noun/verb ambiguous form or a gerund) so phrase extraction has a head."""
    if any(t.pos == V for t in tokens):
        return
    for tok in tokens:
        cands = _candidates(tok, lexicon)
        if V in cands:
            tok.pos, tok.lemma = V, cands[V]
            return
        if tok.pos == N and tok.surface.lower().endswith("ing"):
            tok.pos = V
            tok.lemma = lemmatize(tok.surface)
            return
