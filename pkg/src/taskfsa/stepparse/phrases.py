"""Verb-phrase extraction and clause analysis.

A fragment (one sentence of a step) is segmented into keyword-determined
regions: an optional condition clause, an optional wait complement, and the
main/action region.  Verb phrases are the verb head plus a small budget of
content dependents taken in surface order, which is what proposition ids
are rendered from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from taskfsa.core import (
    CondFormula,
    NotF,
    PropF,
    and_all,
    cond_prop,
    or_all,
)
from taskfsa.stepparse.lexicon import COPULA_MAP, LIGHT_VERBS, PHRASAL_VERBS
from taskfsa.stepparse.tagger import (
    ADJ,
    ADV,
    DET,
    KEYWORD,
    N,
    NUM,
    OTHER,
    PUNCT,
    STEPREF,
    Token,
    V,
    tokenize_and_tag,
)


class NoVerbFound(ValueError):
    """The sentence yields no verb phrase and no step reference."""


@dataclass(frozen=True)
class VerbPhrase:
    lemmas: tuple
    kind: str  # "condition" | "action"

    @property
    def id(self) -> str:
        return " ".join(self.lemmas)


@dataclass
class Fragment:
    """Analysis of one sentence: condition/wait formulas, the action verb
    phrase, keywords seen and an optional direct step target."""

    keywords: List[str] = field(default_factory=list)
    if_cond: Optional[CondFormula] = None
    wait_cond: Optional[CondFormula] = None
    wait_fronted: bool = False
    wait_kind: Optional[str] = None  # "wait" | "until"
    acts: List[VerbPhrase] = field(default_factory=list)
    target: Optional[str] = None
    cond_vps: List[VerbPhrase] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


_PREPS = {"to", "for", "from", "of", "on", "in", "at", "with", "by", "into",
          "onto", "over", "under", "across", "through", "between", "during"}
_PRONOUN_LEMMAS = {"you", "they", "them", "it", "he", "she", "we", "i",
                   "who", "whom", "which", "that", "yourself", "itself"}
_RESOLVABLE = {"them", "they", "it"}
_AUX = {"be", "have", "do"}


def _is_comma(tok: Token) -> bool:
    return tok.pos == PUNCT and tok.surface == ","


def _find_keyword(tokens: List[Token], lemma: str, start: int = 0) -> int:
    for i in range(start, len(tokens)):
        if tokens[i].pos == KEYWORD and tokens[i].lemma == lemma:
            return i
    return -1


def _collect_deps(tokens: List[Token], start: int, *, enter_pp: bool = True,
                  budget: int = 2) -> List[str]:
    """Content dependents after a verb: at most one adjective plus nouns, up
    to ``budget`` lemmas total, in surface order.  Collection stops at
    clause boundaries (verbs, pronouns, punctuation, and/or), at a
    preposition once something was collected, and at the second adjective.
    """
    deps: List[str] = []
    adj_taken = False
    i = start
    while i < len(tokens) and len(deps) < budget:
        tok = tokens[i]
        if tok.pos in (DET, ADV):
            i += 1
            continue
        if tok.pos == NUM:
            deps.append(tok.lemma)
            i += 1
            continue
        if tok.pos == ADJ:
            if not adj_taken:
                deps.append(tok.lemma)
                adj_taken = True
            i += 1
            continue
        if tok.pos == N:
            deps.append(tok.lemma)
            i += 1
            continue
        if tok.pos == OTHER and tok.lemma == "'s":
            i += 1
            continue
        if tok.pos == OTHER and tok.lemma in _PRONOUN_LEMMAS:
            break
        if tok.pos == OTHER and tok.lemma in _PREPS:
            if tok.lemma == "to" and i + 1 < len(tokens) and tokens[i + 1].pos == V:
                break  # purpose clause
            if deps or not enter_pp:
                break
            i += 1
            continue
        break  # verb, keyword, punctuation: clause ends
    return deps


def _noun_phrase(tokens: List[Token], budget: int = 2) -> List[str]:
    """Lemmas of a bare noun phrase region (numbers, one adjective, nouns)."""
    out: List[str] = []
    adj_taken = False
    for tok in tokens:
        if len(out) >= budget:
            break
        if tok.pos == NUM or tok.pos == N:
            out.append(tok.lemma)
        elif tok.pos == ADJ and not adj_taken:
            out.append(tok.lemma)
            adj_taken = True
        elif tok.pos == KEYWORD and tok.lemma in ("and", "or"):
            break
    return out


def _first_verb(tokens: List[Token], start: int = 0) -> int:
    for i in range(start, len(tokens)):
        if tokens[i].pos == V:
            return i
    return -1


def _main_verb_phrase(tokens: List[Token], antecedent: Optional[str]) -> Optional[VerbPhrase]:
    """The action verb phrase of an imperative region, or None."""
    vi = _first_verb(tokens)
    if vi < 0:
        return _gerundless_fallback(tokens)
    verb = tokens[vi]
    # light verb: the to-complement carries the action
    if verb.lemma in LIGHT_VERBS:
        for j in range(vi + 1, len(tokens)):
            if tokens[j].pos == V:
                return _vp_from(tokens, j, antecedent)
            if tokens[j].pos == STEPREF:
                return None  # direct transition, no action
            if tokens[j].pos not in (OTHER, DET, ADV):
                break
        return _vp_from(tokens, vi, antecedent)
    return _vp_from(tokens, vi, antecedent)


def _gerundless_fallback(tokens: List[Token]) -> Optional[VerbPhrase]:
    return None


def _vp_from(tokens: List[Token], vi: int, antecedent: Optional[str]) -> VerbPhrase:
    verb = tokens[vi]
    lemma = verb.lemma
    start = vi + 1
    # phrasal verb: absorb the particle
    if start < len(tokens):
        pair = (lemma, tokens[start].lemma)
        if pair in PHRASAL_VERBS:
            lemma = PHRASAL_VERBS[pair]
            start += 1
    if verb.surface.lower().endswith("ing") and vi > 0:
        # nominal gerund ("secret sharing"): keep leading modifiers
        mods = [t.lemma for t in tokens[:vi] if t.pos in (ADJ, N)]
        if mods:
            return VerbPhrase(tuple(mods[-2:] + [lemma]), "action")
    deps = _collect_deps(tokens, start)
    return VerbPhrase(tuple([lemma] + deps), "action")


def _clause_formula(tokens: List[Token], antecedent: Optional[str],
                    collected: List[VerbPhrase]) -> Optional[CondFormula]:
    """Condition clause -> formula; handles and/or coordination and no/not
    negation, finite and verbless clauses."""
    groups = _split_coordination(tokens)
    literals: List[CondFormula] = []
    ops: List[str] = []
    for idx, (op, region) in enumerate(groups):
        lit = _clause_literal(region, antecedent, collected)
        if lit is None:
            continue
        if idx > 0:
            ops.append(op)
        literals.append(lit)
    if not literals:
        return None
    formula = literals[0]
    for op, lit in zip(ops, literals[1:]):
        formula = or_all([formula, lit]) if op == "or" else and_all([formula, lit])
    return formula


def _split_coordination(tokens: List[Token]) -> List[Tuple[str, List[Token]]]:
    """Split a condition region on clause-level and/or: the left side must
    already contain a verb and the right side its own head, otherwise the
    connective is NP-level coordination and stays put."""
    groups: List[Tuple[str, List[Token]]] = []
    current: List[Token] = []
    op = ""
    for i, tok in enumerate(tokens):
        if tok.pos == KEYWORD and tok.lemma in ("and", "or"):
            rest_has_head = any(t.pos in (V, N) for t in tokens[i + 1:])
            cur_has_verb = any(t.pos == V for t in current)
            if cur_has_verb and rest_has_head:
                groups.append((op, current))
                current = []
                op = tok.lemma
                continue
        current.append(tok)
    groups.append((op, current))
    return groups


def _clause_literal(tokens: List[Token], antecedent: Optional[str],
                    collected: List[VerbPhrase]) -> Optional[CondFormula]:
    negated = any(t.pos == KEYWORD and t.lemma in ("no", "not") for t in tokens)
    content = [t for t in tokens if not (t.pos == KEYWORD and t.lemma in ("no", "not"))]
    verbs = [i for i, t in enumerate(content) if t.pos == V]
    main = None
    aux_perfect = False
    copula = None
    for i in verbs:
        tok = content[i]
        if tok.lemma == "have" and any(content[j].pos == V for j in verbs if j > i):
            aux_perfect = True
            continue
        if tok.lemma == "be":
            copula = i
            continue
        main = i
        break
    lemmas: List[str] = []
    if main is not None:
        vi = main
        subject = None
        for j in range(vi - 1, -1, -1):
            t = content[j]
            if t.pos == N:
                subject = t.lemma
                break
            if t.pos == OTHER and t.lemma in _RESOLVABLE:
                subject = antecedent
                break
            if t.pos == V and t.lemma not in _AUX:
                break
        deps = _collect_deps(content, vi + 1)
        if aux_perfect:
            lemmas = [content[vi].lemma] + deps
        elif subject:
            lemmas = [subject, content[vi].lemma] + deps
        else:
            lemmas = [content[vi].lemma] + deps
    elif copula is not None:
        after = content[copula + 1:]
        comp_adj = next((t for t in after if t.pos == ADJ), None)
        if comp_adj is not None:
            lemmas = list(COPULA_MAP.get(comp_adj.lemma, ("be", comp_adj.lemma)))
        else:
            lemmas = _noun_phrase(after)
            if not lemmas:
                lemmas = _noun_phrase(content[:copula])
    else:
        lemmas = _noun_phrase(content)
    if not lemmas:
        return None
    vp = VerbPhrase(tuple(lemmas), "condition")
    collected.append(vp)
    leaf = PropF(cond_prop(vp.id))
    return NotF(leaf) if negated else leaf


def _wait_condition(tokens: List[Token], antecedent: Optional[str],
                    collected: List[VerbPhrase]) -> Optional[CondFormula]:
    """Condition from a wait/until complement.

    "for NP to V ..." keeps only the infinitive (plus a resolved pronoun
    subject); a finite clause goes through the normal clause rules; a bare
    noun phrase (durations) becomes an atomic proposition itself.
    """
    region = list(tokens)
    if region and region[0].pos == OTHER and region[0].lemma == "for":
        region = region[1:]
    to_idx = next((i for i, t in enumerate(region)
                   if t.pos == OTHER and t.lemma == "to"
                   and i + 1 < len(region) and region[i + 1].pos == V), -1)
    if to_idx >= 0:
        np_region = region[:to_idx]
        vi = to_idx + 1
        deps = _collect_deps(region, vi + 1)
        pron = next((t for t in np_region if t.pos == OTHER and t.lemma in _RESOLVABLE), None)
        lemmas = [region[vi].lemma] + deps
        if pron is not None and antecedent:
            lemmas = [antecedent] + lemmas
        negated = any(t.pos == KEYWORD and t.lemma in ("no", "not") for t in np_region)
        vp = VerbPhrase(tuple(lemmas), "condition")
        collected.append(vp)
        leaf = PropF(cond_prop(vp.id))
        return NotF(leaf) if negated else leaf
    if any(t.pos == V for t in region):
        return _clause_formula(region, antecedent, collected)
    lemmas = _noun_phrase(region)
    if not lemmas:
        return None
    negated = any(t.pos == KEYWORD and t.lemma in ("no", "not") for t in region)
    vp = VerbPhrase(tuple(lemmas), "condition")
    collected.append(vp)
    leaf = PropF(cond_prop(vp.id))
    return NotF(leaf) if negated else leaf


def _split_before(tokens: List[Token]) -> Tuple[List[Token], List[Token]]:
    """Split off a trailing 'before ...' subordinate region."""
    for i, t in enumerate(tokens):
        if t.pos == OTHER and t.lemma == "before":
            return tokens[:i], tokens[i + 1:]
    return tokens, []


def _strip_then(tokens: List[Token]) -> List[Token]:
    if tokens and tokens[0].pos == OTHER and tokens[0].lemma == "then":
        return tokens[1:]
    return tokens


def analyze_fragment(tokens: List[Token], antecedent: Optional[str] = None) -> Fragment:
    """Region segmentation and phrase extraction for one sentence."""
    frag = Fragment()
    frag.keywords = [t.lemma for t in tokens if t.pos == KEYWORD]
    refs = [t for t in tokens if t.pos == STEPREF]
    if refs:
        frag.target = refs[0].lemma

    def last_noun(upto: int) -> Optional[str]:
        for t in reversed(tokens[:upto]):
            if t.pos == N:
                return t.lemma
        return antecedent

    idx_if = _find_keyword(tokens, "if")
    idx_wait = _find_keyword(tokens, "wait")
    idx_until = _find_keyword(tokens, "until")
    idx_after = _find_keyword(tokens, "after")
    idx_once = _find_keyword(tokens, "once")
    idx_temporal = idx_after if idx_after >= 0 else idx_once

    main: List[Token] = list(tokens)
    if idx_if == 0:
        comma = next((i for i, t in enumerate(tokens) if _is_comma(t)), -1)
        cond_region = tokens[1:comma] if comma > 0 else tokens[1:]
        main = tokens[comma + 1:] if comma > 0 else []
        frag.if_cond = _clause_formula(cond_region, antecedent, frag.cond_vps)
    elif idx_if > 0:
        cond_region = tokens[idx_if + 1:]
        main = tokens[:idx_if]
        frag.if_cond = _clause_formula(cond_region, antecedent, frag.cond_vps)
    elif idx_temporal == 0:
        comma = next((i for i, t in enumerate(tokens) if _is_comma(t)), -1)
        clause = tokens[1:comma] if comma > 0 else tokens[1:]
        main = tokens[comma + 1:] if comma > 0 else []
        frag.wait_cond = _clause_formula(clause, antecedent, frag.cond_vps)
        frag.wait_fronted = True
        frag.wait_kind = "wait"

    # wait/until/after inside the remaining main region
    widx = next((i for i, t in enumerate(main)
                 if t.pos == KEYWORD and t.lemma == "wait"), -1)
    if widx >= 0:
        after_wait = main[widx + 1:]
        wait_region, before_region = _split_before(after_wait)
        comma = next((i for i, t in enumerate(wait_region) if _is_comma(t)), -1)
        post_region: List[Token] = []
        if comma >= 0:
            post_region = _strip_then(wait_region[comma + 1:])
            wait_region = wait_region[:comma]
        ant = last_noun(_token_index(tokens, main[widx]))
        frag.wait_cond = _wait_condition(wait_region, ant, frag.cond_vps)
        frag.wait_kind = "wait"
        action_region = before_region or post_region
        if action_region:
            vp = _main_verb_phrase(action_region, ant)
            if vp:
                frag.acts.append(vp)
        pre = main[:widx]
        if pre:
            vp = _main_verb_phrase(pre, antecedent)
            if vp:
                frag.acts.append(vp)
        return frag

    uidx = next((i for i, t in enumerate(main)
                 if t.pos == KEYWORD and t.lemma in ("until", "after") and i > 0), -1)
    if uidx > 0:
        clause = main[uidx + 1:]
        ant = last_noun(_token_index(tokens, main[uidx]))
        frag.wait_cond = _wait_condition(clause, ant, frag.cond_vps)
        frag.wait_kind = "until" if main[uidx].lemma == "until" else "wait"
        head = main[:uidx]
        vp = _main_verb_phrase(head, antecedent)
        if vp:
            frag.acts.append(vp)
        return frag

    head, before_region = _split_before(main)
    if head:
        vp = _main_verb_phrase(head, antecedent)
        if vp:
            frag.acts.append(vp)
    # a trailing before-clause outside a wait sentence restates context: drop
    return frag


def _token_index(tokens: List[Token], tok: Token) -> int:
    for i, t in enumerate(tokens):
        if t is tok:
            return i
    return len(tokens)


def split_sentences(tokens: List[Token]) -> List[List[Token]]:
    sentences: List[List[Token]] = []
    current: List[Token] = []
    for tok in tokens:
        if tok.pos == PUNCT and tok.surface in ".!?":
            if current:
                sentences.append(current)
                current = []
            continue
        current.append(tok)
    if current:
        sentences.append(current)
    return sentences


def extract_phrases(sentence: str):
    """Public phrase extraction: condition VPs, action VPs, keywords and
    step references of one sentence.  Raises NoVerbFound when nothing
    actionable is present."""
    tokens = tokenize_and_tag(sentence)
    keywords = [t.lemma for t in tokens if t.pos == KEYWORD]
    refs = [t.lemma for t in tokens if t.pos == STEPREF]
    cond_vps: List[VerbPhrase] = []
    act_vps: List[VerbPhrase] = []
    for sent in split_sentences(tokens):
        frag = analyze_fragment(sent)
        cond_vps.extend(frag.cond_vps)
        act_vps.extend(frag.acts)
    if not cond_vps and not act_vps and not refs:
        raise NoVerbFound(f"no verb phrase or step reference in {sentence!r}")
    return cond_vps, act_vps, keywords, refs
