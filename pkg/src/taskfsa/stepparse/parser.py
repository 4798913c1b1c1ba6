"""Step-level parsing: sentence fragments to a rule-classified ParsedStep.

Rule selection
--------------
no keyword            -> Default
step reference, no if -> Direct (a fronted once/after condition is recorded
                         but the emitted transition is unconditional)
if                    -> Conditional; two if-sentences in one step form the
                         ConditionalElse pair
wait / mid after      -> SelfWait
until                 -> SelfUntil
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional

from taskfsa.core import CondFormula, TRUE, action_prop
from taskfsa.stepparse.phrases import (
    Fragment,
    NoVerbFound,
    VerbPhrase,
    analyze_fragment,
    split_sentences,
)
from taskfsa.stepparse.tagger import STEPREF, tokenize_and_tag


class AmbiguousRule(Warning):
    pass


class Rule:
    DEFAULT = "Default"
    DIRECT = "Direct"
    CONDITIONAL = "Conditional"
    CONDITIONAL_ELSE = "ConditionalElse"
    SELF_WAIT = "SelfWait"
    SELF_UNTIL = "SelfUntil"


@dataclass
class Branch:
    """One resolved if-branch: condition, optional wait condition, actions
    and an optional direct target."""

    cond: Optional[CondFormula]
    wait_cond: Optional[CondFormula]
    acts: tuple
    target: Optional[str]


@dataclass
class ParsedStep:
    step_number: str
    rule: str
    conds: CondFormula
    acts: tuple
    keywords: List[str]
    direct_target: Optional[str] = None
    wait_conds: Optional[CondFormula] = None
    branches: List[Branch] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    text: str = ""


_STEP_NUMBER_RE = re.compile(r"^\d+(\.\d+)*$")
_LEADING_MARKER_RE = re.compile(r"^\s*\[\d+(\.\d+)*\]\s*")


def _acts_tuple(vps: List[VerbPhrase]) -> tuple:
    out = []
    for vp in vps:
        p = action_prop(vp.id)
        if p not in out:
            out.append(p)
    return tuple(out)


def parse_step(step_number: str, sentence: str) -> ParsedStep:
    """Parse one numbered step sentence into its transition rule."""
    if not _STEP_NUMBER_RE.match(step_number):
        raise ValueError(f"bad step number: {step_number!r}")
    text = _LEADING_MARKER_RE.sub("", sentence).strip()
    if not text:
        raise NoVerbFound(f"step {step_number} is empty")
    tokens = tokenize_and_tag(text)
    keywords = [t.lemma for t in tokens if t.pos == "KEYWORD"]
    refs = [t.lemma for t in tokens if t.pos == STEPREF]

    fragments: List[Fragment] = []
    antecedent = None
    for sent in split_sentences(tokens):
        frag = analyze_fragment(sent, antecedent=antecedent)
        for t in sent:
            if t.pos == "N":
                antecedent = t.lemma
        fragments.append(frag)
    fragments = [f for f in fragments if f.if_cond or f.wait_cond or f.acts or f.target]
    if not fragments:
        raise NoVerbFound(f"no verb phrase or step reference in {sentence!r}")

    notes: List[str] = []
    if_frags = [f for f in fragments if f.if_cond is not None]

    if len(if_frags) >= 2:
        branches = [
            Branch(f.if_cond, f.wait_cond, _acts_tuple(f.acts), f.target)
            for f in if_frags
        ]
        if len(fragments) != len(if_frags):
            notes.append("non-conditional fragment ignored in if/else pair")
        return ParsedStep(
            step_number=step_number,
            rule=Rule.CONDITIONAL_ELSE,
            conds=branches[0].cond,
            acts=branches[0].acts,
            keywords=keywords,
            direct_target=branches[0].target,
            wait_conds=branches[0].wait_cond,
            branches=branches,
            notes=notes,
            text=text,
        )

    frag = fragments[0]
    if len(fragments) > 1:
        notes.append("multiple sentences; first fragment selected")
    acts = _acts_tuple(frag.acts)

    if frag.if_cond is not None:
        if frag.wait_cond is not None and not frag.wait_fronted:
            notes.append("conditional with nested wait")
        branch = Branch(frag.if_cond, None if frag.wait_fronted else frag.wait_cond,
                        acts, frag.target)
        return ParsedStep(
            step_number=step_number,
            rule=Rule.CONDITIONAL,
            conds=frag.if_cond,
            acts=acts,
            keywords=keywords,
            direct_target=frag.target,
            wait_conds=branch.wait_cond,
            branches=[branch],
            notes=notes,
            text=text,
        )

    if frag.target is not None:
        conds = frag.wait_cond if frag.wait_cond is not None else TRUE
        if frag.wait_cond is not None and not frag.wait_fronted:
            notes.append("ambiguous: wait keyword with step reference; Direct wins")
        return ParsedStep(
            step_number=step_number,
            rule=Rule.DIRECT,
            conds=conds,
            acts=acts,
            keywords=keywords,
            direct_target=frag.target,
            notes=notes,
            text=text,
        )

    if frag.wait_cond is not None and not frag.wait_fronted:
        rule = Rule.SELF_UNTIL if frag.wait_kind == "until" else Rule.SELF_WAIT
        return ParsedStep(
            step_number=step_number,
            rule=rule,
            conds=frag.wait_cond,
            acts=acts,
            keywords=keywords,
            wait_conds=frag.wait_cond,
            notes=notes,
            text=text,
        )

    if frag.wait_fronted:
        notes.append("fronted temporal clause dropped for default transition")
    if not acts:
        raise NoVerbFound(f"no verb phrase or step reference in {sentence!r}")
    return ParsedStep(
        step_number=step_number,
        rule=Rule.DEFAULT,
        conds=TRUE,
        acts=acts,
        keywords=keywords,
        notes=notes,
        text=text,
    )
