"""Graph isomorphism (with label equality) between controllers.

Used by the test-suite to compare built controllers against hand-encoded
reference automata without depending on state naming.  Edge labels compare
by AC-canonical condition keys plus action-id tuples, so conjunct/disjunct
ordering differences do not matter.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from taskfsa.core import Controller


def _signature(c: Controller, state: str):
    out = sorted(t.label_key() + (t.dst == state,) for t in c.outgoing(state))
    inc = sorted(t.label_key() + (t.src == state,) for t in c.transitions if t.dst == state)
    return (
        state == c.initial,
        state == c.absorbing,
        tuple(out),
        tuple(inc),
    )


def find_isomorphism(a: Controller, b: Controller) -> Optional[Dict[str, str]]:
    """A state bijection preserving initial/absorbing flags and the labeled
    transition relation, or None."""
    if len(a.states) != len(b.states) or len(a.transitions) != len(b.transitions):
        return None

    sig_a = {s: _signature(a, s) for s in a.states}
    sig_b = {s: _signature(b, s) for s in b.states}
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return None

    candidates: Dict[str, List[str]] = {
        s: [t for t in b.states if sig_b[t] == sig_a[s]] for s in a.states
    }
    order = sorted(a.states, key=lambda s: len(candidates[s]))

    edges_a = {(t.src, t.dst): set() for t in a.transitions}
    for t in a.transitions:
        edges_a[(t.src, t.dst)].add(t.label_key())
    edges_b = {(t.src, t.dst): set() for t in b.transitions}
    for t in b.transitions:
        edges_b[(t.src, t.dst)].add(t.label_key())

    mapping: Dict[str, str] = {}
    used = set()

    def consistent(s: str, t: str) -> bool:
        for (src, dst), labels in edges_a.items():
            msrc = mapping.get(src) if src != s else t
            mdst = mapping.get(dst) if dst != s else t
            if msrc is None or mdst is None:
                continue
            if edges_b.get((msrc, mdst), set()) != labels:
                return False
        return True

    def assign(i: int) -> bool:
        if i == len(order):
            return True
        s = order[i]
        for t in candidates[s]:
            if t in used or not consistent(s, t):
                continue
            mapping[s] = t
            used.add(t)
            if assign(i + 1):
                return True
            del mapping[s]
            used.discard(t)
        return False

    return dict(mapping) if assign(0) else None


def isomorphic(a: Controller, b: Controller) -> bool:
    return find_isomorphism(a, b) is not None
