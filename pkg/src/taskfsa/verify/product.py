"""Synchronous product of a model and a controller.

Each product transition corresponds to one controller transition whose
condition holds under the model state's label, paired with one model
transition whose guard accepts the emitted action set.  Transition labels
are the model label united with the emitted action ids, which is what the
LTL specification is evaluated over.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

from taskfsa.core import (
    Controller,
    Model,
    STUCK_ATOM,
    eval_formula,
    guard_satisfied,
)

ProductState = Tuple[str, str]  # (model state, controller state)


class AlphabetMismatch(ValueError):
    """Controller vocabulary does not embed into the model's: run synonym
    consolidation first."""

    def __init__(self, actions, conditions):
        self.actions = tuple(actions)
        self.conditions = tuple(conditions)
        parts = []
        if self.actions:
            parts.append("actions not in model alphabet: " + ", ".join(self.actions))
        if self.conditions:
            parts.append("conditions not in model labels: " + ", ".join(self.conditions))
        super().__init__("; ".join(parts))


@dataclass
class ProductEdge:
    src: ProductState
    label: FrozenSet[str]
    dst: ProductState


@dataclass
class Product:
    states: List[ProductState]
    initial: ProductState
    edges: List[ProductEdge]
    outgoing: Dict[ProductState, List[ProductEdge]] = field(default_factory=dict)
    deadlocked: List[ProductState] = field(default_factory=list)

    def labels_from(self, state: ProductState) -> List[FrozenSet[str]]:
        return [e.label for e in self.outgoing.get(state, [])]


def check_alphabets(m: Model, c: Controller) -> None:
    model_actions = {p.id for p in m.action_props}
    model_labels = {p.id for p in m.label_props}
    bad_actions = sorted({a.id for t in c.transitions for a in t.out} - model_actions)
    bad_conditions = sorted({p.id for p in c.props} - model_labels)
    if bad_actions or bad_conditions:
        raise AlphabetMismatch(bad_actions, bad_conditions)


def build_product(m: Model, c: Controller) -> Product:
    """Reachable product automaton of ``m`` and ``c``.

    Deadlocked product states (no jointly enabled transition) receive an
    implicit self-loop whose label carries the reserved ``stuck`` marker so
    that every state has an infinite continuation.
    """
    check_alphabets(m, c)
    init: ProductState = (m.initial, c.initial)
    states: List[ProductState] = [init]
    seen = {init}
    edges: List[ProductEdge] = []
    outgoing: Dict[ProductState, List[ProductEdge]] = {}
    deadlocked: List[ProductState] = []

    queue = [init]
    while queue:
        p, q = queue.pop(0)
        label_ids = m.label_ids(p)
        out_edges: List[ProductEdge] = []
        edge_seen = set()
        for ct in c.transitions:
            if ct.src != q or not eval_formula(ct.cond, label_ids):
                continue
            emitted = frozenset(a.id for a in ct.out)
            for mt in m.transitions:
                if mt.src != p or not guard_satisfied(mt.guard, ct.out):
                    continue
                dst = (mt.dst, ct.dst)
                label = label_ids | emitted
                key = (label, dst)
                if key in edge_seen:
                    continue
                edge_seen.add(key)
                out_edges.append(ProductEdge((p, q), label, dst))
                if dst not in seen:
                    seen.add(dst)
                    states.append(dst)
                    queue.append(dst)
        if not out_edges:
            deadlocked.append((p, q))
            out_edges.append(ProductEdge((p, q), label_ids | {STUCK_ATOM}, (p, q)))
        outgoing[(p, q)] = out_edges
        edges.extend(out_edges)

    return Product(states=states, initial=init, edges=edges,
                   outgoing=outgoing, deadlocked=deadlocked)
