"""Model checking: search the product x Buchi(!spec) composition for an
accepting lasso.  The search layers by BFS distance so the reported
counterexample has the shortest possible stem, which keeps the fixture
verdicts deterministic."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from taskfsa.core import Controller, Model, STUCK_ATOM
from taskfsa.verify.buchi import BuchiAutomaton, to_buchi
from taskfsa.verify.ltl import LAlways, LAnd, LNot, LProp, LtlFormula, eval_lasso
from taskfsa.verify.product import Product, ProductState, build_product


@dataclass(frozen=True)
class TraceStep:
    model_state: str
    controller_state: str
    label: FrozenSet[str]


@dataclass
class Counterexample:
    """Lasso trace of the product violating the specification."""

    stem: List[TraceStep]
    loop: List[TraceStep]

    @property
    def projection(self) -> List[str]:
        """Model-state projection of stem followed by one loop unrolling."""
        return [s.model_state for s in self.stem] + [s.model_state for s in self.loop]

    def collapsed_projection(self) -> Tuple[List[str], List[str]]:
        """Human-facing rendering: consecutive duplicate model states merged,
        stem suffix folded into the loop when it already repeats it."""
        loop_states = [s.model_state for s in self.loop]
        loop: List[str] = []
        for st in loop_states:
            if not loop or loop[-1] != st:
                loop.append(st)
        if len(loop) > 1 and loop[0] == loop[-1]:
            loop.pop()
        stem: List[str] = []
        for s in self.stem:
            if not stem or stem[-1] != s.model_state:
                stem.append(s.model_state)
        while stem and stem[-1] == (loop[0] if loop else None):
            stem.pop()
        return stem, loop

    def render(self) -> str:
        stem, loop = self.collapsed_projection()
        path = " -> ".join(stem + [f"[loop {' -> '.join(loop)}]"])
        lines = [f"model projection: {path}", "trace:"]
        for tag, steps in (("stem", self.stem), ("loop", self.loop)):
            for s in steps:
                label = " ".join(sorted(s.label)) or "(empty)"
                lines.append(f"  {tag} ({s.model_state}, {s.controller_state}) |= {label}")
        return "\n".join(lines)

    def label_word(self) -> Tuple[List[FrozenSet[str]], List[FrozenSet[str]]]:
        return [s.label for s in self.stem], [s.label for s in self.loop]


@dataclass
class Verdict:
    passed: bool
    counterexample: Optional[Counterexample] = None
    spec_name: Optional[str] = None

    def __bool__(self) -> bool:
        return self.passed


CompositeState = Tuple[ProductState, object]


def check(m: Model, c: Controller, spec: LtlFormula, *,
          deadlock_as_failure: bool = False) -> Verdict:
    """Does every labeled trajectory of ``m (x) c`` satisfy ``spec``?

    Nondeterminism is resolved adversarially: a single violating trajectory
    yields Fail together with a lasso counterexample.  With
    ``deadlock_as_failure`` trajectories that hit a deadlocked product state
    (which only carries the implicit ``stuck`` self-loop) count as
    violations too.
    """
    product = build_product(m, c)
    checked = spec
    if deadlock_as_failure:
        checked = LAnd(spec, LAlways(LNot(LProp(STUCK_ATOM))))
    buchi = to_buchi(LNot(checked))
    cex = _find_accepting_lasso(product, buchi)
    if cex is None:
        return Verdict(passed=True)
    return Verdict(passed=False, counterexample=cex)


def _find_accepting_lasso(product: Product, buchi: BuchiAutomaton) -> Optional[Counterexample]:
    init: CompositeState = (product.initial, buchi.initial)

    def successors(node: CompositeState):
        pstate, bstate = node
        for edge in product.outgoing.get(pstate, []):
            for bdst in buchi.successors(bstate, edge.label):
                yield (edge.dst, bdst), edge

    # BFS layering for the shortest stem.
    order: List[CompositeState] = [init]
    parent: Dict[CompositeState, Tuple[Optional[CompositeState], Optional[object]]] = {init: (None, None)}
    dist = {init: 0}
    qi = 0
    while qi < len(order):
        node = order[qi]
        qi += 1
        for nxt, edge in successors(node):
            if nxt not in dist:
                dist[nxt] = dist[node] + 1
                parent[nxt] = (node, edge)
                order.append(nxt)

    accepting = [n for n in order if n[1] in buchi.accepting]
    for node in accepting:  # already in BFS (shortest-stem) order
        cycle = _shortest_cycle(node, successors)
        if cycle is None:
            continue
        stem_nodes: List[CompositeState] = []
        stem_edges = []
        cur = node
        while True:
            prev, edge = parent[cur]
            if prev is None:
                break
            stem_nodes.append(prev)
            stem_edges.append(edge)
            cur = prev
        stem_nodes.reverse()
        stem_edges.reverse()
        stem = [
            TraceStep(n[0][0], n[0][1], e.label)
            for n, e in zip(stem_nodes, stem_edges)
        ]
        loop = [
            TraceStep(n[0][0], n[0][1], e.label)
            for n, e in cycle
        ]
        return Counterexample(stem=stem, loop=loop)
    return None


def _shortest_cycle(node, successors):
    """Shortest non-empty path node -> node, as a list of (state, edge-taken)."""
    parent: Dict = {}
    queue: List = []
    for nxt, edge in successors(node):
        if nxt == node:
            return [(node, edge)]
        if nxt not in parent:
            parent[nxt] = (node, edge)
            queue.append(nxt)
    qi = 0
    while qi < len(queue):
        cur = queue[qi]
        qi += 1
        for nxt, edge in successors(cur):
            if nxt == node:
                # reconstruct node -> ... -> cur -> node
                steps = [(cur, edge)]
                walk = cur
                while walk != node:
                    prev, e = parent[walk]
                    steps.append((prev, e))
                    walk = prev
                steps.reverse()
                return steps
            if nxt not in parent:
                parent[nxt] = (cur, edge)
                queue.append(nxt)
    return None


def replay_counterexample(m: Model, c: Controller, cex: Counterexample) -> bool:
    """Re-run a counterexample through the product transition relation;
    True when every step (and the loop closure) is a real transition."""
    product = build_product(m, c)
    steps = cex.stem + cex.loop
    nodes = [(s.model_state, s.controller_state) for s in steps]
    targets = nodes[1:] + [
        (cex.loop[0].model_state, cex.loop[0].controller_state)
    ]
    if cex.stem:
        if nodes[0] != product.initial:
            return False
    elif (cex.loop[0].model_state, cex.loop[0].controller_state) != product.initial:
        return False
    for (src, step, dst) in zip(nodes, steps, targets):
        if not any(e.dst == dst and e.label == step.label
                   for e in product.outgoing.get(src, [])):
            return False
    return True


def violates(spec: LtlFormula, cex: Counterexample) -> bool:
    stem, loop = cex.label_word()
    return not eval_lasso(spec, stem, loop)
