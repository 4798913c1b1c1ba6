"""Bounded lasso enumeration: the independent oracle for ``check``.

No Buchi machinery is involved: every lasso of the product within the given
stem/loop bounds is evaluated against the specification by the direct
ultimately-periodic-word semantics.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from taskfsa.core import Controller, Model
from taskfsa.verify.check import Counterexample, TraceStep, Verdict
from taskfsa.verify.ltl import LtlFormula, eval_lasso
from taskfsa.verify.product import ProductState, build_product


class BoundsTooSmall(ValueError):
    """No lasso exists within the requested stem/loop bounds."""


def brute_force_check(m: Model, c: Controller, spec: LtlFormula,
                      stem_bound: int = 8, loop_bound: int = 8) -> Verdict:
    """Enumerate every product lasso with ``|stem| <= stem_bound`` and
    ``1 <= |loop| <= loop_bound``; Fail iff some enumerated label word
    violates ``spec``."""
    product = build_product(m, c)
    if len(product.states) > 64:
        raise ValueError("product too large for brute-force enumeration")

    # stems[end_state] = {(label word, state word)} for walks from the initial state
    stems: Dict[ProductState, set] = {s: set() for s in product.states}
    frontier = [(product.initial, (), ())]
    stems[product.initial].add(((), ()))
    for _ in range(stem_bound):
        nxt = []
        for state, labels, nodes in frontier:
            for edge in product.outgoing.get(state, []):
                word = labels + (edge.label,)
                path = nodes + (state,)
                key = (word, path)
                if key not in stems[edge.dst]:
                    stems[edge.dst].add(key)
                    nxt.append((edge.dst, word, path))
        frontier = nxt

    evaluated: Dict[Tuple, bool] = {}
    found_lasso = False
    for head in product.states:
        if not stems[head]:
            continue
        loops = _loops_from(product, head, loop_bound)
        if not loops:
            continue
        found_lasso = True
        for stem_word, stem_path in sorted(stems[head]):
            for loop_word, loop_path in loops:
                key = (stem_word, loop_word)
                verdict = evaluated.get(key)
                if verdict is None:
                    verdict = eval_lasso(spec, stem_word, loop_word)
                    evaluated[key] = verdict
                if not verdict:
                    stem = [TraceStep(s[0], s[1], l)
                            for s, l in zip(stem_path, stem_word)]
                    loop = [TraceStep(s[0], s[1], l)
                            for s, l in zip(loop_path, loop_word)]
                    return Verdict(passed=False,
                                   counterexample=Counterexample(stem=stem, loop=loop))
    if not found_lasso:
        raise BoundsTooSmall(
            f"no lasso within stem<={stem_bound}, loop<={loop_bound}")
    return Verdict(passed=True)


def _loops_from(product, head: ProductState, bound: int) -> List[Tuple[tuple, tuple]]:
    """All closed walks head -> head of length <= bound, as
    (label word, state word) pairs."""
    loops = []
    seen = set()

    def walk(state, labels, nodes):
        if len(labels) >= bound:
            return
        for edge in product.outgoing.get(state, []):
            word = labels + (edge.label,)
            path = nodes + (state,)
            if edge.dst == head:
                if word not in seen:
                    seen.add(word)
                    loops.append((word, path))
            walk(edge.dst, word, path)

    walk(head, (), ())
    loops.sort()
    return loops
