"""LTL to Buchi automaton translation (classic tableau node-splitting
construction, followed by degeneralization to a single acceptance set).

Transition guards are conjunctions of literals represented as a pair of
frozensets (required atoms, forbidden atoms); a label set satisfies a guard
when it contains every required atom and no forbidden one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

from taskfsa.verify.ltl import (
    LAnd,
    LFalse,
    LNext,
    LNot,
    LOr,
    LProp,
    LRelease,
    LTrue,
    LUntil,
    LtlFormula,
    to_nnf,
)

Guard = Tuple[FrozenSet[str], FrozenSet[str]]  # (positive, negative)


def guard_satisfied(guard: Guard, label: FrozenSet[str]) -> bool:
    pos, neg = guard
    return pos <= label and not (neg & label)


@dataclass
class BuchiAutomaton:
    states: List[int]
    initial: int
    # state -> ordered list of (guard, destination)
    transitions: Dict[int, List[Tuple[Guard, int]]]
    accepting: FrozenSet[int]

    def successors(self, state: int, label: FrozenSet[str]):
        return [dst for guard, dst in self.transitions.get(state, []) if guard_satisfied(guard, label)]


@dataclass
class _Node:
    name: int
    incoming: set = field(default_factory=set)
    new: set = field(default_factory=set)
    old: set = field(default_factory=set)
    nxt: set = field(default_factory=set)


_INIT = 0


def _is_literal(f: LtlFormula) -> bool:
    return isinstance(f, (LTrue, LFalse, LProp)) or (
        isinstance(f, LNot) and isinstance(f.sub, LProp)
    )


def _contradicts(f: LtlFormula, old: set) -> bool:
    if isinstance(f, LFalse):
        return True
    if isinstance(f, LProp):
        return LNot(f) in old
    if isinstance(f, LNot):
        return f.sub in old
    return False


def to_buchi(formula: LtlFormula) -> BuchiAutomaton:
    """Translate an LTL formula into a (nondeterministic) Buchi automaton
    accepting exactly the infinite words that satisfy it."""
    f = to_nnf(formula)
    counter = [_INIT]

    def fresh() -> int:
        counter[0] += 1
        return counter[0]

    nodes: List[_Node] = []

    def expand(node: _Node):
        if not node.new:
            for nd in nodes:
                if nd.old == node.old and nd.nxt == node.nxt:
                    nd.incoming |= node.incoming
                    return
            nodes.append(node)
            succ = _Node(fresh(), incoming={node.name}, new=set(node.nxt))
            expand(succ)
            return
        eta = _pick(node.new)
        node.new.discard(eta)
        if _is_literal(eta):
            if _contradicts(eta, node.old):
                return  # inconsistent node, drop
            if not isinstance(eta, LTrue):
                node.old.add(eta)
            expand(node)
        elif isinstance(eta, LAnd):
            node.new |= {eta.left, eta.right} - node.old
            node.old.add(eta)
            expand(node)
        elif isinstance(eta, LNext):
            node.old.add(eta)
            node.nxt.add(eta.sub)
            expand(node)
        elif isinstance(eta, (LOr, LUntil, LRelease)):
            n1 = _Node(fresh(), incoming=set(node.incoming), new=set(node.new),
                       old=set(node.old) | {eta}, nxt=set(node.nxt))
            n2 = _Node(fresh(), incoming=set(node.incoming), new=set(node.new),
                       old=set(node.old) | {eta}, nxt=set(node.nxt))
            if isinstance(eta, LOr):
                n1.new |= {eta.left} - n1.old
                n2.new |= {eta.right} - n2.old
            elif isinstance(eta, LUntil):
                n1.new |= {eta.left} - n1.old
                n1.nxt.add(eta)
                n2.new |= {eta.right} - n2.old
            else:  # Release
                n1.new |= {eta.right} - n1.old
                n1.nxt.add(eta)
                n2.new |= {eta.left, eta.right} - n2.old
            expand(n1)
            expand(n2)
        else:
            raise TypeError(f"unexpected formula in tableau: {eta!r}")

    expand(_Node(fresh(), incoming={_INIT}, new={f}))

    # Guards: the literals collected in each node.
    def guard_of(node: _Node) -> Guard:
        pos = frozenset(g.name for g in node.old if isinstance(g, LProp))
        neg = frozenset(g.sub.name for g in node.old
                        if isinstance(g, LNot) and isinstance(g.sub, LProp))
        return pos, neg

    # Generalized acceptance: one set per Until subformula.
    untils = sorted(
        {g for nd in nodes for g in nd.old if isinstance(g, LUntil)},
        key=repr,
    )
    gen_sets = []
    for u in untils:
        gen_sets.append(frozenset(
            nd.name for nd in nodes if u.right in nd.old or u not in nd.old
        ))
    if not gen_sets:
        gen_sets = [frozenset(nd.name for nd in nodes)]

    by_name = {nd.name: nd for nd in nodes}
    edges: Dict[int, List[Tuple[Guard, int]]] = {n: [] for n in [_INIT] + [nd.name for nd in nodes]}
    for nd in nodes:
        g = guard_of(nd)
        for src in sorted(nd.incoming):
            edges[src].append((g, nd.name))
    for src in edges:
        edges[src].sort(key=lambda e: (sorted(e[0][0]), sorted(e[0][1]), e[1]))

    return _degeneralize(sorted(by_name), _INIT, edges, gen_sets)


def _pick(new: set) -> LtlFormula:
    return sorted(new, key=repr)[0]


def _degeneralize(states, initial, edges, gen_sets) -> BuchiAutomaton:
    k = len(gen_sets)
    if k == 1:
        acc = gen_sets[0]
        trans = {s: list(edges.get(s, [])) for s in [initial] + states}
        return BuchiAutomaton(states=[initial] + states, initial=initial,
                              transitions=trans, accepting=frozenset(acc))
    # Counter product: copy i waits for a visit to gen_sets[i].
    def enc(q, i):
        return (q, i)

    trans: Dict = {}
    all_states = [enc(initial, 0)]
    seen = {enc(initial, 0)}
    queue = [enc(initial, 0)]
    while queue:
        q, i = queue.pop(0)
        out = []
        # the counter advances when the *current* state is in the i-th set
        for guard, dst in edges.get(q, []):
            j = (i + 1) % k if q in gen_sets[i] else i
            tgt = enc(dst, j)
            out.append((guard, tgt))
            if tgt not in seen:
                seen.add(tgt)
                all_states.append(tgt)
                queue.append(tgt)
        trans[(q, i)] = out
    accepting = frozenset(s for s in all_states if s[1] == 0 and s[0] in gen_sets[0])
    return BuchiAutomaton(states=all_states, initial=enc(initial, 0),
                          transitions=trans, accepting=accepting)


def buchi_accepts_lasso(aut: BuchiAutomaton, stem, loop) -> bool:
    """Whether the automaton accepts ``stem . loop^omega``.

    Used as the independent cross-check between the tableau translation and
    the direct word semantics: positions of the lasso are unrolled into a
    finite graph and we look for a reachable cycle through an accepting
    state confined to the loop section.
    """
    word = [frozenset(w) for w in stem] + [frozenset(w) for w in loop]
    n = len(word)
    first_loop = len(stem)
    succ = list(range(1, n)) + [first_loop]

    # Nodes (buchi state, position); edges consume word[position].
    adj: Dict = {}
    start = (aut.initial, 0)
    stack = [start]
    seen = {start}
    while stack:
        b, i = stack.pop()
        nbrs = []
        for dst in aut.successors(b, word[i]):
            nxt = (dst, succ[i])
            nbrs.append(nxt)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
        adj[(b, i)] = nbrs

    # Accepting cycle within the loop section, via Tarjan SCCs.
    index: Dict = {}
    low: Dict = {}
    onstack: Dict = {}
    stack2: List = []
    counter = [0]
    accepted = [False]

    import sys

    sys.setrecursionlimit(10000)

    def strongconnect(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack2.append(v)
        onstack[v] = True
        for w in adj.get(v, []):
            if w not in index:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif onstack.get(w):
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack2.pop()
                onstack[w] = False
                comp.append(w)
                if w == v:
                    break
            nontrivial = len(comp) > 1 or v in adj.get(v, [])
            if nontrivial and any(b in aut.accepting and i >= first_loop for b, i in comp):
                accepted[0] = True

    for v in sorted(seen):
        if v not in index:
            strongconnect(v)
    return accepted[0]
