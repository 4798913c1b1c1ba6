"""Core automaton types: propositions, condition formulas, controllers, models.

Everything downstream (parsing, building, verification, refinement) works
over the value types defined here.  All types are immutable and hashable so
they can be shared freely; collections are kept in deterministic insertion
order so that serialization and graph export are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

CONDITION = "condition"
ACTION = "action"
GOAL = "goal"

_KINDS = (CONDITION, ACTION, GOAL)

# Reserved atom names usable in model guards / product labels.
EPS_ATOM = "eps"
STUCK_ATOM = "stuck"


@dataclass(frozen=True, order=True)
class Proposition:
    """An atomic proposition identified by its normalized lemma string."""

    id: str
    kind: str = CONDITION

    def __post_init__(self):
        if not self.id:
            raise ValueError("proposition id must be non-empty")
        if self.id != " ".join(self.id.split()) or self.id != self.id.lower():
            raise ValueError(f"proposition id not normalized: {self.id!r}")
        if self.kind not in _KINDS:
            raise ValueError(f"unknown proposition kind: {self.kind!r}")
        if self.kind == GOAL and self.id != "goal":
            raise ValueError("kind=goal is reserved for the 'goal' proposition")
        if self.id == "goal" and self.kind != GOAL:
            raise ValueError("the 'goal' proposition must have kind=goal")


GOAL_PROP = Proposition("goal", GOAL)


def cond_prop(name: str) -> Proposition:
    return Proposition(name, CONDITION)


def action_prop(name: str) -> Proposition:
    return Proposition(name, ACTION)


# ---------------------------------------------------------------------------
# Condition formulas (propositional AST over condition propositions)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CondFormula:
    pass


@dataclass(frozen=True)
class TrueF(CondFormula):
    pass


@dataclass(frozen=True)
class PropF(CondFormula):
    prop: Proposition


@dataclass(frozen=True)
class NotF(CondFormula):
    sub: CondFormula


@dataclass(frozen=True)
class AndF(CondFormula):
    left: CondFormula
    right: CondFormula


@dataclass(frozen=True)
class OrF(CondFormula):
    left: CondFormula
    right: CondFormula


TRUE = TrueF()

Valuation = Union[Iterable[Proposition], Iterable[str]]


def _valuation_ids(valuation: Valuation) -> frozenset:
    ids = set()
    for v in valuation:
        ids.add(v.id if isinstance(v, Proposition) else v)
    return frozenset(ids)


def eval_formula(f: CondFormula, valuation: Valuation) -> bool:
    """Evaluate ``f`` under a valuation (the set of true propositions)."""
    ids = valuation if isinstance(valuation, frozenset) else _valuation_ids(valuation)
    return _eval(f, ids)


def _eval(f: CondFormula, ids: frozenset) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, PropF):
        return f.prop.id in ids
    if isinstance(f, NotF):
        return not _eval(f.sub, ids)
    if isinstance(f, AndF):
        return _eval(f.left, ids) and _eval(f.right, ids)
    if isinstance(f, OrF):
        return _eval(f.left, ids) or _eval(f.right, ids)
    raise TypeError(f"not a condition formula: {f!r}")


def negate_to_nnf(f: CondFormula) -> CondFormula:
    """Return the negation of ``f`` in negation normal form.

    Negation ends up only on leaves; ``not True`` is kept as a ``NotF(TrueF)``
    leaf, the contradiction constant.
    """
    if isinstance(f, TrueF):
        return NotF(TRUE)
    if isinstance(f, PropF):
        return NotF(f)
    if isinstance(f, NotF):
        return to_nnf(f.sub)
    if isinstance(f, AndF):
        return OrF(negate_to_nnf(f.left), negate_to_nnf(f.right))
    if isinstance(f, OrF):
        return AndF(negate_to_nnf(f.left), negate_to_nnf(f.right))
    raise TypeError(f"not a condition formula: {f!r}")


def to_nnf(f: CondFormula) -> CondFormula:
    if isinstance(f, (TrueF, PropF)):
        return f
    if isinstance(f, NotF):
        return negate_to_nnf(f.sub)
    if isinstance(f, AndF):
        return AndF(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, OrF):
        return OrF(to_nnf(f.left), to_nnf(f.right))
    raise TypeError(f"not a condition formula: {f!r}")


def formula_props(f: CondFormula) -> list:
    """Propositions referenced by ``f``, in first-occurrence order."""
    out: list = []

    def walk(g: CondFormula):
        if isinstance(g, PropF):
            if g.prop not in out:
                out.append(g.prop)
        elif isinstance(g, NotF):
            walk(g.sub)
        elif isinstance(g, (AndF, OrF)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return out


def and_all(parts: Sequence[CondFormula]) -> CondFormula:
    if not parts:
        return TRUE
    f = parts[0]
    for p in parts[1:]:
        f = AndF(f, p)
    return f


def or_all(parts: Sequence[CondFormula]) -> CondFormula:
    if not parts:
        return NotF(TRUE)
    f = parts[0]
    for p in parts[1:]:
        f = OrF(f, p)
    return f


def canonical_key(f: CondFormula):
    """AC-canonical structural key: conjuncts/disjuncts sorted, so labels
    that differ only in operand order compare equal (used by the graph
    isomorphism checks)."""
    if isinstance(f, TrueF):
        return ("true",)
    if isinstance(f, PropF):
        return ("prop", f.prop.id)
    if isinstance(f, NotF):
        return ("not", canonical_key(f.sub))
    if isinstance(f, (AndF, OrF)):
        op = "and" if isinstance(f, AndF) else "or"
        parts: list = []

        def flatten(g):
            if isinstance(g, type(f)):
                flatten(g.left)
                flatten(g.right)
            else:
                parts.append(canonical_key(g))

        flatten(f)
        return (op, tuple(sorted(parts)))
    raise TypeError(f"not a condition formula: {f!r}")


# ---------------------------------------------------------------------------
# Controller
# ---------------------------------------------------------------------------

# An action set is the controller's output symbol; the empty tuple is the
# no-operation symbol (eps).
ActionSet = tuple
EPSILON: ActionSet = ()


def action_set(props: Iterable[Proposition]) -> ActionSet:
    return tuple(sorted(set(props)))


@dataclass(frozen=True)
class Transition:
    src: str
    cond: CondFormula
    out: ActionSet
    dst: str

    def label_key(self):
        return (canonical_key(self.cond), tuple(p.id for p in self.out))


@dataclass(frozen=True)
class Controller:
    """Finite-state controller: states, condition/action alphabets and a
    nondeterministic transition relation with formula guards."""

    props: tuple
    actions: tuple
    states: tuple
    initial: str
    absorbing: str
    transitions: tuple
    step_of: Mapping[str, str] = field(default_factory=dict)

    def outgoing(self, state: str) -> list:
        return [t for t in self.transitions if t.src == state]

    def replace(self, **kw) -> "Controller":
        data = {
            "props": self.props,
            "actions": self.actions,
            "states": self.states,
            "initial": self.initial,
            "absorbing": self.absorbing,
            "transitions": self.transitions,
            "step_of": self.step_of,
        }
        data.update(kw)
        return Controller(**data)


def dedup_transitions(transitions: Iterable[Transition]) -> tuple:
    seen = set()
    out = []
    for t in transitions:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


def make_controller(states, initial, absorbing, transitions, step_of=None) -> Controller:
    """Assemble a controller, deriving the alphabets from the transitions."""
    props: list = []
    actions: list = []
    transitions = dedup_transitions(transitions)
    for t in transitions:
        for p in formula_props(t.cond):
            if p not in props:
                props.append(p)
        for a in t.out:
            if a not in actions:
                actions.append(a)
    return Controller(
        props=tuple(props),
        actions=tuple(actions),
        states=tuple(states),
        initial=initial,
        absorbing=absorbing,
        transitions=transitions,
        step_of=dict(step_of or {}),
    )


def validate_controller(c: Controller) -> list:
    """Check the structural invariants; returns a list of violation strings
    (empty when the controller is well formed)."""
    issues = []
    states = set(c.states)
    if len(c.states) != len(states):
        issues.append("duplicate state ids")
    if c.initial not in states:
        issues.append(f"initial state {c.initial!r} not in states")
    if c.absorbing not in states:
        issues.append(f"absorbing state {c.absorbing!r} not in states")
    props = set(c.props)
    actions = set(c.actions)
    for p in c.props:
        if p.kind != CONDITION:
            issues.append(f"non-condition proposition housed in props: {p.id!r}")
    for a in c.actions:
        if a.kind != ACTION:
            issues.append(f"non-action proposition housed in actions: {a.id!r}")
    if len(set(c.transitions)) != len(c.transitions):
        issues.append("duplicate transitions")
    for t in c.transitions:
        if t.src not in states or t.dst not in states:
            issues.append(f"transition {t.src}->{t.dst} uses unknown state")
        for p in formula_props(t.cond):
            if p not in props:
                issues.append(f"unhoused proposition {p.id!r} on {t.src}->{t.dst}")
        for a in t.out:
            if a not in actions:
                issues.append(f"unhoused action {a.id!r} on {t.src}->{t.dst}")
    absorbing_out = [t for t in c.transitions if t.src == c.absorbing]
    if len(absorbing_out) != 1:
        issues.append("absorbing self-loop not unique")
    else:
        t = absorbing_out[0]
        if t.dst != c.absorbing or t.out != EPSILON or not isinstance(t.cond, TrueF):
            issues.append("absorbing transition is not (True, eps) self-loop")
    return issues


# ---------------------------------------------------------------------------
# Model (labeled transition system supplied by the user)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelTransition:
    src: str
    guard: CondFormula  # over action propositions plus the reserved eps atom
    dst: str


@dataclass(frozen=True)
class Model:
    """External task knowledge: consumes controller action sets, emits
    condition/goal labels per state."""

    action_props: tuple
    label_props: tuple
    states: tuple
    initial: str
    transitions: tuple
    labels: Mapping[str, tuple]

    def label_ids(self, state: str) -> frozenset:
        return frozenset(p.id for p in self.labels.get(state, ()))

    def outgoing(self, state: str) -> list:
        return [t for t in self.transitions if t.src == state]


def guard_satisfied(guard: CondFormula, out: ActionSet) -> bool:
    """Evaluate a model guard against an emitted action set.  The reserved
    ``eps`` atom is true exactly when the action set is empty."""
    ids = {a.id for a in out}
    if not out:
        ids.add(EPS_ATOM)
    return eval_formula(guard, frozenset(ids))


def validate_model(m: Model) -> list:
    issues = []
    states = set(m.states)
    if m.initial not in states:
        issues.append(f"initial state {m.initial!r} not in states")
    label_props = set(m.label_props)
    if GOAL_PROP not in label_props:
        issues.append("label_props must include the goal proposition")
    action_ids = {p.id for p in m.action_props}
    for s, props in m.labels.items():
        if s not in states:
            issues.append(f"label for unknown state {s!r}")
        for p in props:
            if p not in label_props:
                issues.append(f"label {p.id!r} of state {s!r} not in label_props")
    for t in m.transitions:
        if t.src not in states or t.dst not in states:
            issues.append(f"transition {t.src}->{t.dst} uses unknown state")
        for p in formula_props(t.guard):
            if p.id != EPS_ATOM and p.id not in action_ids:
                issues.append(f"guard atom {p.id!r} on {t.src}->{t.dst} not an action prop")
    for s in m.states:
        if not _has_enabled_transition(m, s):
            issues.append(f"dead-end state {s!r}: no enabled outgoing transition")
    return issues


def _has_enabled_transition(m: Model, state: str) -> bool:
    outgoing = m.outgoing(state)
    if not outgoing:
        return False
    atoms = []
    for t in outgoing:
        for p in formula_props(t.guard):
            if p.id != EPS_ATOM and p.id not in atoms:
                atoms.append(p.id)
    atoms = atoms[:10]  # enough for any sane guard
    for mask in range(1 << len(atoms)):
        chosen = frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)
        ids = chosen if chosen else frozenset([EPS_ATOM])
        if any(eval_formula(t.guard, ids) for t in outgoing):
            return True
    return False
