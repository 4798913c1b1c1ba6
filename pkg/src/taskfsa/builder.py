"""Compile parsed steps into a controller.

One state per step, plus one absorbing state; transitions follow the
keyword rules.  Two structural refinements reflect how multi-step texts
compose:

* pair merge: consecutive plain conditionals with complementary conditions
  collapse into a single state carrying both branches (the if/else shape);
* wait fusion: an action-less wait step absorbs the following default
  step's action onto its exit edge.

A direct reference to a step that was expanded resolves to the first state
of its substeps; a reference one past the last top-level step resolves to
the absorbing state.  An if/else state whose branches all resolve to the
same state with no output is vacuous and is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from taskfsa.core import (
    AndF,
    Controller,
    EPSILON,
    TRUE,
    Transition,
    canonical_key,
    make_controller,
    negate_to_nnf,
    or_all,
    to_nnf,
    validate_controller,
)
from taskfsa.stepparse.parser import Branch, ParsedStep, Rule


class DanglingStepRef(ValueError):
    pass


class AmbiguousSplice(ValueError):
    pass


@dataclass
class BuildRecord:
    step_numbers: Tuple[str, ...]
    rule: str
    state: Optional[str]
    transitions: List[Transition] = field(default_factory=list)


BuildTrace = List[BuildRecord]


@dataclass
class _Unit:
    steps: List[ParsedStep]
    kind: str  # "plain" | "merged" | "fused"
    state: str = ""
    vacuous: bool = False

    @property
    def number(self) -> str:
        return self.steps[0].step_number


def _complementary(a, b) -> bool:
    return canonical_key(negate_to_nnf(a)) == canonical_key(to_nnf(b))


def _group_units(parsed: Sequence[ParsedStep]) -> List[_Unit]:
    units: List[_Unit] = []
    i = 0
    while i < len(parsed):
        cur = parsed[i]
        nxt = parsed[i + 1] if i + 1 < len(parsed) else None
        if (
            nxt is not None
            and cur.rule == Rule.CONDITIONAL
            and nxt.rule == Rule.CONDITIONAL
            and cur.direct_target is None
            and nxt.direct_target is None
            and _complementary(cur.conds, nxt.conds)
        ):
            units.append(_Unit([cur, nxt], "merged"))
            i += 2
            continue
        if (
            nxt is not None
            and cur.rule == Rule.SELF_WAIT
            and not cur.acts
            and nxt.rule == Rule.DEFAULT
        ):
            units.append(_Unit([cur, nxt], "fused"))
            i += 2
            continue
        units.append(_Unit([cur], "plain"))
        i += 1
    return units


def build_fsa(parsed: Sequence[ParsedStep], absorbing: str = "abs"):
    """Controller for a flat list of steps (all the same depth, numbering
    contiguous).  Returns (controller, build trace)."""
    if not parsed:
        raise ValueError("no steps to build from")
    depths = {p.step_number.count(".") for p in parsed}
    if len(depths) != 1:
        raise ValueError("steps must all be the same depth")
    return build_mixed(parsed, absorbing=absorbing)


def build_mixed(parsed: Sequence[ParsedStep], absorbing: str = "abs"):
    """Like build_fsa but accepts a mixed-depth effective step list, as
    produced by selective expansion and pruning."""
    units = _group_units(parsed)
    for u in units:
        u.state = "q" + u.number

    numbers = [p.step_number for p in parsed]
    max_top = max(int(n.split(".")[0]) for n in numbers)
    unit_of_number: Dict[str, _Unit] = {}
    for u in units:
        for s in u.steps:
            unit_of_number[s.step_number] = u

    def next_unit(idx: int) -> Optional[_Unit]:
        for j in range(idx + 1, len(units)):
            if not units[j].vacuous:
                return units[j]
        return None

    def resolve(target: str, origin: str) -> str:
        unit = unit_of_number.get(target)
        if unit is None:
            for u in units:
                if u.number.startswith(target + "."):
                    unit = u
                    break
        if unit is not None:
            if unit.vacuous:
                idx = units.index(unit)
                follow = next_unit(idx)
                return follow.state if follow else absorbing
            return unit.state
        if "." not in target and int(target) == max_top + 1:
            return absorbing
        raise DanglingStepRef(f"step {origin} references unknown step [{target}]")

    def branches_of(unit: _Unit) -> List[Branch]:
        out: List[Branch] = []
        for s in unit.steps:
            if s.rule == Rule.CONDITIONAL_ELSE:
                out.extend(s.branches)
            elif s.branches:
                out.extend(s.branches)
            else:
                out.append(Branch(s.conds, s.wait_conds, s.acts, s.direct_target))
        return out

    # vacuous if/else elimination (fixpoint: dropping may re-target others)
    for _ in range(len(units) + 1):
        changed = False
        for idx, u in enumerate(units):
            if u.vacuous or len(u.steps) != 1 or u.steps[0].rule != Rule.CONDITIONAL_ELSE:
                continue
            brs = u.steps[0].branches
            if any(br.acts or br.target is None for br in brs):
                continue
            try:
                targets = {resolve(br.target, u.number) for br in brs}
            except DanglingStepRef:
                continue
            if len(targets) == 1:
                u.vacuous = True
                changed = True
        if not changed:
            break

    trace: BuildTrace = []
    transitions: List[Transition] = []
    for idx, u in enumerate(units):
        if u.vacuous:
            trace.append(BuildRecord(tuple(s.step_number for s in u.steps),
                                     "vacuous-ifelse", None))
            continue
        follow = next_unit(idx)
        nxt = follow.state if follow else absorbing
        emitted = _emit_unit(u, nxt, resolve)
        transitions.extend(emitted)
        trace.append(BuildRecord(tuple(s.step_number for s in u.steps),
                                 "+".join(s.rule for s in u.steps),
                                 u.state, emitted))
    transitions.append(Transition(absorbing, TRUE, EPSILON, absorbing))

    states = [u.state for u in units if not u.vacuous] + [absorbing]
    step_of = {u.state: u.number for u in units if not u.vacuous}
    controller = make_controller(states, states[0], absorbing, transitions, step_of)
    return controller, trace


def apply_rule(p: ParsedStep, state_of: Dict[str, str], *,
               next_state: Optional[str] = None,
               absorbing: str = "abs") -> Tuple[Transition, ...]:
    """Transitions for a single parsed step, given the step-number to state
    mapping.  ``next_state`` defaults to the state of the following step
    number in the mapping, or the absorbing state for the last step."""
    if p.step_number not in state_of:
        raise ValueError(f"step {p.step_number} not in state mapping")
    if next_state is None:
        ordered = sorted(state_of, key=lambda n: tuple(int(x) for x in n.split(".")))
        idx = ordered.index(p.step_number)
        next_state = state_of[ordered[idx + 1]] if idx + 1 < len(ordered) else absorbing

    def resolve(target: str, origin: str) -> str:
        if target in state_of:
            return state_of[target]
        for number in state_of:
            if number.startswith(target + "."):
                return state_of[number]
        tops = {int(n.split(".")[0]) for n in state_of}
        if "." not in target and int(target) == max(tops) + 1:
            return absorbing
        raise DanglingStepRef(f"step {origin} references unknown step [{target}]")

    unit = _Unit([p], "plain", state=state_of[p.step_number])
    return tuple(_emit_unit(unit, next_state, resolve))


def _emit_unit(u: _Unit, nxt: str, resolve) -> List[Transition]:
    q = u.state
    if u.kind == "fused":
        wait, default = u.steps
        cond = wait.wait_conds
        return [
            Transition(q, cond, default.acts, nxt),
            Transition(q, negate_to_nnf(cond), EPSILON, q),
        ]
    if u.kind == "merged":
        branches = []
        for s in u.steps:
            br = s.branches[0]
            branches.append(br)
        return _emit_branches(q, branches, nxt, resolve, u.number,
                              self_loop=any(br.wait_cond for br in branches))
    step = u.steps[0]
    if step.rule == Rule.DEFAULT:
        return [Transition(q, TRUE, step.acts, nxt)]
    if step.rule == Rule.DIRECT:
        return [Transition(q, TRUE, EPSILON, resolve(step.direct_target, u.number))]
    if step.rule == Rule.CONDITIONAL:
        br = step.branches[0]
        eff = AndF(br.cond, br.wait_cond) if br.wait_cond else br.cond
        target = resolve(br.target, u.number) if br.target else nxt
        return [
            Transition(q, eff, br.acts, target),
            Transition(q, negate_to_nnf(eff), EPSILON, q),
        ]
    if step.rule == Rule.CONDITIONAL_ELSE:
        return _emit_branches(q, step.branches, nxt, resolve, u.number, self_loop=False)
    if step.rule == Rule.SELF_WAIT:
        return [
            Transition(q, step.conds, step.acts, nxt),
            Transition(q, negate_to_nnf(step.conds), EPSILON, q),
        ]
    if step.rule == Rule.SELF_UNTIL:
        return [
            Transition(q, step.conds, EPSILON, nxt),
            Transition(q, negate_to_nnf(step.conds), step.acts, q),
        ]
    raise ValueError(f"unknown rule {step.rule!r}")


def _emit_branches(q: str, branches: List[Branch], nxt: str, resolve,
                   origin: str, self_loop: bool) -> List[Transition]:
    """Emit grouped branch exits: a branch with a wait exits on the wait
    condition; exits sharing action set and target disjoin their
    conditions; the optional self-loop waits out the complement."""
    grouped: List[Tuple[tuple, str, List]] = []  # (acts, target, conds)
    exit_conds = []
    for br in branches:
        cond = br.wait_cond if br.wait_cond is not None else br.cond
        target = resolve(br.target, origin) if br.target else nxt
        exit_conds.append(cond)
        for acts, tgt, conds in grouped:
            if acts == br.acts and tgt == target:
                conds.append(cond)
                break
        else:
            grouped.append((br.acts, target, [cond]))
    out = []
    for acts, tgt, conds in grouped:
        out.append(Transition(q, or_all(conds), acts, tgt))
    if self_loop:
        out.append(Transition(q, negate_to_nnf(or_all(exit_conds)), EPSILON, q))
    return out


# ---------------------------------------------------------------------------
# Composition operations
# ---------------------------------------------------------------------------


def merge_branches(branch_prop, when_false: Controller, when_true: Controller,
                   initial: str = "q0", absorbing: str = "abs") -> Controller:
    """Join two alternative-scenario controllers under a fresh initial state
    that branches on a single condition proposition; the absorbing states
    are unified."""
    def rename(c: Controller, prefix: str):
        mapping = {}
        for s in c.states:
            if s == c.absorbing:
                mapping[s] = absorbing
            elif s.startswith("q"):
                mapping[s] = "q" + prefix + s[1:]
            else:
                mapping[s] = "q" + prefix + "_" + s
        return mapping

    map_f = rename(when_false, "1")
    map_t = rename(when_true, "2")
    from taskfsa.core import NotF, PropF

    transitions: List[Transition] = [
        Transition(initial, NotF(PropF(branch_prop)), EPSILON, map_f[when_false.initial]),
        Transition(initial, PropF(branch_prop), EPSILON, map_t[when_true.initial]),
    ]
    for c, mapping in ((when_false, map_f), (when_true, map_t)):
        for t in c.transitions:
            if t.src == c.absorbing:
                continue
            transitions.append(Transition(mapping[t.src], t.cond, t.out, mapping[t.dst]))
    transitions.append(Transition(absorbing, TRUE, EPSILON, absorbing))

    states = [initial]
    states += [map_f[s] for s in when_false.states if s != when_false.absorbing]
    states += [map_t[s] for s in when_true.states if s != when_true.absorbing]
    states.append(absorbing)
    step_of = {}
    for c, mapping in ((when_false, map_f), (when_true, map_t)):
        for s, n in c.step_of.items():
            step_of[mapping[s]] = n
    return make_controller(states, initial, absorbing, transitions, step_of)


def splice_substeps(parent: Controller, parent_state: str, child: Controller,
                    return_state: Optional[str] = None) -> Controller:
    """Replace a state's single outgoing transition with a no-op edge into a
    child controller, rerouting the child's completion back into the
    parent."""
    outs = [t for t in parent.transitions
            if t.src == parent_state and t.dst != parent_state]
    if len(outs) != 1:
        raise AmbiguousSplice(
            f"state {parent_state!r} has {len(outs)} outgoing non-self transitions")
    replaced = outs[0]
    if return_state is None:
        return_state = replaced.dst

    mapping = {}
    taken = set(parent.states)
    for s in child.states:
        if s == child.absorbing:
            continue
        name = s
        while name in taken:
            name = name + "x"
        mapping[s] = name
        taken.add(name)

    transitions = [t for t in parent.transitions if t is not replaced]
    transitions.append(Transition(parent_state, TRUE, EPSILON, mapping[child.initial]))
    for t in child.transitions:
        if t.src == child.absorbing:
            continue
        dst = return_state if t.dst == child.absorbing else mapping[t.dst]
        transitions.append(Transition(mapping[t.src], t.cond, t.out, dst))

    states = list(parent.states) + [mapping[s] for s in child.states
                                    if s != child.absorbing]
    step_of = dict(parent.step_of)
    for s, n in child.step_of.items():
        if s != child.absorbing:
            step_of[mapping[s]] = n
    merged = make_controller(states, parent.initial, parent.absorbing,
                             transitions, step_of)
    issues = validate_controller(merged)
    if issues:
        raise ValueError("splice produced an invalid controller: " + "; ".join(issues))
    return merged
