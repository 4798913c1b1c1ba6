"""Counterexample-guided refinement: synonym consolidation between the
controller's and the model's vocabularies, manual prompt-driven refinement,
automated substep expansion up to a depth bound, and verification-
preserving pruning."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from taskfsa.builder import build_mixed
from taskfsa.core import (
    Controller,
    Model,
    PropF,
    Proposition,
    Transition,
    make_controller,
)
from taskfsa.glm import (
    GlmSession,
    StepTree,
    UnparseableVerdict,
    build_refinement_prompt,
    query_steps,
    query_substeps,
    query_synonym,
    split_completion,
)
from taskfsa.stepparse import parse_step
from taskfsa.verify import Counterexample, check
from taskfsa.verify.ltl import LtlFormula

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_UNREPRESENTABLE = "unrepresentable"


@dataclass
class SynonymMap:
    """Phrase -> canonical phrase; identity for unmapped phrases, hence
    idempotent by construction."""

    mapping: Dict[str, str] = field(default_factory=dict)
    unresolved: List[Tuple[str, str, str]] = field(default_factory=list)

    def canonical(self, phrase: str) -> str:
        return self.mapping.get(phrase, phrase)

    def apply(self, c: Controller) -> Controller:
        def rewrite_prop(p: Proposition) -> Proposition:
            return Proposition(self.canonical(p.id), p.kind)

        def rewrite_formula(f):
            from taskfsa.core import AndF, NotF, OrF, TrueF

            if isinstance(f, TrueF):
                return f
            if isinstance(f, PropF):
                return PropF(rewrite_prop(f.prop))
            if isinstance(f, NotF):
                return NotF(rewrite_formula(f.sub))
            if isinstance(f, AndF):
                return AndF(rewrite_formula(f.left), rewrite_formula(f.right))
            if isinstance(f, OrF):
                return OrF(rewrite_formula(f.left), rewrite_formula(f.right))
            raise TypeError(f)

        transitions = [
            Transition(t.src, rewrite_formula(t.cond),
                       tuple(rewrite_prop(a) for a in t.out), t.dst)
            for t in c.transitions
        ]
        return make_controller(c.states, c.initial, c.absorbing, transitions, c.step_of)


def consolidate_synonyms(c: Controller, m: Model,
                         glm: GlmSession) -> Tuple[Controller, SynonymMap]:
    """For each controller phrase absent from the model's vocabulary, ask
    the GLM pairwise against same-kind model phrases; on the first Yes the
    model's phrase becomes canonical.  Identical phrases are never queried.
    """
    syn = SynonymMap()
    model_actions = [p.id for p in m.action_props]
    model_conds = [p.id for p in m.label_props if p.kind != "goal"]
    pair_sources = [
        ([a.id for a in c.actions], model_actions),
        ([p.id for p in c.props], model_conds),
    ]
    for ctrl_phrases, model_phrases in pair_sources:
        for phrase in ctrl_phrases:
            if phrase in model_phrases:
                continue
            for candidate in model_phrases:
                try:
                    same, rationale = query_synonym(glm, phrase, candidate)
                except UnparseableVerdict as exc:
                    syn.unresolved.append((phrase, candidate, str(exc)))
                    continue
                if same:
                    syn.mapping[phrase] = candidate
                    break
    return syn.apply(c), syn


# ---------------------------------------------------------------------------
# Refinement sessions
# ---------------------------------------------------------------------------


@dataclass
class SpecResult:
    name: str
    passed: bool
    counterexample: Optional[Counterexample] = None


@dataclass
class IterationRecord:
    kind: str  # initial | manual | auto | prune
    prompt: Optional[str]
    steps: List[Tuple[str, str]]
    controller: Controller
    consolidated: Controller
    results: List[SpecResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def counterexample(self) -> Optional[Counterexample]:
        for r in self.results:
            if not r.passed:
                return r.counterexample
        return None


@dataclass
class RefinementSession:
    task: str
    tree: StepTree
    model: Model
    specs: List[Tuple[str, LtlFormula]]
    glm: GlmSession
    max_depth: int = 3
    depth: int = 1
    synonyms: SynonymMap = field(default_factory=SynonymMap)
    history: List[IterationRecord] = field(default_factory=list)
    status: str = STATUS_FAIL

    @property
    def controller(self) -> Controller:
        return self.history[-1].controller if self.history else None

    @property
    def consolidated(self) -> Controller:
        return self.history[-1].consolidated if self.history else None

    def effective_steps(self) -> List[Tuple[str, str]]:
        return [(n.number, n.text) for n in self.tree.effective_steps()]


def _build_controller(tree: StepTree) -> Controller:
    parsed = [parse_step(n.number, n.text) for n in tree.effective_steps()]
    controller, _ = build_mixed(parsed)
    return controller


def _verify(session: RefinementSession, controller: Controller) -> Tuple[Controller, SynonymMap, List[SpecResult]]:
    consolidated, syn = consolidate_synonyms(controller, session.model, session.glm)
    results = []
    for name, formula in session.specs:
        verdict = check(session.model, consolidated, formula)
        results.append(SpecResult(name, verdict.passed, verdict.counterexample))
    return consolidated, syn, results


def _record(session: RefinementSession, kind: str, prompt: Optional[str],
            controller: Controller) -> IterationRecord:
    consolidated, syn, results = _verify(session, controller)
    record = IterationRecord(
        kind=kind,
        prompt=prompt,
        steps=session.effective_steps(),
        controller=controller,
        consolidated=consolidated,
        results=results,
    )
    session.synonyms = syn
    session.history.append(record)
    session.status = STATUS_PASS if record.passed else STATUS_FAIL
    return record


def create_session(task: str, model: Model, specs: List[Tuple[str, LtlFormula]],
                   glm: GlmSession, depth: int = 1, max_depth: int = 3) -> RefinementSession:
    """Query the GLM for steps, build the first controller and verify it."""
    tree = query_steps(glm, task, depth=depth)
    session = RefinementSession(task=task, tree=tree, model=model, specs=list(specs),
                                glm=glm, max_depth=max_depth, depth=depth)
    _record(session, "initial", None, _build_controller(tree))
    return session


def session_from_tree(task: str, tree: StepTree, model: Model,
                      specs: List[Tuple[str, LtlFormula]], glm: GlmSession,
                      max_depth: int = 3) -> RefinementSession:
    session = RefinementSession(task=task, tree=tree, model=model, specs=list(specs),
                                glm=glm, max_depth=max_depth,
                                depth=max(tree.max_depth, 1))
    _record(session, "initial", None, _build_controller(tree))
    return session


def manual_refine(session: RefinementSession, instruction: str) -> RefinementSession:
    """Counterexample-guided refinement: the user's instruction becomes a
    revision prompt; the revised steps replace the tree and the controller
    is rebuilt and re-verified."""
    if session.status != STATUS_FAIL:
        raise ValueError("manual refinement requires a failing verdict")
    prompt = build_refinement_prompt(session.effective_steps(), instruction, session.glm)
    completion = session.glm.complete(prompt)
    tree = StepTree(task=session.task, conversation=session.tree.conversation)
    for number, text in split_completion("1", completion):
        tree.add(number, text)
    controller = _build_controller(tree)  # parse/build errors leave the session untouched
    session.tree = tree
    session.depth = 1
    _record(session, "manual", prompt.text, controller)
    return session


def auto_refine(session: RefinementSession) -> RefinementSession:
    """Expand every leaf step into substeps and re-verify, repeating until
    the specifications pass or the layer bound is hit (then the task is
    deemed unrepresentable)."""
    if session.status != STATUS_FAIL:
        return session
    while session.status == STATUS_FAIL:
        if session.depth >= session.max_depth:
            session.status = STATUS_UNREPRESENTABLE
            break
        for leaf in list(session.tree.leaves()):
            query_substeps(session.glm, session.tree, leaf.number)
        session.depth += 1
        _record(session, "auto", None, _build_controller(session.tree))
    return session


def prune(session: RefinementSession) -> RefinementSession:
    """Bottom-up, document order: collapse each substep group back into its
    parent whenever every specification still passes."""
    if session.status != STATUS_PASS:
        raise ValueError("pruning requires a passing controller")
    attempted = set()
    collapsed: List[str] = []
    while True:
        candidates = [
            n.number for n in sorted(session.tree.nodes.values(),
                                     key=lambda n: (-n.depth, _num_key(n.number)))
            if session.tree.children(n.number)
            and all(not session.tree.children(k.number)
                    for k in session.tree.children(n.number))
            and n.number not in attempted
        ]
        if not candidates:
            break
        for number in candidates:
            attempted.add(number)
            candidate_tree = session.tree.without_children(number)
            try:
                controller = _build_controller(candidate_tree)
                consolidated, _, results = _verify(session, controller)
            except Exception:
                continue  # unparsable or unbuildable collapse: keep expanded
            if all(r.passed for r in results):
                session.tree = candidate_tree
                collapsed.append(number)
    record = _record(session, "prune", None, _build_controller(session.tree))
    if not record.passed:  # cannot happen: every kept collapse re-verified
        raise AssertionError("prune broke a passing controller")
    return session


def _num_key(number: str):
    return tuple(int(p) for p in number.split("."))


# ---------------------------------------------------------------------------
# Session documents (io integration)
# ---------------------------------------------------------------------------


def counterexample_payload(cex: Optional[Counterexample]) -> Optional[dict]:
    if cex is None:
        return None
    def steps(items):
        return [{"model": s.model_state, "controller": s.controller_state,
                 "label": sorted(s.label)} for s in items]
    stem, loop = cex.collapsed_projection()
    return {"stem": steps(cex.stem), "loop": steps(cex.loop),
            "projection": {"stem": stem, "loop": loop}}


def session_payload(session: RefinementSession) -> dict:
    from taskfsa.io import controller_payload, model_payload
    from taskfsa.verify.ltl import ltl_to_text

    return {
        "task": session.task,
        "steps": [{"number": n, "text": t} for n, t in session.effective_steps()],
        "model": model_payload(session.model),
        "specs": [{"name": n, "formula": ltl_to_text(f)} for n, f in session.specs],
        "depth": session.depth,
        "max_depth": session.max_depth,
        "status": session.status,
        "synonyms": dict(session.synonyms.mapping),
        "history": [
            {
                "kind": rec.kind,
                "prompt": rec.prompt,
                "steps": [{"number": n, "text": t} for n, t in rec.steps],
                "controller": controller_payload(rec.controller),
                "consolidated": controller_payload(rec.consolidated),
                "results": [
                    {
                        "name": r.name,
                        "passed": r.passed,
                        "counterexample": counterexample_payload(r.counterexample),
                    }
                    for r in rec.results
                ],
            }
            for rec in session.history
        ],
    }


def render_counterexample(cex: Counterexample) -> str:
    """Human rendering: the model-state projection first, then the
    per-transition table of states and labels."""
    return cex.render()
