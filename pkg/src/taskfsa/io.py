"""Persistence: versioned JSON documents for every value the pipeline
exchanges, a compact text syntax for propositional formulas, and DOT
export.

All serialization is canonical: fields are emitted in a fixed order and
collections keep their stored order, so re-serializing an unchanged value
is byte-identical.
"""

from __future__ import annotations

import json
from typing import Optional, Tuple, Union

from taskfsa.core import (
    ACTION,
    AndF,
    CONDITION,
    CondFormula,
    Controller,
    EPS_ATOM,
    GOAL,
    Model,
    ModelTransition,
    NotF,
    OrF,
    PropF,
    Proposition,
    TRUE,
    Transition,
    TrueF,
    action_prop,
    cond_prop,
    validate_controller,
    validate_model,
)
from taskfsa.glm import StepTree, Transcript, TranscriptEntry
from taskfsa.verify.ltl import LtlFormula, LtlSyntaxError, parse_ltl, ltl_to_text

SCHEMA_VERSION = 1

KINDS = ("controller", "model", "spec", "session", "transcript", "steptree")


class SchemaError(ValueError):
    def __init__(self, message: str, path: str = "/"):
        super().__init__(f"{message} (at {path})")
        self.path = path


# ---------------------------------------------------------------------------
# Formula text syntax (propositional subset of the LTL concrete syntax)
# ---------------------------------------------------------------------------


def formula_to_text(f: CondFormula) -> str:
    text, _ = _fmt(f)
    return text


def _mangle(name: str) -> str:
    return name.replace(" ", "_")


def _fmt(f: CondFormula) -> Tuple[str, int]:
    # precedence: atoms 3, not 2, and 1, or 0; right operands of the binary
    # connectives are wrapped at equal precedence so parsing (left
    # associative) reproduces the exact AST
    if isinstance(f, TrueF):
        return "true", 3
    if isinstance(f, PropF):
        return _mangle(f.prop.id), 3
    if isinstance(f, NotF):
        text, prec = _fmt(f.sub)
        return "!" + (text if prec >= 2 else f"({text})"), 2
    if isinstance(f, AndF):
        return f"{_wrap(f.left, 1)} & {_wrap(f.right, 2)}", 1
    if isinstance(f, OrF):
        return f"{_wrap(f.left, 0)} | {_wrap(f.right, 1)}", 0
    raise TypeError(f"not a condition formula: {f!r}")


def _wrap(f: CondFormula, min_prec: int) -> str:
    text, prec = _fmt(f)
    return text if prec >= min_prec else f"({text})"


def parse_formula(text: str, kind: str = CONDITION) -> CondFormula:
    """Parse the propositional syntax into a condition formula whose leaves
    carry ``kind`` propositions (``eps`` stays an action atom)."""
    try:
        ltl = parse_ltl(text)
    except LtlSyntaxError as exc:
        raise SchemaError(f"bad formula {text!r}: {exc}") from exc
    return _from_ltl(ltl, kind, text)


def _from_ltl(node, kind: str, source: str) -> CondFormula:
    from taskfsa.verify import ltl as L

    if isinstance(node, L.LTrue):
        return TRUE
    if isinstance(node, L.LFalse):
        return NotF(TRUE)
    if isinstance(node, L.LProp):
        if node.name == EPS_ATOM or kind == ACTION:
            prop_kind = ACTION
        else:
            prop_kind = kind
        return PropF(Proposition(node.name, prop_kind))
    if isinstance(node, L.LNot):
        return NotF(_from_ltl(node.sub, kind, source))
    if isinstance(node, L.LAnd):
        return AndF(_from_ltl(node.left, kind, source), _from_ltl(node.right, kind, source))
    if isinstance(node, L.LOr):
        return OrF(_from_ltl(node.left, kind, source), _from_ltl(node.right, kind, source))
    raise SchemaError(f"temporal operator not allowed in formula {source!r}")


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------


def _document(kind: str, payload: dict) -> dict:
    return {"kind": kind, "version": SCHEMA_VERSION, "payload": payload}


def controller_payload(c: Controller) -> dict:
    states = []
    for s in c.states:
        entry: dict = {"id": s}
        if s in c.step_of:
            entry["step"] = c.step_of[s]
        states.append(entry)
    return {
        "props": [p.id for p in c.props],
        "actions": [a.id for a in c.actions],
        "states": states,
        "initial": c.initial,
        "absorbing": c.absorbing,
        "transitions": [
            {
                "from": t.src,
                "cond": formula_to_text(t.cond),
                "out": [a.id for a in t.out],
                "to": t.dst,
            }
            for t in c.transitions
        ],
    }


def controller_from_payload(payload: dict, path: str = "/payload") -> Controller:
    try:
        states = [s["id"] for s in payload["states"]]
        step_of = {s["id"]: s["step"] for s in payload["states"] if "step" in s}
        transitions = []
        for i, t in enumerate(payload["transitions"]):
            transitions.append(Transition(
                t["from"],
                parse_formula(t["cond"], CONDITION),
                tuple(action_prop(a) for a in t["out"]),
                t["to"],
            ))
        controller = Controller(
            props=tuple(cond_prop(p) for p in payload["props"]),
            actions=tuple(action_prop(a) for a in payload["actions"]),
            states=tuple(states),
            initial=payload["initial"],
            absorbing=payload["absorbing"],
            transitions=tuple(transitions),
            step_of=step_of,
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed controller: {exc!r}", path) from exc
    return controller


def _label_prop(name: str) -> Proposition:
    return Proposition("goal", GOAL) if name == "goal" else cond_prop(name)


def model_payload(m: Model) -> dict:
    return {
        "action_props": [p.id for p in m.action_props],
        "label_props": [p.id for p in m.label_props],
        "states": list(m.states),
        "initial": m.initial,
        "labels": {s: [p.id for p in m.labels.get(s, ())] for s in m.states},
        "transitions": [
            {"from": t.src, "guard": formula_to_text(t.guard), "to": t.dst}
            for t in m.transitions
        ],
    }


def model_from_payload(payload: dict, path: str = "/payload") -> Model:
    try:
        model = Model(
            action_props=tuple(action_prop(a) for a in payload["action_props"]),
            label_props=tuple(_label_prop(p) for p in payload["label_props"]),
            states=tuple(payload["states"]),
            initial=payload["initial"],
            transitions=tuple(
                ModelTransition(t["from"], parse_formula(t["guard"], ACTION), t["to"])
                for t in payload["transitions"]
            ),
            labels={s: tuple(_label_prop(p) for p in props)
                    for s, props in payload["labels"].items()},
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed model: {exc!r}", path) from exc
    return model


def steptree_payload(tree: StepTree) -> dict:
    payload = {
        "task": tree.task,
        "steps": [{"number": n.number, "text": n.text}
                  for _, n in sorted(tree.nodes.items(),
                                     key=lambda kv: tuple(int(p) for p in kv[0].split(".")))],
    }
    if tree.conversation:
        # the running prompt history, needed to continue expanding on replay
        payload["conversation"] = tree.conversation
    return payload


def steptree_from_payload(payload: dict, path: str = "/payload") -> StepTree:
    try:
        tree = StepTree(task=payload["task"],
                        conversation=payload.get("conversation", ""))
        for step in payload["steps"]:
            tree.add(step["number"], step["text"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed steptree: {exc!r}", path) from exc
    return tree


def transcript_payload(t: Transcript) -> dict:
    entries = []
    for e in t.entries:
        entry = {"prompt": e.prompt, "completion": e.completion, "backend": e.backend_id}
        if e.timestamp is not None:
            entry["timestamp"] = e.timestamp
        entries.append(entry)
    return {"entries": entries}


def transcript_from_payload(payload: dict, path: str = "/payload") -> Transcript:
    try:
        return Transcript([
            TranscriptEntry(
                prompt=e["prompt"],
                completion=e["completion"],
                backend_id=e.get("backend", "replay"),
                timestamp=e.get("timestamp"),
            )
            for e in payload["entries"]
        ])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed transcript: {exc!r}", path) from exc


def spec_payload(name: str, formula: LtlFormula) -> dict:
    return {"name": name, "formula": ltl_to_text(formula)}


def spec_from_payload(payload: dict, path: str = "/payload") -> Tuple[str, LtlFormula]:
    try:
        return payload["name"], parse_ltl(payload["formula"])
    except LtlSyntaxError as exc:
        raise SchemaError(f"bad LTL formula: {exc}", path + "/formula") from exc
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed spec: {exc!r}", path) from exc


_SERIALIZERS = {
    "controller": controller_payload,
    "model": model_payload,
    "steptree": steptree_payload,
    "transcript": transcript_payload,
}


def serialize(value, kind: Optional[str] = None) -> str:
    """Canonical JSON document for a controller, model, step tree,
    transcript, spec tuple or raw session payload."""
    if kind is None:
        if isinstance(value, Controller):
            kind = "controller"
        elif isinstance(value, Model):
            kind = "model"
        elif isinstance(value, StepTree):
            kind = "steptree"
        elif isinstance(value, Transcript):
            kind = "transcript"
        elif isinstance(value, tuple) and len(value) == 2 and isinstance(value[1], LtlFormula):
            kind = "spec"
        else:
            raise SchemaError(f"cannot infer document kind for {type(value).__name__}")
    if kind == "spec":
        payload = spec_payload(value[0], value[1])
    elif kind == "session":
        payload = value  # session payloads are assembled by the refine module
    else:
        payload = _SERIALIZERS[kind](value)
    return json.dumps(_document(kind, payload), indent=2) + "\n"


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown document kind {kind!r}", "/kind")
    if doc.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported version {doc.get('version')!r}", "/version")
    if "payload" not in doc:
        raise SchemaError("missing payload", "/payload")
    return doc


def deserialize(text: str):
    """Parse a document back into its in-memory value."""
    doc = parse_document(text)
    kind, payload = doc["kind"], doc["payload"]
    if kind == "controller":
        return controller_from_payload(payload)
    if kind == "model":
        return model_from_payload(payload)
    if kind == "steptree":
        return steptree_from_payload(payload)
    if kind == "transcript":
        return transcript_from_payload(payload)
    if kind == "spec":
        return spec_from_payload(payload)
    return payload  # session: structured payload owned by the refine module


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _edge_label(cond: CondFormula, out: tuple) -> str:
    cond_text = formula_to_text(cond).replace("_", " ")
    action = ", ".join(a.id for a in out) if out else "eps"
    return f"({cond_text}, {action})"


def export_dot(value: Union[Controller, Model], name: str = "g") -> str:
    """Deterministic DOT rendering: initial state marked with an entry
    arrow, absorbing (controller) and goal-labeled (model) states drawn as
    double circles, edges labeled "(condition, action)"."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle];',
             '  __start [shape=point, label=""];']
    if isinstance(value, Controller):
        if validate_controller(value):
            raise ValueError("refusing to export invalid controller")
        for s in value.states:
            shape = ", shape=doublecircle" if s == value.absorbing else ""
            lines.append(f'  "{_dot_escape(s)}" [label="{_dot_escape(s)}"{shape}];')
        lines.append(f'  __start -> "{_dot_escape(value.initial)}";')
        for t in value.transitions:
            label = _edge_label(t.cond, t.out)
            lines.append(
                f'  "{_dot_escape(t.src)}" -> "{_dot_escape(t.dst)}"'
                f' [label="{_dot_escape(label)}"];')
    elif isinstance(value, Model):
        if validate_model(value):
            raise ValueError("refusing to export invalid model")
        for s in value.states:
            labels = ", ".join(p.id for p in value.labels.get(s, ())) or "-"
            shape = ", shape=doublecircle" if any(
                p.id == "goal" for p in value.labels.get(s, ())) else ""
            lines.append(
                f'  "{_dot_escape(s)}" [label="{_dot_escape(f"{s}: {labels}")}"{shape}];')
        lines.append(f'  __start -> "{_dot_escape(value.initial)}";')
        for t in value.transitions:
            guard = formula_to_text(t.guard).replace("_", " ")
            lines.append(
                f'  "{_dot_escape(t.src)}" -> "{_dot_escape(t.dst)}"'
                f' [label="{_dot_escape(guard)}"];')
    else:
        raise TypeError(f"cannot export {type(value).__name__} as DOT")
    lines.append("}")
    return "\n".join(lines) + "\n"


def validate_dot(text: str) -> bool:
    """Structural check of the exporter's DOT subset."""
    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith("digraph ") or not lines[0].endswith("{"):
        raise ValueError("not a digraph")
    if lines[-1].strip() != "}":
        raise ValueError("unterminated digraph")
    import re as _re

    node_re = _re.compile(r'^"[^"]*" \[.*\];$')
    edge_re = _re.compile(r'^"[^"]*" -> "[^"]*"( \[label="[^"]*"\])?;$')
    plain_re = _re.compile(r"^(rankdir=LR;|node \[shape=circle\];|__start .*;|__start -> .*;)$")
    for line in lines[1:-1]:
        stripped = line.strip()
        if not (node_re.match(stripped) or edge_re.match(stripped) or plain_re.match(stripped)):
            raise ValueError(f"unexpected DOT line: {stripped!r}")
    return True
