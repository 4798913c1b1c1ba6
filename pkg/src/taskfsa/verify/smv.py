"""SMV text export of the model/controller composition, plus a validating
parser for the emitted SMV subset.

The exported module drives three variables in lockstep: the model state,
the controller state and the action symbol emitted on the current step.
Label and action atoms are DEFINEd from those variables so the LTLSPEC can
be written over the original proposition names.  Running NuSMV on the file
is an optional external cross-check, never a dependency.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from taskfsa.core import (
    Controller,
    CondFormula,
    AndF,
    EPS_ATOM,
    Model,
    NotF,
    OrF,
    PropF,
    TrueF,
)
from taskfsa.verify.ltl import (
    LAlways,
    LAnd,
    LEventually,
    LFalse,
    LImplies,
    LNext,
    LNot,
    LOr,
    LProp,
    LRelease,
    LTrue,
    LUntil,
    LtlFormula,
    ltl_atoms,
)
from taskfsa.verify.product import build_product


class SmvError(ValueError):
    pass


def _ident(name: str, prefix: str = "p_") -> str:
    s = re.sub(r"[^A-Za-z0-9_]", "_", name.replace(" ", "_"))
    if not s or s[0].isdigit():
        s = prefix + s
    return s


def _state_sym(name: str) -> str:
    return _ident(name, prefix="s_")


def _action_sym(out: tuple) -> str:
    if not out:
        return "a_eps"
    return "a_" + "__".join(_ident(a.id, prefix="") for a in out)


def _cond_expr(f: CondFormula, atom_map: Dict[str, str]) -> str:
    if isinstance(f, TrueF):
        return "TRUE"
    if isinstance(f, PropF):
        return atom_map[f.prop.id]
    if isinstance(f, NotF):
        return f"!({_cond_expr(f.sub, atom_map)})"
    if isinstance(f, AndF):
        return f"({_cond_expr(f.left, atom_map)} & {_cond_expr(f.right, atom_map)})"
    if isinstance(f, OrF):
        return f"({_cond_expr(f.left, atom_map)} | {_cond_expr(f.right, atom_map)})"
    raise TypeError(f"not a condition formula: {f!r}")


def _ltl_expr(f: LtlFormula, atom_map: Dict[str, str]) -> str:
    if isinstance(f, LTrue):
        return "TRUE"
    if isinstance(f, LFalse):
        return "FALSE"
    if isinstance(f, LProp):
        return atom_map.get(f.name, "FALSE")
    if isinstance(f, LNot):
        return f"!({_ltl_expr(f.sub, atom_map)})"
    if isinstance(f, LNext):
        return f"X ({_ltl_expr(f.sub, atom_map)})"
    if isinstance(f, LEventually):
        return f"F ({_ltl_expr(f.sub, atom_map)})"
    if isinstance(f, LAlways):
        return f"G ({_ltl_expr(f.sub, atom_map)})"
    if isinstance(f, LAnd):
        return f"({_ltl_expr(f.left, atom_map)} & {_ltl_expr(f.right, atom_map)})"
    if isinstance(f, LOr):
        return f"({_ltl_expr(f.left, atom_map)} | {_ltl_expr(f.right, atom_map)})"
    if isinstance(f, LImplies):
        return f"({_ltl_expr(f.left, atom_map)} -> {_ltl_expr(f.right, atom_map)})"
    if isinstance(f, LUntil):
        return f"({_ltl_expr(f.left, atom_map)} U {_ltl_expr(f.right, atom_map)})"
    if isinstance(f, LRelease):
        return f"({_ltl_expr(f.left, atom_map)} V {_ltl_expr(f.right, atom_map)})"
    raise TypeError(f"not an LTL formula: {f!r}")


def export_smv(m: Model, c: Controller, spec: Optional[LtlFormula] = None) -> str:
    """Emit one SMV module encoding the synchronous composition, with an
    LTLSPEC line when a specification is supplied."""
    product = build_product(m, c)

    model_states = [_state_sym(s) for s in m.states]
    ctrl_states = [_state_sym(s) for s in c.states]
    action_sets = []
    for t in c.transitions:
        sym = _action_sym(t.out)
        if sym not in action_sets:
            action_sets.append(sym)
    if "a_eps" not in action_sets:
        action_sets.append("a_eps")

    # Atom definitions.
    label_defs: List[Tuple[str, str]] = []
    label_atom_map: Dict[str, str] = {}
    for p in m.label_props:
        sym = _ident(p.id)
        holders = [_state_sym(s) for s in m.states if p in m.labels.get(s, ())]
        expr = f"m in {{{', '.join(holders)}}}" if holders else "FALSE"
        label_defs.append((sym, expr))
        label_atom_map[p.id] = sym

    action_atom_map: Dict[str, str] = {}
    action_defs: List[Tuple[str, str]] = []
    for p in sorted({a for t in c.transitions for a in t.out} | set(m.action_props)):
        sym = _ident(p.id)
        holders = [_action_sym(t.out) for t in c.transitions if p in t.out]
        holders = sorted(set(holders))
        expr = f"act in {{{', '.join(holders)}}}" if holders else "FALSE"
        action_defs.append((sym, expr))
        action_atom_map[p.id] = sym
    eps_expr = "act in {a_eps}"
    action_defs.append((_ident(EPS_ATOM), eps_expr))
    action_atom_map[EPS_ATOM] = _ident(EPS_ATOM)

    if product.deadlocked:
        stuck_expr = " | ".join(
            f"(m = {_state_sym(p)} & c = {_state_sym(q)})" for p, q in product.deadlocked
        )
    else:
        stuck_expr = "FALSE"

    # TRANS relation.
    ctrl_disjuncts = []
    for t in c.transitions:
        cond = _cond_expr(t.cond, label_atom_map)
        ctrl_disjuncts.append(
            f"(c = {_state_sym(t.src)} & next(c) = {_state_sym(t.dst)}"
            f" & act = {_action_sym(t.out)} & {cond})"
        )
    guard_atom_map = dict(action_atom_map)
    model_disjuncts = []
    for t in m.transitions:
        guard = _cond_expr(t.guard, guard_atom_map)
        model_disjuncts.append(
            f"(m = {_state_sym(t.src)} & next(m) = {_state_sym(t.dst)} & {guard})"
        )
    trans_expr = (
        "(" + "\n     | ".join(ctrl_disjuncts) + ")\n    & ("
        + "\n     | ".join(model_disjuncts) + ")"
    )
    if product.deadlocked:
        stuck_steps = " | ".join(
            f"(m = {_state_sym(p)} & c = {_state_sym(q)}"
            f" & next(m) = {_state_sym(p)} & next(c) = {_state_sym(q)} & act = a_eps)"
            for p, q in product.deadlocked
        )
        trans_expr = f"({trans_expr})\n    | {stuck_steps}"

    lines = ["MODULE main", "VAR"]
    lines.append(f"  m : {{{', '.join(model_states)}}};")
    lines.append(f"  c : {{{', '.join(ctrl_states)}}};")
    lines.append(f"  act : {{{', '.join(action_sets)}}};")
    lines.append("ASSIGN")
    lines.append(f"  init(m) := {_state_sym(m.initial)};")
    lines.append(f"  init(c) := {_state_sym(c.initial)};")
    lines.append("DEFINE")
    for sym, expr in label_defs + action_defs:
        lines.append(f"  {sym} := {expr};")
    lines.append(f"  stuck := {stuck_expr};")
    lines.append("TRANS")
    lines.append(f"  {trans_expr};")
    if spec is not None:
        atom_map = dict(label_atom_map)
        atom_map.update(action_atom_map)
        atom_map["stuck"] = "stuck"
        for name in ltl_atoms(spec):
            atom_map.setdefault(name, "FALSE")
        lines.append("LTLSPEC")
        lines.append(f"  {_ltl_expr(spec, atom_map)};")
    text = "\n".join(lines) + "\n"
    validate_smv(text)
    return text


# ---------------------------------------------------------------------------
# Validating parser for the emitted SMV subset
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s+|--[^\n]*"
    r"|(?P<sym>:=|->|<->|[(){},;:=!&|])"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
)

_KEYWORDS = {"MODULE", "VAR", "ASSIGN", "TRANS", "DEFINE", "LTLSPEC", "INVARSPEC"}
_TEMPORAL = {"X", "F", "G", "U", "V", "R"}


def _smv_tokens(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if not mo:
            raise SmvError(f"invalid SMV character at offset {pos}: {text[pos]!r}")
        if mo.lastgroup == "sym":
            tokens.append(("sym", mo.group("sym"), pos))
        elif mo.lastgroup == "word":
            tokens.append(("word", mo.group("word"), pos))
        pos = mo.end()
    return tokens


class _SmvParser:
    def __init__(self, text: str):
        self.tokens = _smv_tokens(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok is None:
            raise SmvError("unexpected end of SMV text")
        if kind and tok[0] != kind or value and tok[1] != value:
            raise SmvError(f"unexpected token {tok[1]!r} at offset {tok[2]}")
        self.pos += 1
        return tok

    def at_keyword(self) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "word" and tok[1] in _KEYWORDS

    def parse_module(self):
        self.take("word", "MODULE")
        self.take("word")
        while self.peek() is not None:
            section = self.take("word")
            if section[1] == "VAR":
                self.parse_var_section()
            elif section[1] == "ASSIGN":
                self.parse_assign_section()
            elif section[1] == "DEFINE":
                self.parse_define_section()
            elif section[1] == "TRANS":
                self.parse_expr()
                self.opt_semicolon()
            elif section[1] in ("LTLSPEC", "INVARSPEC"):
                self.parse_expr()
                self.opt_semicolon()
            else:
                raise SmvError(f"unknown section {section[1]!r}")

    def opt_semicolon(self):
        tok = self.peek()
        if tok and tok[:2] == ("sym", ";"):
            self.take()

    def parse_var_section(self):
        while self.peek() and not self.at_keyword():
            self.take("word")
            self.take("sym", ":")
            tok = self.take()
            if tok[:2] == ("sym", "{"):
                self.parse_symbol_list()
            elif tok[0] == "word" and tok[1] == "boolean":
                pass
            else:
                raise SmvError(f"bad VAR type at offset {tok[2]}")
            self.take("sym", ";")

    def parse_symbol_list(self):
        self.take("word")
        while self.peek() and self.peek()[:2] == ("sym", ","):
            self.take()
            self.take("word")
        self.take("sym", "}")

    def parse_assign_section(self):
        while self.peek() and not self.at_keyword():
            head = self.take("word")
            if head[1] not in ("init", "next"):
                raise SmvError(f"bad ASSIGN head {head[1]!r}")
            self.take("sym", "(")
            self.take("word")
            self.take("sym", ")")
            self.take("sym", ":=")
            self.parse_expr()
            self.take("sym", ";")

    def parse_define_section(self):
        while self.peek() and not self.at_keyword():
            self.take("word")
            self.take("sym", ":=")
            self.parse_expr()
            self.take("sym", ";")

    # Expression grammar: implies > or > and > until > unary > atom
    def parse_expr(self):
        self.parse_or()
        while self.peek() and self.peek()[:2] == ("sym", "->"):
            self.take()
            self.parse_or()

    def parse_or(self):
        self.parse_and()
        while self.peek() and self.peek()[:2] == ("sym", "|"):
            self.take()
            self.parse_and()

    def parse_and(self):
        self.parse_until()
        while self.peek() and self.peek()[:2] == ("sym", "&"):
            self.take()
            self.parse_until()

    def parse_until(self):
        self.parse_unary()
        while (self.peek() and self.peek()[0] == "word"
               and self.peek()[1] in ("U", "V", "R")):
            self.take()
            self.parse_unary()

    def parse_unary(self):
        tok = self.peek()
        if tok and tok[:2] == ("sym", "!"):
            self.take()
            self.parse_unary()
            return
        if tok and tok[0] == "word" and tok[1] in ("X", "F", "G"):
            self.take()
            self.parse_unary()
            return
        self.parse_atom()

    def parse_atom(self):
        tok = self.take()
        if tok[:2] == ("sym", "("):
            self.parse_expr()
            self.take("sym", ")")
            return
        if tok[0] != "word":
            raise SmvError(f"unexpected token {tok[1]!r} at offset {tok[2]}")
        if tok[1] in ("TRUE", "FALSE"):
            return
        if tok[1] in ("next", "init") and self.peek() and self.peek()[:2] == ("sym", "("):
            self.take()
            self.take("word")
            self.take("sym", ")")
        # equality or membership tail
        nxt = self.peek()
        if nxt and nxt[:2] == ("sym", "="):
            self.take()
            self.take("word")
        elif nxt and nxt[0] == "word" and nxt[1] == "in":
            self.take()
            self.take("sym", "{")
            self.parse_symbol_list()


def validate_smv(text: str) -> bool:
    """Grammar-check ``text`` against the exporter's SMV subset; raises
    SmvError on any problem."""
    parser = _SmvParser(text)
    parser.parse_module()
    if parser.peek() is not None:
        tok = parser.peek()
        raise SmvError(f"trailing SMV input at offset {tok[2]}")
    return True
