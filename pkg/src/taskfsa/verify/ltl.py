"""Linear temporal logic: AST, concrete syntax, and direct semantics on
ultimately periodic words.

Concrete syntax
---------------

    atom     ::= identifier | "quoted atom"
    unary    ::= '!' | 'X' | 'F' | 'G'
    formula  ::= formula '->' formula      (right assoc, lowest)
               | formula '|' formula
               | formula '&' formula
               | formula 'U' formula       (right assoc)
               | unary formula
               | 'true' | 'false' | atom | '(' formula ')'

Identifiers may contain letters, digits and underscores; underscores map to
spaces in proposition ids (``car_come`` names the proposition "car come").
Quoted atoms are taken verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple


@dataclass(frozen=True)
class LtlFormula:
    pass


@dataclass(frozen=True)
class LTrue(LtlFormula):
    pass


@dataclass(frozen=True)
class LFalse(LtlFormula):
    pass


@dataclass(frozen=True)
class LProp(LtlFormula):
    name: str


@dataclass(frozen=True)
class LNot(LtlFormula):
    sub: LtlFormula


@dataclass(frozen=True)
class LAnd(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LOr(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LImplies(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LNext(LtlFormula):
    sub: LtlFormula


@dataclass(frozen=True)
class LUntil(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LRelease(LtlFormula):
    left: LtlFormula
    right: LtlFormula


@dataclass(frozen=True)
class LEventually(LtlFormula):
    sub: LtlFormula


@dataclass(frozen=True)
class LAlways(LtlFormula):
    sub: LtlFormula


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_IDENT_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "-" and text[i : i + 2] == "->":
            tokens.append(("op", "->", i))
            i += 2
            continue
        if ch in "!&|()":
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise LtlSyntaxError("unterminated quoted atom", i)
            tokens.append(("atom", text[i + 1 : j], i))
            i = j + 1
            continue
        if ch in _IDENT_CHARS:
            j = i
            while j < n and text[j] in _IDENT_CHARS:
                j += 1
            word = text[i:j]
            if word in ("X", "F", "G", "U", "R"):
                tokens.append(("op", word, i))
            elif word in ("true", "TRUE"):
                tokens.append(("true", word, i))
            elif word in ("false", "FALSE"):
                tokens.append(("false", word, i))
            else:
                tokens.append(("atom", word.replace("_", " "), i))
            i = j
            continue
        raise LtlSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise LtlSyntaxError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise LtlSyntaxError(f"expected {op!r}", tok[2])

    # Grammar, loosest binding first: -> | & U unary
    def parse(self) -> LtlFormula:
        f = self.implies()
        if self.peek() is not None:
            raise LtlSyntaxError("trailing input", self.peek()[2])
        return f

    def implies(self) -> LtlFormula:
        left = self.disjunction()
        tok = self.peek()
        if tok and tok[:2] == ("op", "->"):
            self.take()
            return LImplies(left, self.implies())
        return left

    def disjunction(self) -> LtlFormula:
        f = self.conjunction()
        while self.peek() and self.peek()[:2] == ("op", "|"):
            self.take()
            f = LOr(f, self.conjunction())
        return f

    def conjunction(self) -> LtlFormula:
        f = self.until()
        while self.peek() and self.peek()[:2] == ("op", "&"):
            self.take()
            f = LAnd(f, self.until())
        return f

    def until(self) -> LtlFormula:
        left = self.unary()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in ("U", "R"):
            self.take()
            right = self.until()
            return LUntil(left, right) if tok[1] == "U" else LRelease(left, right)
        return left

    def unary(self) -> LtlFormula:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in ("!", "X", "F", "G"):
            self.take()
            sub = self.unary()
            return {"!": LNot, "X": LNext, "F": LEventually, "G": LAlways}[tok[1]](sub)
        return self.atom()

    def atom(self) -> LtlFormula:
        tok = self.take()
        if tok[0] == "true":
            return LTrue()
        if tok[0] == "false":
            return LFalse()
        if tok[0] == "atom":
            return LProp(tok[1])
        if tok[:2] == ("op", "("):
            f = self.implies()
            self.expect_op(")")
            return f
        raise LtlSyntaxError(f"unexpected token {tok[1]!r}", tok[2])


def parse_ltl(text: str) -> LtlFormula:
    return _Parser(text).parse()


def _atom_text(name: str) -> str:
    mangled = name.replace(" ", "_")
    if all(c in _IDENT_CHARS for c in mangled) and mangled not in ("X", "F", "G", "U", "R"):
        return mangled
    return f'"{name}"'


_PREC = {"->": 0, "|": 1, "&": 2, "U": 3, "unary": 4, "atom": 5}


def ltl_to_text(f: LtlFormula) -> str:
    text, _ = _fmt(f)
    return text


def _fmt(f: LtlFormula):
    if isinstance(f, LTrue):
        return "true", _PREC["atom"]
    if isinstance(f, LFalse):
        return "false", _PREC["atom"]
    if isinstance(f, LProp):
        return _atom_text(f.name), _PREC["atom"]
    if isinstance(f, LNot):
        return "!" + _wrap(f.sub, _PREC["unary"]), _PREC["unary"]
    if isinstance(f, LNext):
        return "X " + _wrap(f.sub, _PREC["unary"]), _PREC["unary"]
    if isinstance(f, LEventually):
        return "F " + _wrap(f.sub, _PREC["unary"]), _PREC["unary"]
    if isinstance(f, LAlways):
        return "G " + _wrap(f.sub, _PREC["unary"]), _PREC["unary"]
    if isinstance(f, LUntil):
        return _wrap(f.left, _PREC["U"] + 1) + " U " + _wrap(f.right, _PREC["U"]), _PREC["U"]
    if isinstance(f, LRelease):
        return _wrap(f.left, _PREC["U"] + 1) + " R " + _wrap(f.right, _PREC["U"]), _PREC["U"]
    if isinstance(f, LAnd):
        return _wrap(f.left, _PREC["&"]) + " & " + _wrap(f.right, _PREC["&"] + 1), _PREC["&"]
    if isinstance(f, LOr):
        return _wrap(f.left, _PREC["|"]) + " | " + _wrap(f.right, _PREC["|"] + 1), _PREC["|"]
    if isinstance(f, LImplies):
        return _wrap(f.left, _PREC["->"] + 1) + " -> " + _wrap(f.right, _PREC["->"]), _PREC["->"]
    raise TypeError(f"not an LTL formula: {f!r}")


def _wrap(f: LtlFormula, min_prec: int) -> str:
    text, prec = _fmt(f)
    return text if prec >= min_prec else f"({text})"


def ltl_atoms(f: LtlFormula) -> list:
    out: list = []

    def walk(g):
        if isinstance(g, LProp):
            if g.name not in out:
                out.append(g.name)
        elif isinstance(g, (LNot, LNext, LEventually, LAlways)):
            walk(g.sub)
        elif isinstance(g, (LAnd, LOr, LImplies, LUntil, LRelease)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return out


def ltl_size(f: LtlFormula) -> int:
    if isinstance(f, (LTrue, LFalse, LProp)):
        return 1
    if isinstance(f, (LNot, LNext, LEventually, LAlways)):
        return 1 + ltl_size(f.sub)
    return 1 + ltl_size(f.left) + ltl_size(f.right)


def ltl_negate(f: LtlFormula) -> LtlFormula:
    return LNot(f)


def to_nnf(f: LtlFormula) -> LtlFormula:
    """Negation normal form over {literal, and, or, X, U, R}; F and G are
    expanded into Until/Release, implication is eliminated."""
    if isinstance(f, (LTrue, LFalse, LProp)):
        return f
    if isinstance(f, LAnd):
        return LAnd(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, LOr):
        return LOr(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, LImplies):
        return LOr(to_nnf(LNot(f.left)), to_nnf(f.right))
    if isinstance(f, LNext):
        return LNext(to_nnf(f.sub))
    if isinstance(f, LUntil):
        return LUntil(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, LRelease):
        return LRelease(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, LEventually):
        return LUntil(LTrue(), to_nnf(f.sub))
    if isinstance(f, LAlways):
        return LRelease(LFalse(), to_nnf(f.sub))
    if isinstance(f, LNot):
        g = f.sub
        if isinstance(g, LTrue):
            return LFalse()
        if isinstance(g, LFalse):
            return LTrue()
        if isinstance(g, LProp):
            return LNot(g)
        if isinstance(g, LNot):
            return to_nnf(g.sub)
        if isinstance(g, LAnd):
            return LOr(to_nnf(LNot(g.left)), to_nnf(LNot(g.right)))
        if isinstance(g, LOr):
            return LAnd(to_nnf(LNot(g.left)), to_nnf(LNot(g.right)))
        if isinstance(g, LImplies):
            return LAnd(to_nnf(g.left), to_nnf(LNot(g.right)))
        if isinstance(g, LNext):
            return LNext(to_nnf(LNot(g.sub)))
        if isinstance(g, LUntil):
            return LRelease(to_nnf(LNot(g.left)), to_nnf(LNot(g.right)))
        if isinstance(g, LRelease):
            return LUntil(to_nnf(LNot(g.left)), to_nnf(LNot(g.right)))
        if isinstance(g, LEventually):
            return LRelease(LFalse(), to_nnf(LNot(g.sub)))
        if isinstance(g, LAlways):
            return LUntil(LTrue(), to_nnf(LNot(g.sub)))
    raise TypeError(f"not an LTL formula: {f!r}")


# ---------------------------------------------------------------------------
# Direct semantics on ultimately periodic words (the oracle side)
# ---------------------------------------------------------------------------


def eval_lasso(f: LtlFormula, stem, loop) -> bool:
    """Evaluate ``f`` on the infinite word ``stem . loop^omega`` by direct
    fixpoint semantics.  ``stem``/``loop`` are sequences of label sets;
    ``loop`` must be non-empty."""
    if not loop:
        raise ValueError("lasso loop must be non-empty")
    word = [frozenset(w) for w in stem] + [frozenset(w) for w in loop]
    n = len(word)
    succ = list(range(1, n)) + [len(stem)]
    memo: dict = {}

    def arr(g: LtlFormula):
        key = g
        if key in memo:
            return memo[key]
        if isinstance(g, LTrue):
            res = [True] * n
        elif isinstance(g, LFalse):
            res = [False] * n
        elif isinstance(g, LProp):
            res = [g.name in word[i] for i in range(n)]
        elif isinstance(g, LNot):
            res = [not v for v in arr(g.sub)]
        elif isinstance(g, LAnd):
            a, b = arr(g.left), arr(g.right)
            res = [a[i] and b[i] for i in range(n)]
        elif isinstance(g, LOr):
            a, b = arr(g.left), arr(g.right)
            res = [a[i] or b[i] for i in range(n)]
        elif isinstance(g, LImplies):
            a, b = arr(g.left), arr(g.right)
            res = [(not a[i]) or b[i] for i in range(n)]
        elif isinstance(g, LNext):
            a = arr(g.sub)
            res = [a[succ[i]] for i in range(n)]
        elif isinstance(g, LUntil):
            a, b = arr(g.left), arr(g.right)
            res = list(b)  # least fixpoint
            for _ in range(n + 1):
                changed = False
                for i in range(n - 1, -1, -1):
                    v = b[i] or (a[i] and res[succ[i]])
                    if v != res[i]:
                        res[i] = v
                        changed = True
                if not changed:
                    break
        elif isinstance(g, LRelease):
            a, b = arr(g.left), arr(g.right)
            res = [True] * n  # greatest fixpoint
            for _ in range(n + 1):
                changed = False
                for i in range(n - 1, -1, -1):
                    v = b[i] and (a[i] or res[succ[i]])
                    if v != res[i]:
                        res[i] = v
                        changed = True
                if not changed:
                    break
        elif isinstance(g, LEventually):
            res = arr(LUntil(LTrue(), g.sub))
        elif isinstance(g, LAlways):
            res = arr(LRelease(LFalse(), g.sub))
        else:
            raise TypeError(f"not an LTL formula: {g!r}")
        memo[key] = res
        return res

    return arr(f)[0]
