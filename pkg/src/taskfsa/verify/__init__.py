"""Verification engine: LTL specifications, Buchi translation, product
construction, lasso search and SMV export."""

from taskfsa.verify.ltl import (
    LtlFormula,
    LTrue,
    LFalse,
    LProp,
    LNot,
    LAnd,
    LOr,
    LImplies,
    LNext,
    LUntil,
    LRelease,
    LEventually,
    LAlways,
    LtlSyntaxError,
    parse_ltl,
    ltl_to_text,
    ltl_atoms,
    ltl_size,
    eval_lasso,
)
from taskfsa.verify.buchi import BuchiAutomaton, to_buchi, buchi_accepts_lasso
from taskfsa.verify.product import AlphabetMismatch, Product, build_product
from taskfsa.verify.check import (
    Counterexample,
    Verdict,
    check,
    replay_counterexample,
)
from taskfsa.verify.brute import BoundsTooSmall, brute_force_check
from taskfsa.verify.smv import export_smv, validate_smv, SmvError

__all__ = [
    "LtlFormula",
    "LTrue",
    "LFalse",
    "LProp",
    "LNot",
    "LAnd",
    "LOr",
    "LImplies",
    "LNext",
    "LUntil",
    "LRelease",
    "LEventually",
    "LAlways",
    "LtlSyntaxError",
    "parse_ltl",
    "ltl_to_text",
    "ltl_atoms",
    "ltl_size",
    "eval_lasso",
    "BuchiAutomaton",
    "to_buchi",
    "buchi_accepts_lasso",
    "AlphabetMismatch",
    "Product",
    "build_product",
    "Counterexample",
    "Verdict",
    "check",
    "replay_counterexample",
    "BoundsTooSmall",
    "brute_force_check",
    "export_smv",
    "validate_smv",
    "SmvError",
]
