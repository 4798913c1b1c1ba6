import pytest
from hypothesis import given, strategies as st

from taskfsa.verify.ltl import (
    LAlways,
    LAnd,
    LEventually,
    LImplies,
    LNext,
    LNot,
    LOr,
    LProp,
    LTrue,
    LUntil,
    LtlSyntaxError,
    eval_lasso,
    ltl_to_text,
    parse_ltl,
    to_nnf,
)


def test_parse_case_study_spec():
    f = parse_ltl("traffic_light & G F (green & !car_come) -> F goal")
    assert f == LImplies(
        LAnd(LProp("traffic light"),
             LAlways(LEventually(LAnd(LProp("green"), LNot(LProp("car come")))))),
        LEventually(LProp("goal")),
    )


def test_parse_eventually_goal():
    assert parse_ltl("F goal") == LEventually(LProp("goal"))


def test_parse_negated_antecedent():
    f = parse_ltl("!traffic_light -> F goal")
    assert f == LImplies(LNot(LProp("traffic light")), LEventually(LProp("goal")))


def test_parse_quoted_atom_and_until():
    f = parse_ltl('"car come" U X goal')
    assert f == LUntil(LProp("car come"), LNext(LProp("goal")))


def test_syntax_error_carries_position():
    with pytest.raises(LtlSyntaxError) as err:
        parse_ltl("F goal & ")
    assert err.value.position >= 0
    with pytest.raises(LtlSyntaxError):
        parse_ltl("(a | b")


_atoms = st.sampled_from(["a", "b", "car come"])


def _ltl(depth):
    leaf = st.one_of(st.builds(LProp, _atoms), st.just(LTrue()))
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.builds(LNot, sub),
            st.builds(LNext, sub),
            st.builds(LEventually, sub),
            st.builds(LAlways, sub),
            st.builds(LAnd, sub, sub),
            st.builds(LOr, sub, sub),
            st.builds(LImplies, sub, sub),
            st.builds(LUntil, sub, sub),
        ),
        max_leaves=6,
    )


@given(_ltl(6))
def test_printer_parser_round_trip(f):
    assert parse_ltl(ltl_to_text(f)) == f


def test_eval_lasso_basics():
    goal = LProp("goal")
    assert eval_lasso(LEventually(goal), [frozenset()], [frozenset({"goal"})])
    assert not eval_lasso(LEventually(goal), [frozenset()], [frozenset()])
    assert eval_lasso(LAlways(goal), [], [frozenset({"goal"})])
    assert not eval_lasso(LAlways(goal), [frozenset({"goal"})], [frozenset()])
    # X looks one step ahead, wrapping into the loop
    assert eval_lasso(LNext(goal), [frozenset()], [frozenset({"goal"})])
    assert eval_lasso(LUntil(LProp("a"), goal),
                      [frozenset({"a"})], [frozenset({"goal"})])
    assert not eval_lasso(LUntil(LProp("a"), goal),
                          [frozenset()], [frozenset({"a"})])


def test_eval_lasso_requires_loop():
    with pytest.raises(ValueError):
        eval_lasso(LTrue(), [frozenset()], [])


def test_nnf_eliminates_sugar():
    f = to_nnf(LNot(LAlways(LProp("a"))))

    def no_sugar(g):
        assert not isinstance(g, (LEventually, LAlways, LImplies))
        if isinstance(g, LNot):
            assert isinstance(g.sub, LProp)
        for attr in ("sub", "left", "right"):
            child = getattr(g, attr, None)
            if child is not None:
                no_sugar(child)

    no_sugar(f)
