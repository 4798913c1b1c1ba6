import pytest
from hypothesis import given, strategies as st

from taskfsa.core import AndF, NotF, PropF, TrueF
from taskfsa.fixtures import fixture_text
from taskfsa.stepparse import (
    NoVerbFound,
    Rule,
    extract_phrases,
    lemmatize,
    parse_step,
    tokenize_and_tag,
)


def tags(sentence):
    return [(t.pos, t.lemma) for t in tokenize_and_tag(sentence)]


def test_tokenize_keyword_stepref():
    got = tags("If there are no cars coming, go to [2].")
    assert got[0] == ("KEYWORD", "if")
    assert ("STEPREF", "2") in got
    assert ("V", "come") in got
    assert ("KEYWORD", "no") in got


def test_tokenize_single_clause():
    assert tags("Cross the road.") == [
        ("V", "cross"), ("DET", "the"), ("N", "road"), ("PUNCT", "."),
    ]


def test_tokenize_covers_every_character():
    sentence = "Check insurance provider's in-network list"
    tokens = tokenize_and_tag(sentence)
    rebuilt = "".join(t.surface for t in tokens)
    squashed = sentence.replace(" ", "")
    assert rebuilt == squashed


def test_tagger_matches_golden_corpus():
    golden = fixture_text("goldens/tagger.txt")
    for line in golden.strip().splitlines():
        sentence, expected = line.split("\t")
        got = " ".join(f"{t.pos}:{t.lemma}" for t in tokenize_and_tag(sentence))
        assert got == expected, sentence


@pytest.mark.parametrize("word,lemma", [
    ("coming", "come"),
    ("cross", "cross"),
    ("ways", "way"),
    ("passed", "pass"),
    ("minutes", "min"),
    ("clinics", "clinic"),
    ("reached", "reach"),
])
def test_lemmatize_examples(word, lemma):
    assert lemmatize(word) == lemma


@given(st.sampled_from([
    "coming", "crossed", "ways", "minutes", "passes", "lights", "reviews",
    "recommendations", "sharing", "verification", "wibbles", "gizmoing",
]))
def test_lemmatize_idempotent(word):
    once = lemmatize(word)
    assert lemmatize(once) == once


def test_extract_phrases_wait_condition():
    conds, acts, keywords, refs = extract_phrases(
        "Wait for the traffic light to turn green.")
    assert [c.id for c in conds] == ["turn green"]
    assert acts == []
    assert "wait" in keywords


def test_extract_phrases_conditional():
    conds, acts, keywords, refs = extract_phrases(
        "If there are no cars coming, proceed to cross the road.")
    assert [c.id for c in conds] == ["car come"]
    assert [a.id for a in acts] == ["cross road"]


def test_extract_phrases_prepositional_action():
    conds, acts, _, _ = extract_phrases("Look to the left.")
    assert conds == []
    assert [a.id for a in acts] == ["look left"]


def test_extract_phrases_no_verb():
    with pytest.raises(NoVerbFound):
        extract_phrases("The weather.")


def test_parse_step_conditional():
    p = parse_step("2", "If there are no cars coming, proceed to cross the road.")
    assert p.rule == Rule.CONDITIONAL
    assert p.conds == NotF(PropF(p.conds.sub.prop))
    assert p.conds.sub.prop.id == "car come"
    assert [a.id for a in p.acts] == ["cross road"]


def test_parse_step_direct_with_condition():
    p = parse_step("3.2", "Once the cars have passed, back to [2].")
    assert p.rule == Rule.DIRECT
    assert p.direct_target == "2"
    assert isinstance(p.conds, PropF) and p.conds.prop.id == "pass"


def test_parse_step_default():
    p = parse_step("1", "Research local dental clinics")
    assert p.rule == Rule.DEFAULT
    assert isinstance(p.conds, TrueF)
    assert [a.id for a in p.acts] == ["research local clinic"]


def test_parse_step_rejects_bad_number():
    with pytest.raises(ValueError):
        parse_step("x", "Cross the road.")


TABLE_PATTERNS = [
    ("Dial the number.", Rule.DEFAULT),
    ("Proceed to [1].", Rule.DIRECT),
    ("If there are no cars, cross.", Rule.CONDITIONAL),
    ("If there are no cars, cross. If there are cars, stay.", Rule.CONDITIONAL_ELSE),
    ("Wait for the cars to pass before crossing the road.", Rule.SELF_WAIT),
    ("Stay until the cars pass.", Rule.SELF_UNTIL),
]


@pytest.mark.parametrize("sentence,rule", TABLE_PATTERNS)
def test_keyword_grammar_rule_selection(sentence, rule):
    assert parse_step("1", sentence).rule == rule


def test_parse_determinism():
    sentence = "If there are cars coming, wait for them to pass before crossing the road."
    first = parse_step("3", sentence)
    second = parse_step("3", sentence)
    assert first == second


def test_parse_kinds_are_consistent():
    p = parse_step("3", "If there are cars coming, wait for them to pass before crossing the road.")
    from taskfsa.core import formula_props

    assert all(prop.kind == "condition" for prop in formula_props(p.conds))
    assert all(prop.kind == "condition" for prop in formula_props(p.wait_conds))
    assert all(a.kind == "action" for a in p.acts)


def test_conditional_with_coordinated_conditions():
    p = parse_step("4", "Cross the road if no cars are coming and the traffic light is green.")
    assert p.rule == Rule.CONDITIONAL
    assert isinstance(p.conds, AndF)
    left, right = p.conds.left, p.conds.right
    assert isinstance(left, NotF) and left.sub.prop.id == "car come"
    assert isinstance(right, PropF) and right.prop.id == "turn green"
