import json

import httpx
import pytest

from taskfsa.fixtures import load_transcript
from taskfsa.glm import (
    BackendUnavailable,
    GlmSession,
    LiveBackend,
    MalformedCompletion,
    Prompt,
    ReplayBackend,
    ReplayMiss,
    Transcript,
    TranscriptEntry,
    build_refinement_prompt,
    query_steps,
    query_substeps,
    query_synonym,
    split_completion,
    steps_prompt,
)
from taskfsa.stepparse.lexicon import KEYWORDS


def session_for(name):
    return GlmSession(ReplayBackend(load_transcript(name)), keywords=KEYWORDS)


def test_replay_completion_matches_transcript():
    session = session_for("crossroad")
    completion = session.complete(session.prompt(steps_prompt("Cross the road")))
    assert completion.startswith(" Look both ways before crossing the road.")


def test_replay_miss():
    session = session_for("crossroad")
    with pytest.raises(ReplayMiss):
        session.complete(session.prompt("Steps for: Bake a cake\n[1]"))


def test_replay_normalizes_whitespace():
    session = session_for("crossroad")
    sloppy = "Steps for:  Cross the road  \n[1]"
    assert session.complete(session.prompt(sloppy)).startswith(" Look both ways")


def test_prompt_validation():
    with pytest.raises(ValueError):
        Prompt(text="")
    with pytest.raises(ValueError):
        Prompt(text="x", temperature=-1)


def test_session_applies_keyword_bias():
    session = session_for("crossroad")
    prompt = session.prompt("Steps for: Cross the road\n[1]")
    assert prompt.keyword_bias == {k: 5.0 for k in KEYWORDS}


def test_live_backend_unreachable_retries():
    calls = []

    def handler(request):
        calls.append(request)
        raise httpx.ConnectError("boom", request=request)

    client = httpx.Client(transport=httpx.MockTransport(handler))
    backend = LiveBackend(endpoint="http://glm.invalid/complete", client=client,
                          retries=3, sleep=lambda s: None)
    with pytest.raises(BackendUnavailable):
        backend.complete(Prompt(text="hello"))
    assert len(calls) == 3


def test_live_backend_success_and_auth_header():
    def handler(request):
        assert request.headers["authorization"] == "Bearer sekrit"
        payload = json.loads(request.content)
        assert payload["prompt"] == "hello"
        return httpx.Response(200, json={"completion": " world"})

    client = httpx.Client(transport=httpx.MockTransport(handler))
    backend = LiveBackend(endpoint="http://glm.invalid/complete", api_key="sekrit",
                          client=client, sleep=lambda s: None)
    assert backend.complete(Prompt(text="hello")) == " world"


def test_query_steps_three_steps():
    tree = query_steps(session_for("crossroad"), "Cross the road", depth=1)
    assert [n.number for n in tree.top_level()] == ["1", "2", "3"]
    assert tree.get("2").text == "If there are no cars coming, proceed to cross the road."


def test_query_steps_mpc():
    tree = query_steps(session_for("mpc"), "Secure multi-party computation", depth=1)
    numbers = [n.number for n in tree.top_level()]
    assert numbers == ["1", "2", "3", "4", "5", "6"]
    assert tree.get("6").text == "Decrypt the final result."


def test_query_steps_depth_two():
    tree = query_steps(session_for("crossroad"), "Cross the road", depth=2)
    expected = {"1.1", "1.2", "1.3", "1.4", "2.1", "2.2", "2.3", "3.1", "3.2"}
    assert expected <= set(tree.nodes)


def test_query_substeps_selective():
    session = session_for("dental")
    tree = query_steps(session, "Find a dentist and make an appointment", depth=1)
    query_substeps(session, tree, "1")
    assert [n.text for n in tree.children("1")] == [
        "Online search for local dental clinics",
        "Gather recommendations from acquaintances",
        "Check insurance provider's in-network list",
    ]
    query_substeps(session, tree, "1.3")
    assert [n.number for n in tree.children("1.3")] == ["1.3.1", "1.3.2", "1.3.3"]
    with pytest.raises(KeyError):
        query_substeps(session, tree, "9")


def test_split_completion_handles_inline_refs():
    completion = (" First thing.\n[2] Go to [1]. If lost, go to [3].\n"
                  "[3] Third thing.")
    pieces = split_completion("1", completion)
    assert pieces == [("1", "First thing."),
                      ("2", "Go to [1]. If lost, go to [3]."),
                      ("3", "Third thing.")]


def test_split_completion_tolerates_dot_markers():
    pieces = split_completion("1", " First.\n2. Second.\n3. Third.")
    assert [n for n, _ in pieces] == ["1", "2", "3"]


def test_split_completion_rejects_empty():
    with pytest.raises(MalformedCompletion):
        split_completion("1", "   \n ")


def test_tree_numbering_invariants():
    from taskfsa.glm import StepTree

    tree = StepTree(task="t")
    tree.add("1", "a")
    with pytest.raises(MalformedCompletion):
        tree.add("3", "skip")  # not contiguous
    with pytest.raises(MalformedCompletion):
        tree.add("2.1", "orphan")  # parent missing


def test_query_synonym_yes_no_and_identity():
    session = session_for("synonym_demo")
    same, rationale = query_synonym(session, "cross the road", "walk across the road")
    assert same and rationale.startswith("Yes")
    same, rationale = query_synonym(session, "wait for the call to connect",
                                    "wait for answer the call")
    assert not same and rationale.startswith("No")
    before = len(session.recorded.entries)
    assert query_synonym(session, "cross road", "cross road")[0] is True
    assert len(session.recorded.entries) == before  # no backend call


def test_query_synonym_unparseable():
    from taskfsa.glm import UnparseableVerdict

    transcript = Transcript([TranscriptEntry(
        prompt='Do the two phrases "a" and "b" lead to the same effect?',
        completion="Hard to say.")])
    session = GlmSession(ReplayBackend(transcript))
    with pytest.raises(UnparseableVerdict):
        query_synonym(session, "a", "b")


def test_build_refinement_prompt_layout():
    steps = [("1", "Locate the traffic light."), ("2", "Cross the road.")]
    prompt = build_refinement_prompt(steps, 'with an action "approach pedestrian crossing"')
    assert prompt.text == (
        'Refine the following steps with an action "approach pedestrian crossing":\n'
        "[1] Locate the traffic light.\n"
        "[2] Cross the road.\n"
        "[1]"
    )
    revise = build_refinement_prompt(steps, 'Revise the following steps to include "x" after "y"')
    assert revise.text.startswith('Revise the following steps to include')
    with pytest.raises(ValueError):
        build_refinement_prompt(steps, "   ")


def test_refinement_prompt_replays_from_fixture():
    session = session_for("crossroad_light")
    tree = query_steps(session, "Cross the road at the traffic light", depth=1)
    prompt = build_refinement_prompt(
        [(n.number, n.text) for n in tree.top_level()],
        'with an action "approach pedestrian crossing"', session)
    completion = session.complete(prompt)
    assert completion.startswith(" Approach the pedestrian crossing.")


def test_record_then_replay_closure():
    # a session recorded against a (mock) live backend replays identically
    answers = {
        steps_prompt("Tie shoes"): " Grab the laces.\n[2] Make a knot.",
    }

    def handler(request):
        payload = json.loads(request.content)
        return httpx.Response(200, json={"completion": answers[payload["prompt"]]})

    live = LiveBackend(endpoint="http://glm.invalid/c",
                       client=httpx.Client(transport=httpx.MockTransport(handler)),
                       sleep=lambda s: None)
    live_session = GlmSession(live, keywords=KEYWORDS, clock=lambda: 0.0)
    tree_live = query_steps(live_session, "Tie shoes", depth=1)

    replay_session = GlmSession(ReplayBackend(live_session.recorded), keywords=KEYWORDS)
    tree_replay = query_steps(replay_session, "Tie shoes", depth=1)
    assert {n: node.text for n, node in tree_live.nodes.items()} == \
           {n: node.text for n, node in tree_replay.nodes.items()}


def test_replay_determinism():
    first = query_steps(session_for("crossroad"), "Cross the road", depth=2)
    second = query_steps(session_for("crossroad"), "Cross the road", depth=2)
    assert {n: node.text for n, node in first.nodes.items()} == \
           {n: node.text for n, node in second.nodes.items()}
