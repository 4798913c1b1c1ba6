#!/usr/bin/env python3
"""Regenerate the bundled fixtures.

Transcript completions and the reference controllers are hand-encoded; the
transcript prompt strings are derived with the canonical prompt builders so
replay lookups always match.  Run from the repository root:

    python tools/gen_fixtures.py
"""

from __future__ import annotations

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from taskfsa.glm import (  # noqa: E402
    build_refinement_prompt,
    steps_prompt,
    substeps_prompt,
    synonym_prompt,
    split_completion,
)

FIXTURES = ROOT / "src" / "taskfsa" / "fixtures"


def doc(kind: str, payload: dict) -> str:
    return json.dumps({"kind": kind, "version": 1, "payload": payload}, indent=2) + "\n"


def write(path: pathlib.Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path.relative_to(ROOT)}")


# ---------------------------------------------------------------------------
# Transcripts
# ---------------------------------------------------------------------------


class Conversation:
    """Mirror of the session's conversation accumulation, used to derive
    history-carrying substep prompts."""

    def __init__(self, task: str, root_completion: str):
        self.entries = []
        prompt = steps_prompt(task)
        self.entries.append({"prompt": prompt, "completion": root_completion})
        self.log = f"{prompt}{root_completion}\n\n"
        self.steps = dict(split_completion("1", root_completion))

    def expand(self, number: str, completion: str) -> None:
        prompt = substeps_prompt(self.log, number, self.steps[number])
        self.entries.append({"prompt": prompt, "completion": completion})
        self.log = f"{prompt}{completion}\n\n"
        self.steps.update(dict(split_completion(f"{number}.1", completion)))

    def refine(self, instruction: str, steps: list, completion: str) -> list:
        prompt = build_refinement_prompt(steps, instruction)
        self.entries.append({"prompt": prompt.text, "completion": completion})
        return list(split_completion("1", completion))


CROSSROAD_STEPS = (
    " Look both ways before crossing the road.\n"
    "[2] If there are no cars coming, proceed to cross the road.\n"
    "[3] If there are cars coming, wait for them to pass before crossing the road."
)
CROSSROAD_SUB1 = (
    " Face the direction you want to cross the road in.\n"
    "[1.2] Look to the left.\n"
    "[1.3] Look to the right.\n"
    "[1.4] If there are no cars coming, go to [2]. If there are cars coming, go to [3]."
)
CROSSROAD_SUB2 = (
    " Walk across the road.\n"
    "[2.2] Once you have reached the other side, look both ways again to make sure no cars are coming.\n"
    "[2.3] If there are no cars coming, proceed to [4]. If there are cars coming, back to [1]."
)
CROSSROAD_SUB3 = (
    " Wait for the cars to pass.\n"
    "[3.2] Once the cars have passed, back to [2]."
)


def crossroad_transcript() -> str:
    conv = Conversation("Cross the road", CROSSROAD_STEPS)
    conv.expand("1", CROSSROAD_SUB1)
    conv.expand("2", CROSSROAD_SUB2)
    conv.expand("3", CROSSROAD_SUB3)
    return doc("transcript", {"entries": conv.entries})


LIGHT_STEPS = (
    " Locate the traffic light.\n"
    "[2] Wait for the traffic light to turn green.\n"
    "[3] Look both ways before crossing the road.\n"
    "[4] Cross the road if no cars are coming."
)
LIGHT_REV1 = (
    " Approach the pedestrian crossing.\n"
    "[2] Wait for the traffic light to turn green.\n"
    "[3] Look both ways before crossing the road.\n"
    "[4] Cross the road if no cars are coming."
)
LIGHT_REV2 = (
    " Approach the pedestrian crossing.\n"
    "[2] Wait for the traffic light to turn green.\n"
    "[3] Look both ways before crossing the road.\n"
    "[4] Cross the road if no cars are coming and the traffic light is green."
)

LIGHT_INSTRUCTION_1 = 'with an action "approach pedestrian crossing"'
LIGHT_INSTRUCTION_2 = (
    'Refine the following steps to ensure the action "cross the road" is performed '
    'under conditions "traffic light turns green" and "no cars are coming"'
)


def crossroad_light_transcript() -> str:
    conv = Conversation("Cross the road at the traffic light", LIGHT_STEPS)
    steps_v1 = list(split_completion("1", LIGHT_STEPS))
    steps_v2 = conv.refine(LIGHT_INSTRUCTION_1, steps_v1, LIGHT_REV1)
    conv.refine(LIGHT_INSTRUCTION_2, steps_v2, LIGHT_REV2)
    conv.entries.append({
        "prompt": synonym_prompt("turn green", "traffic light"),
        "completion": "No. Turning green is a change of the signal; the traffic "
                      "light is the device itself.",
    })
    conv.entries.append({
        "prompt": synonym_prompt("turn green", "green"),
        "completion": "Yes. Both phrases describe the traffic light showing green.",
    })
    return doc("transcript", {"entries": conv.entries})


DENTAL_STEPS = (
    " Research local dental clinics\n"
    "[2] Read patient reviews\n"
    "[3] Compare services and prices\n"
    "[4] Schedule an appointment"
)
DENTAL_SUB1 = (
    " Online search for local dental clinics\n"
    "[1.2] Gather recommendations from acquaintances\n"
    "[1.3] Check insurance provider's in-network list"
)
DENTAL_SUB13 = (
    " Get insurance provider's contact information\n"
    "[1.3.2] Call the insurance provider's customer service\n"
    "[1.3.3] Request a list of in-network dental clinics"
)


def dental_transcript() -> str:
    conv = Conversation("Find a dentist and make an appointment", DENTAL_STEPS)
    conv.expand("1", DENTAL_SUB1)
    conv.expand("1.3", DENTAL_SUB13)
    return doc("transcript", {"entries": conv.entries})


MPC_STEPS = (
    " Define problem and inputs.\n"
    "[2] Secret sharing of inputs.\n"
    "[3] Compute secret shares.\n"
    "[4] Reconstruct the final result.\n"
    "[5] Output verification.\n"
    "[6] Decrypt the final result."
)
MPC_SUB2 = (
    " Generate random secret shares.\n"
    "[2.2] Securely store secret shares."
)
MPC_SUB3 = (
    " Encrypt secret share.\n"
    "[3.2] Distribute encrypted shares.\n"
    "[3.3] Compute ciphertext.\n"
    "[3.4] Broadcast result."
)


def mpc_transcript() -> str:
    conv = Conversation("Secure multi-party computation", MPC_STEPS)
    conv.expand("2", MPC_SUB2)
    conv.expand("3", MPC_SUB3)
    return doc("transcript", {"entries": conv.entries})


WIFI_STEPS = (
    " Unplug the modem's power cord\n"
    "[2] Disconnect the router's power source\n"
    "[3] Reconnect the modem's power cord\n"
    "[4] Observe the modem's indicator lights\n"
    "[5] Reconnect the router's power source\n"
    "[6] Monitor the router's indicator lights\n"
    "[7] Confirm internet connectivity on devices"
)
WIFI_REV1 = (
    " Unplug the modem's power cord\n"
    "[2] Disconnect the router's power source\n"
    "[3] Reconnect the modem's power cord\n"
    "[4] Wait two minutes\n"
    "[5] Observe the modem's indicator lights\n"
    "[6] Reconnect the router's power source\n"
    "[7] Monitor the router's indicator lights\n"
    "[8] Confirm internet connectivity on devices"
)
WIFI_REV2 = (
    " Unplug the modem's power cord\n"
    "[2] Disconnect the router's power source\n"
    "[3] Reconnect the modem's power cord\n"
    "[4] Wait two minutes\n"
    "[5] Observe the modem's indicator lights\n"
    "[6] Reconnect the router's power source\n"
    "[7] Wait two minutes\n"
    "[8] Monitor the router's indicator lights\n"
    "[9] Confirm internet connectivity on devices"
)

WIFI_INSTRUCTION_1 = 'Revise the following steps to include "wait two minutes" after "plug in modem"'
WIFI_INSTRUCTION_2 = 'Revise the following steps to include "wait two minutes" after "turn on router"'

WIFI_SYNONYMS = [
    ("unplug modem power", "unplug modem",
     "Yes, both phrases lead to cutting power to the modem."),
    ("disconnect router power", "unplug modem",
     "No. One phrase concerns the router, the other the modem."),
    ("disconnect router power", "turn off router",
     "Yes, both phrases lead to cutting power to the router."),
    ("reconnect modem power", "unplug modem",
     "No. Reconnecting restores power; unplugging cuts it."),
    ("reconnect modem power", "turn off router",
     "No. One phrase concerns the modem, the other the router."),
    ("reconnect modem power", "plug in modem",
     "Yes, both phrases lead to restoring power to the modem."),
    ("reconnect router power", "unplug modem",
     "No. One phrase restores router power, the other cuts modem power."),
    ("reconnect router power", "turn off router",
     "No. Reconnecting restores power; turning off cuts it."),
    ("reconnect router power", "plug in modem",
     "No. One phrase concerns the router, the other the modem."),
    ("reconnect router power", "turn on router",
     "Yes, both phrases lead to restoring power to the router."),
]


def wifi_transcript() -> str:
    conv = Conversation("Reboot the modem and router", WIFI_STEPS)
    steps_v1 = list(split_completion("1", WIFI_STEPS))
    steps_v2 = conv.refine(WIFI_INSTRUCTION_1, steps_v1, WIFI_REV1)
    conv.refine(WIFI_INSTRUCTION_2, steps_v2, WIFI_REV2)
    for a, b, answer in WIFI_SYNONYMS:
        conv.entries.append({"prompt": synonym_prompt(a, b), "completion": answer})
    return doc("transcript", {"entries": conv.entries})


def synonym_demo_transcript() -> str:
    entries = [
        {"prompt": synonym_prompt("wait for the call to connect",
                                  "wait for answer the call"),
         "completion": "No. The first phrase waits for an outgoing call to be "
                       "connected; the second waits to answer an incoming call."},
        {"prompt": synonym_prompt("cross the road", "walk across the road"),
         "completion": "Yes. Both phrases lead to the same effect of reaching "
                       "the other side of the road."},
    ]
    return doc("transcript", {"entries": entries})


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

MODEL_CROSSING_LIGHT = {
    "action_props": ["approach pedestrian crossing", "cross road", "look way",
                     "locate traffic light"],
    "label_props": ["goal", "traffic light", "green", "car come"],
    "states": ["p0", "p1", "p2", "p3", "p4", "p5"],
    "initial": "p0",
    "labels": {
        "p0": ["traffic light", "green"],
        "p1": ["traffic light", "green"],
        "p2": ["traffic light", "green", "car come"],
        "p3": ["traffic light"],
        "p4": ["traffic light", "green", "goal"],
        "p5": ["traffic light", "green"],
    },
    "transitions": [
        {"from": "p0", "guard": "!approach_pedestrian_crossing", "to": "p0"},
        {"from": "p0", "guard": "approach_pedestrian_crossing", "to": "p1"},
        {"from": "p1", "guard": "cross_road", "to": "p4"},
        {"from": "p1", "guard": "!cross_road", "to": "p1"},
        {"from": "p1", "guard": "!cross_road", "to": "p2"},
        {"from": "p1", "guard": "!cross_road", "to": "p3"},
        {"from": "p2", "guard": "cross_road", "to": "p5"},
        {"from": "p2", "guard": "!cross_road", "to": "p1"},
        {"from": "p2", "guard": "!cross_road", "to": "p2"},
        {"from": "p2", "guard": "!cross_road", "to": "p3"},
        {"from": "p3", "guard": "cross_road", "to": "p5"},
        {"from": "p3", "guard": "!cross_road", "to": "p1"},
        {"from": "p3", "guard": "!cross_road", "to": "p2"},
        {"from": "p3", "guard": "!cross_road", "to": "p3"},
        {"from": "p4", "guard": "true", "to": "p4"},
        {"from": "p5", "guard": "true", "to": "p5"},
    ],
}

MODEL_CROSSING_LOOKS = {
    "action_props": ["look left", "look right", "face direction", "look way",
                     "cross road"],
    "label_props": ["goal", "car come", "car pass", "pass", "traffic light"],
    "states": ["p0", "p1", "p2", "p3"],
    "initial": "p0",
    "labels": {"p0": [], "p1": [], "p2": [], "p3": ["goal"]},
    "transitions": [
        {"from": "p0", "guard": "!look_left & !look_right", "to": "p0"},
        {"from": "p0", "guard": "look_left", "to": "p1"},
        {"from": "p0", "guard": "look_right", "to": "p2"},
        {"from": "p1", "guard": "look_right", "to": "p3"},
        {"from": "p1", "guard": "!look_right", "to": "p1"},
        {"from": "p2", "guard": "look_left", "to": "p3"},
        {"from": "p2", "guard": "!look_left", "to": "p2"},
        {"from": "p3", "guard": "true", "to": "p3"},
    ],
}

MODEL_WIFI = {
    "action_props": ["unplug modem", "turn off router", "plug in modem",
                     "turn on router", "observe modem indicator",
                     "monitor router indicator", "confirm internet connectivity"],
    "label_props": ["goal", "2 min"],
    "states": ["p0", "p1", "p2", "p3", "p4", "p5", "p6"],
    "initial": "p0",
    "labels": {"p0": [], "p1": [], "p2": [], "p3": ["2 min"], "p4": [],
               "p5": [], "p6": ["2 min", "goal"]},
    "transitions": [
        {"from": "p0", "guard": "!unplug_modem", "to": "p0"},
        {"from": "p0", "guard": "unplug_modem", "to": "p1"},
        {"from": "p1", "guard": "plug_in_modem", "to": "p2"},
        {"from": "p1", "guard": "!plug_in_modem", "to": "p1"},
        {"from": "p2", "guard": "eps", "to": "p3"},
        {"from": "p2", "guard": "!eps", "to": "p5"},
        {"from": "p3", "guard": "!turn_on_router", "to": "p3"},
        {"from": "p3", "guard": "turn_on_router", "to": "p4"},
        {"from": "p4", "guard": "eps", "to": "p6"},
        {"from": "p4", "guard": "!eps", "to": "p5"},
        {"from": "p5", "guard": "true", "to": "p5"},
        {"from": "p6", "guard": "true", "to": "p6"},
    ],
}

SPECS = {
    "crossing_light": ("eventually-cross-on-fair-light",
                       "traffic_light & G F (green & !car_come) -> F goal"),
    "crossing_plain": ("eventually-goal-without-light", "!traffic_light -> F goal"),
    "wifi": ("eventually-goal", "F goal"),
}


# ---------------------------------------------------------------------------
# Reference controllers for the shipped case studies (hand-encoded)
# ---------------------------------------------------------------------------


def _ctrl(props, actions, states, initial, absorbing, transitions, steps=None):
    steps = steps or {}
    return {
        "props": props,
        "actions": actions,
        "states": [
            {"id": s, **({"step": steps[s]} if s in steps else {})} for s in states
        ],
        "initial": initial,
        "absorbing": absorbing,
        "transitions": [
            {"from": src, "cond": cond, "out": out, "to": dst}
            for src, cond, out, dst in transitions
        ],
    }


CONTROLLERS = {
    # merged two-scenario road crossing (7 states)
    "crossing_merged": _ctrl(
        ["traffic light", "car come", "car pass", "turn green"],
        ["look way", "cross road", "locate traffic light"],
        ["q0", "q11", "q12", "q21", "q22", "q23", "q3"],
        "q0", "q3",
        [
            ("q0", "!traffic_light", [], "q11"),
            ("q0", "traffic_light", [], "q21"),
            ("q11", "true", ["look way"], "q12"),
            ("q12", "!car_come | car_pass", ["cross road"], "q3"),
            ("q12", "car_come & !car_pass", [], "q12"),
            ("q21", "true", ["locate traffic light"], "q22"),
            ("q22", "turn_green", ["look way"], "q23"),
            ("q22", "!turn_green", [], "q22"),
            ("q23", "!car_come", ["cross road"], "q3"),
            ("q23", "car_come", [], "q23"),
            ("q3", "true", [], "q3"),
        ],
    ),
    # second-layer road crossing (10 states)
    "crossing_substeps": _ctrl(
        ["car come", "pass"],
        ["face direction", "look left", "look right", "cross road", "look way"],
        ["q11", "q12", "q13", "q14", "q21", "q22", "q23", "q31", "q32", "q4"],
        "q11", "q4",
        [
            ("q11", "true", ["face direction"], "q12"),
            ("q12", "true", ["look left"], "q13"),
            ("q13", "true", ["look right"], "q14"),
            ("q14", "!car_come", [], "q21"),
            ("q14", "car_come", [], "q31"),
            ("q21", "true", ["cross road"], "q22"),
            ("q22", "true", ["look way"], "q23"),
            ("q23", "!car_come", [], "q4"),
            ("q23", "car_come", [], "q11"),
            ("q31", "!pass", [], "q31"),
            ("q31", "pass", [], "q32"),
            ("q32", "true", [], "q21"),
            ("q4", "true", [], "q4"),
        ],
    ),
    # dental appointment with two spliced substep layers (11 states)
    "dental": _ctrl(
        [],
        ["search local clinic", "gather recommendation", "get insurance provider",
         "call insurance provider", "request list", "read patient review",
         "compare service", "schedule appointment"],
        ["q1", "q11", "q12", "q13", "q131", "q132", "q133", "q2", "q3", "q4", "q5"],
        "q1", "q5",
        [
            ("q1", "true", [], "q11"),
            ("q11", "true", ["search local clinic"], "q12"),
            ("q12", "true", ["gather recommendation"], "q13"),
            ("q13", "true", [], "q131"),
            ("q131", "true", ["get insurance provider"], "q132"),
            ("q132", "true", ["call insurance provider"], "q133"),
            ("q133", "true", ["request list"], "q2"),
            ("q2", "true", ["read patient review"], "q3"),
            ("q3", "true", ["compare service"], "q4"),
            ("q4", "true", ["schedule appointment"], "q5"),
            ("q5", "true", [], "q5"),
        ],
    ),
    # secure multi-party computation with two spliced groups (13 states)
    "mpc": _ctrl(
        [],
        ["define problem", "generate random share", "store secret share",
         "encrypt secret share", "distribute encrypted share", "compute ciphertext",
         "broadcast result", "reconstruct final result", "output verification",
         "decrypt final result"],
        ["q1", "q2", "q21", "q22", "q3", "q31", "q32", "q33", "q34",
         "q4", "q5", "q6", "q7"],
        "q1", "q7",
        [
            ("q1", "true", ["define problem"], "q2"),
            ("q2", "true", [], "q21"),
            ("q21", "true", ["generate random share"], "q22"),
            ("q22", "true", ["store secret share"], "q3"),
            ("q3", "true", [], "q31"),
            ("q31", "true", ["encrypt secret share"], "q32"),
            ("q32", "true", ["distribute encrypted share"], "q33"),
            ("q33", "true", ["compute ciphertext"], "q34"),
            ("q34", "true", ["broadcast result"], "q4"),
            ("q4", "true", ["reconstruct final result"], "q5"),
            ("q5", "true", ["output verification"], "q6"),
            ("q6", "true", ["decrypt final result"], "q7"),
            ("q7", "true", [], "q7"),
        ],
    ),
    # traffic-light crossing, first build (4 states)
    "crossing_light_v1": _ctrl(
        ["turn green", "car come"],
        ["locate traffic light", "look way", "cross road"],
        ["q1", "q2", "q3", "q4"],
        "q1", "q4",
        [
            ("q1", "true", ["locate traffic light"], "q2"),
            ("q2", "turn_green", ["look way"], "q3"),
            ("q2", "!turn_green", [], "q2"),
            ("q3", "!car_come", ["cross road"], "q4"),
            ("q3", "car_come", [], "q3"),
            ("q4", "true", [], "q4"),
        ],
    ),
    # after the first manual refinement (approach action added)
    "crossing_light_v2": _ctrl(
        ["turn green", "car come"],
        ["approach pedestrian crossing", "look way", "cross road"],
        ["q1", "q2", "q3", "q4"],
        "q1", "q4",
        [
            ("q1", "true", ["approach pedestrian crossing"], "q2"),
            ("q2", "turn_green", ["look way"], "q3"),
            ("q2", "!turn_green", [], "q2"),
            ("q3", "!car_come", ["cross road"], "q4"),
            ("q3", "car_come", [], "q3"),
            ("q4", "true", [], "q4"),
        ],
    ),
    # after the second manual refinement (guarded crossing)
    "crossing_light_v3": _ctrl(
        ["turn green", "car come"],
        ["approach pedestrian crossing", "look way", "cross road"],
        ["q1", "q2", "q3", "q4"],
        "q1", "q4",
        [
            ("q1", "true", ["approach pedestrian crossing"], "q2"),
            ("q2", "turn_green", ["look way"], "q3"),
            ("q2", "!turn_green", [], "q2"),
            ("q3", "turn_green & !car_come", ["cross road"], "q4"),
            ("q3", "car_come | !turn_green", [], "q3"),
            ("q4", "true", [], "q4"),
        ],
    ),
    # plain road crossing, first layer (3 states)
    "crossing_plain": _ctrl(
        ["car come", "car pass"],
        ["look way", "cross road"],
        ["q1", "q2", "q3"],
        "q1", "q3",
        [
            ("q1", "true", ["look way"], "q2"),
            ("q2", "!car_come | car_pass", ["cross road"], "q3"),
            ("q2", "car_come & !car_pass", [], "q2"),
            ("q3", "true", [], "q3"),
        ],
    ),
    # plain road crossing after expansion and pruning (5 states)
    "crossing_plain_pruned": _ctrl(
        ["car come", "car pass"],
        ["face direction", "look left", "look right", "cross road"],
        ["q1", "q11", "q12", "q2", "q3"],
        "q1", "q3",
        [
            ("q1", "true", ["face direction"], "q11"),
            ("q11", "true", ["look left"], "q12"),
            ("q12", "true", ["look right"], "q2"),
            ("q2", "!car_come | car_pass", ["cross road"], "q3"),
            ("q2", "car_come & !car_pass", [], "q2"),
            ("q3", "true", [], "q3"),
        ],
    ),
    # modem/router reboot before refinement (8 states)
    "wifi_v1": _ctrl(
        [],
        ["unplug modem power", "disconnect router power", "reconnect modem power",
         "observe modem indicator", "reconnect router power",
         "monitor router indicator", "confirm internet connectivity"],
        ["q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8"],
        "q1", "q8",
        [
            ("q1", "true", ["unplug modem power"], "q2"),
            ("q2", "true", ["disconnect router power"], "q3"),
            ("q3", "true", ["reconnect modem power"], "q4"),
            ("q4", "true", ["observe modem indicator"], "q5"),
            ("q5", "true", ["reconnect router power"], "q6"),
            ("q6", "true", ["monitor router indicator"], "q7"),
            ("q7", "true", ["confirm internet connectivity"], "q8"),
            ("q8", "true", [], "q8"),
        ],
    ),
}


def main() -> None:
    write(FIXTURES / "transcripts" / "crossroad.json", crossroad_transcript())
    write(FIXTURES / "transcripts" / "crossroad_light.json", crossroad_light_transcript())
    write(FIXTURES / "transcripts" / "dental.json", dental_transcript())
    write(FIXTURES / "transcripts" / "mpc.json", mpc_transcript())
    write(FIXTURES / "transcripts" / "wifi.json", wifi_transcript())
    write(FIXTURES / "transcripts" / "synonym_demo.json", synonym_demo_transcript())

    write(FIXTURES / "models" / "crossing_light.json", doc("model", MODEL_CROSSING_LIGHT))
    write(FIXTURES / "models" / "crossing_looks.json", doc("model", MODEL_CROSSING_LOOKS))
    write(FIXTURES / "models" / "wifi.json", doc("model", MODEL_WIFI))

    for name, (title, formula) in SPECS.items():
        write(FIXTURES / "specs" / f"{name}.json",
              doc("spec", {"name": title, "formula": formula}))

    for name, payload in CONTROLLERS.items():
        write(FIXTURES / "controllers" / f"{name}.json", doc("controller", payload))


if __name__ == "__main__":
    main()


def smv_goldens() -> None:
    """Freeze the three case-study SMV exports; the test suite compares the
    current exporter output byte-for-byte against these."""
    from taskfsa.io import deserialize
    from taskfsa.refine import SynonymMap
    from taskfsa.verify import export_smv, parse_ltl

    def load(rel):
        return deserialize((FIXTURES / rel).read_text())

    light = SynonymMap({"turn green": "green"})
    cases = {
        "crossing_light": (load("models/crossing_light.json"),
                           light.apply(load("controllers/crossing_light_v3.json")),
                           load("specs/crossing_light.json")[1]),
        "crossing_plain": (load("models/crossing_looks.json"),
                           load("controllers/crossing_plain_pruned.json"),
                           load("specs/crossing_plain.json")[1]),
        "wifi": (load("models/wifi.json"),
                 _wifi_consolidated(load("controllers/wifi_v1.json")),
                 load("specs/wifi.json")[1]),
    }
    for name, (model, controller, spec) in cases.items():
        write(FIXTURES / "smv" / f"{name}.smv", export_smv(model, controller, spec))


def _wifi_consolidated(controller):
    from taskfsa.refine import SynonymMap

    return SynonymMap({
        "unplug modem power": "unplug modem",
        "disconnect router power": "turn off router",
        "reconnect modem power": "plug in modem",
        "reconnect router power": "turn on router",
    }).apply(controller)


if __name__ == "__main__":
    smv_goldens()
