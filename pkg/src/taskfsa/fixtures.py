"""Access to the bundled fixtures (transcripts, models, specifications and
reference controllers for the shipped case studies)."""

from __future__ import annotations

from importlib import resources

from taskfsa.io import deserialize


def _read(relpath: str) -> str:
    return resources.files("taskfsa").joinpath("fixtures").joinpath(relpath).read_text()


def fixture_text(relpath: str) -> str:
    return _read(relpath)


def load_transcript(name: str):
    return deserialize(_read(f"transcripts/{name}.json"))


def load_model(name: str):
    return deserialize(_read(f"models/{name}.json"))


def load_spec(name: str):
    return deserialize(_read(f"specs/{name}.json"))


def load_controller(name: str):
    return deserialize(_read(f"controllers/{name}.json"))


def transcript_names():
    return ["crossroad", "crossroad_light", "dental", "mpc", "wifi", "synonym_demo"]
