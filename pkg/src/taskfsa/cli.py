"""Command-line pipeline driver.

Exit codes: 0 success / verification pass, 1 verification fail,
2 usage error, 3 GLM backend error.
"""

from __future__ import annotations

import json
import pathlib
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import click

from taskfsa import builder, fixtures, io, refine
from taskfsa.core import cond_prop, validate_controller, validate_model
from taskfsa.glm import (
    BackendUnavailable,
    GlmSession,
    LiveBackend,
    MalformedCompletion,
    ReplayBackend,
    ReplayMiss,
    Transcript,
    query_steps,
    query_substeps,
)
from taskfsa.stepparse import parse_step
from taskfsa.stepparse.lexicon import KEYWORDS
from taskfsa.verify import brute_force_check, check, export_smv

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BACKEND = 3


@dataclass
class PipelineConfig:
    """Defaults shared by the pipeline commands; flags override fields.

    Loaded from a JSON file via ``--config``.
    """

    backend: str = "live"  # "live" | "replay"
    transcript: Optional[str] = None
    record: Optional[str] = None
    depth: int = 1
    max_depth: int = 3
    keywords: List[str] = field(default_factory=lambda: list(KEYWORDS))
    bias: Dict[str, float] = field(default_factory=dict)
    model: Optional[str] = None
    specs: List[str] = field(default_factory=list)
    out: Optional[str] = None

    def validate(self) -> None:
        if self.backend not in ("live", "replay"):
            raise click.UsageError(f"unknown backend {self.backend!r}")
        if self.backend == "replay" and not self.transcript:
            raise click.UsageError("replay backend requires a transcript path")
        if self.depth > self.max_depth:
            raise click.UsageError("depth must not exceed max_depth")

    @classmethod
    def load(cls, path: Optional[str]) -> "PipelineConfig":
        if not path:
            return cls()
        try:
            data = json.loads(pathlib.Path(path).read_text())
            config = cls(**data)
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise click.UsageError(f"bad config file {path}: {exc}")
        config.validate()
        return config

    def make_session(self) -> GlmSession:
        if self.backend == "replay":
            backend = ReplayBackend(_load_transcript(self.transcript))
        else:
            try:
                backend = LiveBackend()
            except BackendUnavailable as exc:
                raise click.ClickException(str(exc))
        keywords = tuple(dict.fromkeys(list(self.keywords) + list(self.bias)))
        session = GlmSession(backend, keywords=keywords,
                             bias_overrides={k: float(v) for k, v in self.bias.items()})
        session._record_path = pathlib.Path(self.record) if self.record else None
        return session


def _load_transcript(source: str) -> Transcript:
    path = pathlib.Path(source)
    if path.exists():
        return io.deserialize(path.read_text())
    try:
        return fixtures.load_transcript(source)
    except FileNotFoundError:
        raise click.UsageError(
            f"transcript {source!r} is neither a file nor a bundled fixture")


def _session(replay: str, record: str, bias, config: "PipelineConfig" = None) -> GlmSession:
    config = config or PipelineConfig()
    if replay:
        config.backend, config.transcript = "replay", replay
    if record:
        config.record = record
    for item in bias or ():
        key, _, value = item.partition("=")
        if not value:
            raise click.UsageError(f"--bias expects K=V, got {item!r}")
        config.bias[key] = float(value)
    config.validate()
    return config.make_session()


def _flush_record(session: GlmSession) -> None:
    path = getattr(session, "_record_path", None)
    if path:
        path.write_text(io.serialize(session.recorded))


def _read_doc(path: str):
    return io.deserialize(pathlib.Path(path).read_text())


def _load_model_arg(source: str):
    path = pathlib.Path(source)
    if path.exists():
        return io.deserialize(path.read_text())
    try:
        return fixtures.load_model(source)
    except FileNotFoundError:
        raise click.UsageError(f"model {source!r} is neither a file nor a bundled fixture")


def _load_spec_arg(source: str):
    path = pathlib.Path(source)
    if path.exists():
        return io.deserialize(path.read_text())
    try:
        return fixtures.load_spec(source)
    except FileNotFoundError:
        from taskfsa.verify import parse_ltl
        from taskfsa.verify.ltl import LtlSyntaxError

        try:
            return source, parse_ltl(source)
        except LtlSyntaxError:
            raise click.UsageError(
                f"spec {source!r} is not a file, fixture or LTL formula")


@click.group()
def main():
    """Compile task instructions into verified finite-state controllers."""


@main.command()
@click.argument("task")
@click.option("--depth", default=1, show_default=True)
@click.option("--replay", default=None, help="Replay transcript (fixture name or path).")
@click.option("--record", default=None, help="Write the session transcript here.")
@click.option("--bias", multiple=True, help="Extra keyword bias entries K=V.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Pipeline config file supplying defaults.")
@click.option("--out", type=click.Path(), default=None, help="Output directory.")
def steps(task, depth, replay, record, bias, config_path, out):
    """Query the GLM for task steps and write a step-tree document."""
    if not task.strip():
        raise click.UsageError("task description must be non-empty")
    config = PipelineConfig.load(config_path)
    session = _session(replay, record, bias, config)
    out = out or config.out
    if depth == 1 and config.depth != 1:
        depth = config.depth
    try:
        tree = query_steps(session, task, depth=depth)
    except (ReplayMiss, BackendUnavailable) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BACKEND)
    except MalformedCompletion as exc:
        raise click.ClickException(str(exc))
    _flush_record(session)
    text = io.serialize(tree)
    if out:
        outdir = pathlib.Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "steps.json").write_text(text)
        click.echo(f"wrote {outdir / 'steps.json'}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("tree_path", type=click.Path(exists=True))
@click.argument("number")
@click.option("--replay", default=None)
@click.option("--record", default=None)
@click.option("--out", type=click.Path(), default=None, help="Output file (defaults in place).")
def expand(tree_path, number, replay, record, out):
    """Expand one step of a step tree into substeps."""
    tree = _read_doc(tree_path)
    session = _session(replay, record, ())
    try:
        query_substeps(session, tree, number)
    except KeyError as exc:
        raise click.ClickException(str(exc))
    except (ReplayMiss, BackendUnavailable) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BACKEND)
    _flush_record(session)
    target = pathlib.Path(out or tree_path)
    target.write_text(io.serialize(tree))
    click.echo(f"wrote {target}")


@main.command()
@click.argument("tree_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=".", show_default=True)
@click.option("--name", default="controller", show_default=True)
def build(tree_path, out, name):
    """Compile a step tree's expansion frontier into a controller."""
    tree = _read_doc(tree_path)
    parsed = [parse_step(n.number, n.text) for n in tree.effective_steps()]
    controller, trace = builder.build_mixed(parsed)
    issues = validate_controller(controller)
    if issues:
        raise click.ClickException("invalid controller: " + "; ".join(issues))
    outdir = pathlib.Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / f"{name}.json").write_text(io.serialize(controller))
    (outdir / f"{name}.dot").write_text(io.export_dot(controller, name=name))
    click.echo(f"wrote {outdir / (name + '.json')} and .dot "
               f"({len(controller.states)} states)")


@main.command()
@click.argument("when_false", type=click.Path(exists=True))
@click.argument("when_true", type=click.Path(exists=True))
@click.option("--cond", required=True, help="Branch condition proposition.")
@click.option("--out", type=click.Path(), required=True)
def merge(when_false, when_true, cond, out):
    """Merge two scenario controllers under a fresh branching initial state."""
    merged = builder.merge_branches(cond_prop(cond), _read_doc(when_false),
                                    _read_doc(when_true))
    pathlib.Path(out).write_text(io.serialize(merged))
    click.echo(f"wrote {out} ({len(merged.states)} states)")


@main.command()
@click.argument("parent", type=click.Path(exists=True))
@click.argument("parent_state")
@click.argument("child", type=click.Path(exists=True))
@click.option("--return-state", default=None)
@click.option("--out", type=click.Path(), required=True)
def splice(parent, parent_state, child, return_state, out):
    """Splice a child controller under a parent state."""
    try:
        spliced = builder.splice_substeps(_read_doc(parent), parent_state,
                                          _read_doc(child), return_state)
    except builder.AmbiguousSplice as exc:
        raise click.ClickException(str(exc))
    pathlib.Path(out).write_text(io.serialize(spliced))
    click.echo(f"wrote {out} ({len(spliced.states)} states)")


@main.command()
@click.argument("controller_path", type=click.Path(exists=True))
@click.option("--model", "model_src", required=True)
@click.option("--spec", "spec_srcs", multiple=True, required=True)
@click.option("--replay", default=None, help="Synonym transcript for consolidation.")
@click.option("--brute", is_flag=True, help="Cross-check with the bounded oracle.")
@click.option("--out", type=click.Path(), default=None, help="Verdict document path.")
def verify(controller_path, model_src, spec_srcs, replay, brute, out):
    """Check a controller against a model and LTL specifications."""
    controller = _read_doc(controller_path)
    model = _load_model_arg(model_src)
    issues = validate_model(model)
    if issues:
        raise click.ClickException("invalid model: " + "; ".join(issues))
    specs = [_load_spec_arg(s) for s in spec_srcs]
    if replay:
        session = _session(replay, None, ())
        controller, synonyms = refine.consolidate_synonyms(controller, model, session)
        if synonyms.mapping:
            click.echo("consolidated: " + ", ".join(
                f"{k} -> {v}" for k, v in synonyms.mapping.items()))
    failed = False
    results = []
    for name, formula in specs:
        verdict = check(model, controller, formula)
        if brute:
            other = brute_force_check(model, controller, formula)
            if other.passed != verdict.passed:
                raise click.ClickException(f"oracle disagreement on {name}")
        if verdict.passed:
            click.echo(f"PASS {name}")
        else:
            failed = True
            stem, loop = verdict.counterexample.collapsed_projection()
            click.echo(f"FAIL {name}")
            click.echo(verdict.counterexample.render())
        results.append({
            "name": name,
            "passed": verdict.passed,
            "counterexample": refine.counterexample_payload(verdict.counterexample),
        })
    if out:
        import json

        pathlib.Path(out).write_text(json.dumps(
            {"kind": "verdicts", "results": results}, indent=2) + "\n")
    sys.exit(EXIT_FAIL if failed else 0)


@main.command("refine")
@click.option("--task", required=True)
@click.option("--model", "model_src", required=True)
@click.option("--spec", "spec_srcs", multiple=True, required=True)
@click.option("--replay", default=None)
@click.option("--record", default=None)
@click.option("--instruction", "instructions", multiple=True,
              help="Manual refinement instruction (repeatable, applied in order).")
@click.option("--auto", is_flag=True, help="Automated substep expansion.")
@click.option("--prune", "do_prune", is_flag=True)
@click.option("--depth", default=1, show_default=True)
@click.option("--max-depth", default=3, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Session document path.")
def refine_cmd(task, model_src, spec_srcs, replay, record, instructions, auto,
               do_prune, depth, max_depth, out):
    """Run the verify/refine loop for a task."""
    model = _load_model_arg(model_src)
    specs = [_load_spec_arg(s) for s in spec_srcs]
    session = _session(replay, record, ())
    try:
        rs = refine.create_session(task, model, specs, session,
                                   depth=depth, max_depth=max_depth)
        click.echo(f"iteration 1: {rs.status}")
        for instruction in instructions:
            if rs.status != refine.STATUS_FAIL:
                break
            refine.manual_refine(rs, instruction)
            click.echo(f"iteration {len(rs.history)}: {rs.status}")
        if auto and rs.status == refine.STATUS_FAIL:
            refine.auto_refine(rs)
            click.echo(f"after auto-refine: {rs.status}")
        if do_prune and rs.status == refine.STATUS_PASS:
            refine.prune(rs)
            click.echo(f"after prune: {rs.status} "
                       f"({len(rs.controller.states)} states)")
    except (ReplayMiss, BackendUnavailable) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BACKEND)
    _flush_record(session)
    if out:
        pathlib.Path(out).write_text(io.serialize(refine.session_payload(rs), kind="session"))
    rec = rs.history[-1]
    if rec.counterexample is not None:
        click.echo(rec.counterexample.render())
    sys.exit(0 if rs.status == refine.STATUS_PASS else EXIT_FAIL)


@main.command()
@click.argument("controller_path", type=click.Path(exists=True))
@click.option("--model", "model_src", required=True)
@click.option("--spec", "spec_src", default=None)
@click.option("--out", type=click.Path(), required=True)
def smv(controller_path, model_src, spec_src, out):
    """Export the model/controller composition as an SMV module."""
    controller = _read_doc(controller_path)
    model = _load_model_arg(model_src)
    formula = _load_spec_arg(spec_src)[1] if spec_src else None
    pathlib.Path(out).write_text(export_smv(model, controller, formula))
    click.echo(f"wrote {out}")


@main.command()
@click.argument("doc_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None)
def dot(doc_path, out):
    """Render a controller or model document as DOT."""
    value = _read_doc(doc_path)
    text = io.export_dot(value)
    if out:
        pathlib.Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True)
def serve(host, port):
    """Run the refinement session HTTP service."""
    import uvicorn

    from taskfsa.service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
