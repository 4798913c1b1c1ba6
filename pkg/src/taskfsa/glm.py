"""Generative-language-model plumbing: prompt construction, completion
backends, transcripts and step trees.

Two backends speak the same one-shot text-completion contract: a live HTTP
backend (endpoint + credential, vendor payloads normalized by the caller's
endpoint) and a deterministic replay backend answering from a recorded
transcript.  Every completion a session sees is appended to its own
transcript, so a live run can be frozen into a replayable fixture.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import httpx

DEFAULT_KEYWORD_BIAS = 5.0
DEFAULT_MAX_TOKENS = 256
DEFAULT_TEMPERATURE = 0.0

ENDPOINT_ENV = "TASKFSA_GLM_ENDPOINT"
API_KEY_ENV = "TASKFSA_GLM_API_KEY"


class BackendUnavailable(RuntimeError):
    pass


class ReplayMiss(KeyError):
    def __init__(self, prompt: str):
        super().__init__(f"prompt not present in replay transcript:\n{prompt}")
        self.prompt = prompt


class MalformedCompletion(ValueError):
    def __init__(self, message: str, raw: str):
        super().__init__(f"{message}\n--- raw completion ---\n{raw}")
        self.raw = raw


class UnparseableVerdict(ValueError):
    pass


@dataclass
class Prompt:
    text: str
    max_tokens: int = DEFAULT_MAX_TOKENS
    temperature: float = DEFAULT_TEMPERATURE
    keyword_bias: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.text:
            raise ValueError("prompt text must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


def normalize_prompt(text: str) -> str:
    lines = [re.sub(r"[ \t]+", " ", line.rstrip()) for line in text.strip().splitlines()]
    return "\n".join(lines)


@dataclass
class TranscriptEntry:
    prompt: str
    completion: str
    backend_id: str = "replay"
    timestamp: Optional[float] = None


@dataclass
class Transcript:
    entries: List[TranscriptEntry] = field(default_factory=list)

    def __post_init__(self):
        self._lookup: Dict[str, str] = {}
        for e in self.entries:
            self._lookup.setdefault(normalize_prompt(e.prompt), e.completion)

    def lookup(self, prompt: str) -> Optional[str]:
        return self._lookup.get(normalize_prompt(prompt))

    def append(self, entry: TranscriptEntry) -> None:
        self.entries.append(entry)
        self._lookup.setdefault(normalize_prompt(entry.prompt), entry.completion)

    def merged_with(self, other: "Transcript") -> "Transcript":
        return Transcript(list(self.entries) + list(other.entries))


class ReplayBackend:
    backend_id = "replay"

    def __init__(self, transcript: Transcript):
        self.transcript = transcript

    def complete(self, prompt: Prompt) -> str:
        completion = self.transcript.lookup(prompt.text)
        if completion is None:
            raise ReplayMiss(prompt.text)
        return completion


class LiveBackend:
    """Generic text-completion HTTP backend.

    Request:  POST {endpoint} {"prompt", "max_tokens", "temperature",
              "keyword_bias"}
    Response: {"completion": "..."}
    """

    backend_id = "live"

    def __init__(self, endpoint: Optional[str] = None, api_key: Optional[str] = None,
                 client: Optional[httpx.Client] = None, retries: int = 3,
                 backoff: float = 0.5, sleep: Callable[[float], None] = time.sleep):
        self.endpoint = endpoint or os.environ.get(ENDPOINT_ENV)
        if not self.endpoint:
            raise BackendUnavailable(f"no GLM endpoint configured ({ENDPOINT_ENV})")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.client = client or httpx.Client(timeout=60.0)
        self.retries = retries
        self.backoff = backoff
        self.sleep = sleep

    def complete(self, prompt: Prompt) -> str:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "prompt": prompt.text,
            "max_tokens": prompt.max_tokens,
            "temperature": prompt.temperature,
            "keyword_bias": prompt.keyword_bias,
        }
        last_error: Optional[Exception] = None
        for attempt in range(self.retries):
            try:
                resp = self.client.post(self.endpoint, json=payload, headers=headers)
                if resp.status_code >= 500:
                    raise httpx.HTTPStatusError(
                        f"server error {resp.status_code}", request=resp.request,
                        response=resp)
                resp.raise_for_status()
                return resp.json()["completion"]
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                last_error = exc
                if attempt + 1 < self.retries:
                    self.sleep(self.backoff * (2 ** attempt))
        raise BackendUnavailable(
            f"GLM backend failed after {self.retries} attempts: {last_error}")


class GlmSession:
    """A backend handle plus the ordered transcript of everything asked."""

    def __init__(self, backend, keywords: Tuple[str, ...] = (),
                 keyword_bias: float = DEFAULT_KEYWORD_BIAS,
                 bias_overrides: Optional[Dict[str, float]] = None,
                 clock: Callable[[], float] = time.time):
        self.backend = backend
        self.keywords = tuple(keywords)
        self.keyword_bias = keyword_bias
        self.bias_overrides = dict(bias_overrides or {})
        self.clock = clock
        self.recorded = Transcript()

    def prompt(self, text: str, **kw) -> Prompt:
        bias = {k: self.keyword_bias for k in self.keywords}
        bias.update(self.bias_overrides)
        return Prompt(text=text, keyword_bias=bias, **kw)

    def complete(self, prompt: Prompt) -> str:
        completion = self.backend.complete(prompt)
        self.recorded.append(TranscriptEntry(
            prompt=prompt.text, completion=completion,
            backend_id=self.backend.backend_id, timestamp=self.clock()))
        return completion


# ---------------------------------------------------------------------------
# Step trees
# ---------------------------------------------------------------------------


@dataclass
class StepNode:
    number: str
    text: str

    @property
    def depth(self) -> int:
        return self.number.count(".") + 1


@dataclass
class StepTree:
    task: str
    nodes: Dict[str, StepNode] = field(default_factory=dict)
    conversation: str = ""

    def add(self, number: str, text: str) -> None:
        parent = number.rsplit(".", 1)[0] if "." in number else None
        if parent is not None and parent not in self.nodes:
            raise MalformedCompletion(
                f"step {number} arrived before its parent {parent}", text)
        siblings = [n for n in self.nodes if _parent_of(n) == parent]
        expected = f"{parent}.{len(siblings) + 1}" if parent else str(len(siblings) + 1)
        if number != expected:
            raise MalformedCompletion(
                f"step {number} breaks contiguous numbering (expected {expected})", text)
        self.nodes[number] = StepNode(number, text)

    def get(self, number: str) -> StepNode:
        return self.nodes[number]

    def children(self, number: str) -> List[StepNode]:
        kids = [n for n in self.nodes.values() if _parent_of(n.number) == number]
        return sorted(kids, key=lambda n: _sort_key(n.number))

    def leaves(self) -> List[StepNode]:
        return [n for s, n in sorted(self.nodes.items(), key=lambda kv: _sort_key(kv[0]))
                if not self.children(s)]

    def top_level(self) -> List[StepNode]:
        return sorted((n for n in self.nodes.values() if "." not in n.number),
                      key=lambda n: _sort_key(n.number))

    def effective_steps(self) -> List[StepNode]:
        """Document-order expansion frontier: each step is represented by
        its deepest expansion."""
        out: List[StepNode] = []

        def visit(node: StepNode):
            kids = self.children(node.number)
            if kids:
                for k in kids:
                    visit(k)
            else:
                out.append(node)

        for top in self.top_level():
            visit(top)
        return out

    @property
    def max_depth(self) -> int:
        return max((n.depth for n in self.nodes.values()), default=0)

    def without_children(self, number: str) -> "StepTree":
        pruned = StepTree(self.task, conversation=self.conversation)
        prefix = number + "."
        pruned.nodes = {k: v for k, v in self.nodes.items() if not k.startswith(prefix)}
        return pruned

    def copy(self) -> "StepTree":
        t = StepTree(self.task, conversation=self.conversation)
        t.nodes = dict(self.nodes)
        return t


def _parent_of(number: str) -> Optional[str]:
    return number.rsplit(".", 1)[0] if "." in number else None


def _sort_key(number: str):
    return tuple(int(p) for p in number.split("."))


# Step markers count only at line starts: step text routinely carries
# inline references ("go to [2]") that must not split the completion.
_MARKER_RE = re.compile(r"(?:^|\n)\s*(?:\[(\d+(?:\.\d+)*)\]|(\d+(?:\.\d+)*)\.)[ \t]")


def split_completion(cue: str, completion: str) -> List[Tuple[str, str]]:
    """Split a completion into (number, text) pairs.  The first piece
    continues the prompt's bracketed cue; later pieces start at "[k]"
    markers ("k." at line starts is tolerated)."""
    if not completion.strip():
        raise MalformedCompletion("empty completion", completion)
    pieces: List[Tuple[str, str]] = []
    current_number = cue
    pos = 0
    for mo in _MARKER_RE.finditer(completion):
        text = completion[pos:mo.start()].strip()
        if text or pieces or current_number == cue:
            pieces.append((current_number, text))
        current_number = mo.group(1) or mo.group(2)
        pos = mo.end()
    pieces.append((current_number, completion[pos:].strip()))
    pieces = [(n, t) for n, t in pieces if t]
    if not pieces:
        raise MalformedCompletion("no step text recovered", completion)
    return pieces


def steps_prompt(task_desc: str) -> str:
    return f"Steps for: {task_desc}\n[1]"


def substeps_prompt(conversation: str, number: str, text: str) -> str:
    return f"{conversation}Substeps for: [{number}] {text}\n[{number}.1]"


def query_steps(session: GlmSession, task_desc: str, depth: int = 1) -> StepTree:
    """Ask for top-level steps, then expand every leaf once per extra depth
    level; substep prompts carry the running conversation history."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not task_desc.strip():
        raise ValueError("task description must be non-empty")
    tree = StepTree(task=task_desc)
    prompt_text = steps_prompt(task_desc)
    completion = session.complete(session.prompt(prompt_text))
    tree.conversation = f"{prompt_text}{completion}\n\n"
    for number, text in split_completion("1", completion):
        tree.add(number, text)
    for _ in range(1, depth):
        for leaf in list(tree.leaves()):
            _expand(session, tree, leaf)
    return tree


def query_substeps(session: GlmSession, tree: StepTree, number: str) -> StepTree:
    """Expand a single step in place (selective expansion)."""
    if number not in tree.nodes:
        raise KeyError(f"step {number} not in tree")
    _expand(session, tree, tree.nodes[number])
    return tree


def _expand(session: GlmSession, tree: StepTree, node: StepNode) -> None:
    prompt_text = substeps_prompt(tree.conversation, node.number, node.text)
    completion = session.complete(session.prompt(prompt_text))
    tree.conversation = f"{prompt_text}{completion}\n\n"
    for number, text in split_completion(f"{node.number}.1", completion):
        tree.add(number, text)


_VERDICT_RE = re.compile(r"^\W*(yes|no)\b", re.IGNORECASE)


def synonym_prompt(phrase_a: str, phrase_b: str) -> str:
    return f'Do the two phrases "{phrase_a}" and "{phrase_b}" lead to the same effect?'


def query_synonym(session: GlmSession, phrase_a: str, phrase_b: str) -> Tuple[bool, str]:
    """Ask whether two phrases mean the same thing; identical phrases are
    answered locally without a backend call."""
    if not phrase_a or not phrase_b:
        raise ValueError("phrases must be non-empty")
    if " ".join(phrase_a.split()).lower() == " ".join(phrase_b.split()).lower():
        return True, "identical phrases"
    completion = session.complete(session.prompt(synonym_prompt(phrase_a, phrase_b)))
    mo = _VERDICT_RE.match(completion.strip())
    if not mo:
        raise UnparseableVerdict(f"completion is neither Yes nor No: {completion!r}")
    return mo.group(1).lower() == "yes", completion.strip()


def build_refinement_prompt(steps: List[Tuple[str, str]], instruction: str,
                            session: Optional[GlmSession] = None) -> Prompt:
    """Refinement prompt: instruction header, the enumerated current steps,
    and the "[1]" continuation cue."""
    if not instruction.strip():
        raise ValueError("instruction must be non-empty")
    header = instruction.strip().rstrip(":")
    if not header.lower().startswith(("refine", "revise")):
        header = f"Refine the following steps {header}"
    body = "\n".join(f"[{n}] {t}" for n, t in steps)
    text = f"{header}:\n{body}\n[1]"
    if session is not None:
        return session.prompt(text)
    return Prompt(text=text)
