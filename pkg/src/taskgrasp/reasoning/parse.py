"""Parsing and serialization of reasoning responses.

The wire format is a fenced ```json block with five string fields. The
parser is total and tolerant: it accepts the bare object, the fenced form,
or an object embedded anywhere in surrounding prose, and reports a
ParseFailure (never an unhandled exception) for everything else.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..errors import ParseFailure
from .prompt import RESPONSE_FIELDS

_FENCE = re.compile(r"```[a-zA-Z0-9_-]*[ \t]*\r?\n?(.*?)```", re.DOTALL)
_MAX_SCAN_STARTS = 512  # brace positions tried before giving up on a response
_FRAGMENT_CHARS = 200


@dataclass
class ReasoningResult:
    """The reasoned grasp context: task, object, part, affordance, rationale.

    raw_response keeps the verbatim backend output for the trace; it is
    provenance, not meaning, so it does not participate in equality.
    """

    task: str
    object: str
    part: str
    affordance: str
    rationale: str
    raw_response: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in RESPONSE_FIELDS}


def _candidate_objects(raw: str):
    """Yield every plausible JSON object in the text, most explicit first."""
    for m in _FENCE.finditer(raw):
        yield m.group(1).strip()
    yield raw.strip()
    decoder = json.JSONDecoder()
    starts = [i for i, ch in enumerate(raw) if ch == "{"][:_MAX_SCAN_STARTS]
    for i in starts:
        try:
            value, _ = decoder.raw_decode(raw, i)
        except (ValueError, RecursionError):
            continue
        if isinstance(value, dict):
            yield value


def parse_reasoning_response(raw: str) -> ReasoningResult:
    """Extract and validate the structured block. Raises ParseFailure only."""
    if not isinstance(raw, str):
        raise ParseFailure(f"response is {type(raw).__name__}, not text")

    data = None
    for cand in _candidate_objects(raw):
        if isinstance(cand, dict):
            data = cand
            break
        try:
            value = json.loads(cand)
        except (ValueError, RecursionError):
            continue
        if isinstance(value, dict):
            data = value
            break
    if data is None:
        raise ParseFailure(
            "no structured block found", fragment=raw[:_FRAGMENT_CHARS]
        )

    for name in RESPONSE_FIELDS:
        if name not in data:
            raise ParseFailure(
                f"missing field '{name}'",
                fragment=json.dumps(data, ensure_ascii=False)[:_FRAGMENT_CHARS],
            )
        value = data[name]
        if not isinstance(value, str) or not value.strip():
            raise ParseFailure(
                f"field '{name}' must be non-empty text",
                fragment=repr(value)[:_FRAGMENT_CHARS],
            )
    return ReasoningResult(
        task=data["task"],
        object=data["object"],
        part=data["part"],
        affordance=data["affordance"],
        rationale=data["rationale"],
        raw_response=raw,
    )


def serialize_reasoning_result(result: ReasoningResult) -> str:
    """Render the canonical fenced response for a valid result."""
    body = json.dumps(result.to_dict(), indent=2, ensure_ascii=False)
    return f"```json\n{body}\n```"
