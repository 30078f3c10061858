"""Reasoning backends: deterministic offline mock, scripted stub, remote VLM.

All backends implement ``complete(payload) -> str`` and raise
BackendUnavailable for transport-level trouble; content-level problems come
back as text for the parser (and its retry loop) to judge.
"""

from __future__ import annotations

import base64
import hashlib
import os
import re
import threading
from dataclasses import dataclass, field, replace
from typing import Protocol

import httpx
import numpy as np

from ..errors import BackendUnavailable, MalformedReasoning, NoRelevantObject, ParseFailure
from .parse import ReasoningResult, parse_reasoning_response, serialize_reasoning_result
from .prompt import Instruction, PromptPayload, build_prompt
from .rules import RuleTable, choose_object, match_task

NO_RELEVANT_OBJECT_MARKER = "NO_RELEVANT_OBJECT"
DEFAULT_ATTEMPTS = 3
REPAIR_SUFFIX = (
    "\n\nYour previous reply could not be parsed. Respond again with only "
    "the fenced json block containing all five fields."
)

_INSTRUCTION = re.compile(r'"""(.*)"""', re.DOTALL)


class ReasoningBackend(Protocol):
    def complete(self, payload: PromptPayload) -> str: ...


@dataclass
class ScriptedBackend:
    """Replays canned responses in order (repeating the last one)."""

    responses: list
    calls: int = 0

    def complete(self, payload: PromptPayload) -> str:
        response = self.responses[min(self.calls, len(self.responses) - 1)]
        self.calls += 1
        return response


@dataclass
class MockReasoningBackend:
    """Rule-table reasoning over the scene's known object classes.

    Pure function of (rule table, visible objects, prompt): matches the
    instruction's keywords to a task, intersects the task's object
    preferences with the scene, and answers with that object's graspable
    part in the standard wire format.
    """

    rules: RuleTable
    visible_objects: tuple

    def __post_init__(self):
        self.visible_objects = tuple(str(v).lower() for v in self.visible_objects)

    def complete(self, payload: PromptPayload) -> str:
        m = _INSTRUCTION.search(payload.user_text)
        instruction = m.group(1) if m else payload.user_text
        rule = match_task(self.rules, instruction)
        if rule is None:
            return f"{NO_RELEVANT_OBJECT_MARKER}: no known task in the instruction"
        obj = choose_object(rule, self.visible_objects)
        if obj is None:
            return (
                f"{NO_RELEVANT_OBJECT_MARKER}: task '{rule.task}' wants one of "
                f"{list(rule.objects)} but none is visible"
            )
        part = self.rules.grasp_parts[obj]
        rationale = (
            f"Step 1: the instruction asks to {rule.task}. "
            f"Step 2: the most task-relevant object in view is the {obj}. "
            f"Step 3: among its parts, the {part} is the optimal one to "
            f"grasp while keeping the {obj} usable for the task."
        )
        return serialize_reasoning_result(
            ReasoningResult(
                task=rule.task,
                object=obj,
                part=part,
                affordance="grasp",
                rationale=rationale,
            )
        )


@dataclass
class RemoteReasoningBackend:
    """Chat-completion-style VLM client (one base64 image attachment).

    temperature defaults to 0 for reproducibility. The optional response
    cache is keyed by a digest of the full prompt and is lock-guarded so
    concurrent independent requests stay safe.
    """

    base_url: str
    model: str
    api_key_env: str = "TASKGRASP_API_KEY"
    temperature: float = 0.0
    timeout_s: float = 30.0
    use_cache: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, repr=False, compare=False
    )

    def _key(self, payload: PromptPayload) -> str:
        h = hashlib.sha256()
        h.update(payload.system_text.encode())
        h.update(payload.user_text.encode())
        h.update(payload.image)
        return h.hexdigest()

    def complete(self, payload: PromptPayload) -> str:
        key = self._key(payload) if self.use_cache else None
        if key is not None:
            with self._lock:
                if key in self._cache:
                    return self._cache[key]

        headers = {}
        api_key = os.environ.get(self.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [
                {"role": "system", "content": payload.system_text},
                {
                    "role": "user",
                    "content": [
                        {"type": "text", "text": payload.user_text},
                        {
                            "type": "image_url",
                            "image_url": {
                                "url": "data:image/png;base64,"
                                + base64.b64encode(payload.image).decode("ascii")
                            },
                        },
                    ],
                },
            ],
        }
        try:
            resp = httpx.post(
                self.base_url.rstrip("/") + "/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout_s,
            )
            resp.raise_for_status()
            content = resp.json()["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise BackendUnavailable(f"reasoning service: {exc}") from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise BackendUnavailable(
                f"reasoning service returned a malformed envelope: {exc}"
            ) from exc

        if key is not None:
            with self._lock:
                self._cache[key] = content
        return content


def infer_affordance(instr: Instruction, rgb: np.ndarray, backend: ReasoningBackend,
                     attempts: int = DEFAULT_ATTEMPTS) -> ReasoningResult:
    """Prompt, complete, parse; retry malformed replies with a repair nudge."""
    if attempts < 1:
        raise ValueError(f"attempts must be >= 1, got {attempts}")
    payload = build_prompt(instr, rgb)
    last_raw = ""
    for _ in range(attempts):
        raw = backend.complete(payload)
        last_raw = raw
        if raw.lstrip().startswith(NO_RELEVANT_OBJECT_MARKER):
            raise NoRelevantObject(raw.strip())
        try:
            return parse_reasoning_response(raw)
        except ParseFailure:
            payload = replace(payload, user_text=payload.user_text + REPAIR_SUFFIX)
    raise MalformedReasoning(
        f"no parseable response in {attempts} attempts", raw=last_raw
    )
