"""Instruction-to-affordance reasoning over a pluggable VLM backend."""

from .backends import (
    DEFAULT_ATTEMPTS,
    NO_RELEVANT_OBJECT_MARKER,
    MockReasoningBackend,
    ReasoningBackend,
    RemoteReasoningBackend,
    ScriptedBackend,
    infer_affordance,
)
from .parse import ReasoningResult, parse_reasoning_response, serialize_reasoning_result
from .prompt import (
    MAX_INSTRUCTION_CHARS,
    RESPONSE_FIELDS,
    Instruction,
    PromptPayload,
    build_prompt,
    encode_png,
)
from .rules import RuleTable, TaskRule, choose_object, load_rules, match_task

__all__ = [
    "DEFAULT_ATTEMPTS",
    "Instruction",
    "MAX_INSTRUCTION_CHARS",
    "MockReasoningBackend",
    "NO_RELEVANT_OBJECT_MARKER",
    "PromptPayload",
    "RESPONSE_FIELDS",
    "ReasoningBackend",
    "ReasoningResult",
    "RemoteReasoningBackend",
    "RuleTable",
    "ScriptedBackend",
    "TaskRule",
    "build_prompt",
    "choose_object",
    "encode_png",
    "infer_affordance",
    "load_rules",
    "match_task",
    "parse_reasoning_response",
    "serialize_reasoning_result",
]
