"""Prompt construction for the affordance-reasoning step."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image

RESPONSE_FIELDS = ("task", "object", "part", "affordance", "rationale")
MAX_INSTRUCTION_CHARS = 2000

SYSTEM_TEXT = (
    "You plan grasps for a tabletop robot. Given a user instruction and one "
    "RGB image of the scene, work through exactly these steps:\n"
    "1. Extract the explicit task and its functional requirements from the "
    "instruction.\n"
    "2. Identify the single most task-relevant object visible in the image.\n"
    "3. Decompose that object into functional parts with their affordances "
    "and select the optimal part to grasp for the task.\n"
    "Then answer with one fenced json block and nothing else."
)

_USER_TEMPLATE = (
    'Instruction: """{instruction}"""\n\n'
    "Respond with a fenced ```json block containing exactly these string "
    "fields: task, object, part, affordance, rationale. The rationale must "
    "walk through steps 1, 2 and 3 in order. If nothing in the image suits "
    "the task, reply NO_RELEVANT_OBJECT followed by a short reason instead."
)


@dataclass(frozen=True)
class Instruction:
    """A natural-language user request."""

    text: str

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("instruction is empty")
        if len(self.text) > MAX_INSTRUCTION_CHARS:
            raise ValueError(
                f"instruction has {len(self.text)} characters, max {MAX_INSTRUCTION_CHARS}"
            )


@dataclass(frozen=True)
class PromptPayload:
    """Everything a reasoning backend needs for one completion."""

    system_text: str
    user_text: str
    image: bytes            # PNG-encoded RGB observation
    output_schema: tuple = RESPONSE_FIELDS


def encode_png(rgb: np.ndarray) -> bytes:
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3 or rgb.size == 0:
        raise ValueError(f"expected a non-empty HxWx3 image, got shape {rgb.shape}")
    buf = io.BytesIO()
    Image.fromarray(rgb, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def build_prompt(instr: Instruction, rgb: np.ndarray) -> PromptPayload:
    """Assemble the three-step prompt. Pure: equal inputs, equal bytes."""
    return PromptPayload(
        system_text=SYSTEM_TEXT,
        user_text=_USER_TEMPLATE.format(instruction=instr.text),
        image=encode_png(rgb),
    )
