"""Rule table driving the offline reasoning backend.

A table maps instruction keywords to a task and a preference-ordered list of
object classes, plus each class's graspable part. Loaded from YAML; the
packaged default covers the synthetic catalog.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

_WORD = re.compile(r"[a-z0-9']+")


@dataclass(frozen=True)
class TaskRule:
    task: str
    keywords: tuple
    objects: tuple


@dataclass(frozen=True)
class RuleTable:
    version: int
    tasks: tuple
    grasp_parts: dict
    canonical_instructions: dict

    def canonical_instruction(self, object_class: str) -> str:
        return self.canonical_instructions[object_class]


def _validate(table: RuleTable) -> RuleTable:
    seen: dict = {}
    for rule in table.tasks:
        if not rule.keywords or not rule.objects:
            raise ValueError(f"task '{rule.task}' needs keywords and objects")
        for kw in rule.keywords:
            if kw in seen:
                raise ValueError(
                    f"keyword '{kw}' appears under both '{seen[kw]}' and '{rule.task}'"
                )
            seen[kw] = rule.task
        for obj in rule.objects:
            if obj not in table.grasp_parts:
                raise ValueError(f"object '{obj}' has no grasp_parts entry")
    return table


def load_rules(path=None) -> RuleTable:
    """Load a rule table; with no path, the packaged default."""
    if path is None:
        text = resources.files("taskgrasp").joinpath("data/rules.yaml").read_text()
    else:
        text = Path(path).read_text()
    doc = yaml.safe_load(text)
    tasks = tuple(
        TaskRule(
            task=str(t["task"]),
            keywords=tuple(str(k).lower() for k in t["keywords"]),
            objects=tuple(str(o).lower() for o in t["objects"]),
        )
        for t in doc["tasks"]
    )
    return _validate(
        RuleTable(
            version=int(doc["version"]),
            tasks=tasks,
            grasp_parts={str(k).lower(): str(v) for k, v in doc["grasp_parts"].items()},
            canonical_instructions={
                str(k).lower(): str(v)
                for k, v in doc.get("canonical_instructions", {}).items()
            },
        )
    )


def match_task(table: RuleTable, instruction_text: str) -> TaskRule | None:
    """Most-keyword-hits task for the instruction; ties go to table order."""
    words = set(_WORD.findall(instruction_text.lower()))
    best, best_hits = None, 0
    for rule in table.tasks:
        hits = sum(1 for kw in rule.keywords if kw in words)
        if hits > best_hits:
            best, best_hits = rule, hits
    return best


def choose_object(rule: TaskRule, visible_objects) -> str | None:
    """First object of the rule's preference list present in the scene."""
    visible = {str(v).lower() for v in visible_objects}
    for obj in rule.objects:
        if obj in visible:
            return obj
    return None
