"""Three-valued verdicts for searches that may run out of budget."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union


@dataclass(frozen=True)
class Found:
    witness: Any
    note: str = ""

    @property
    def decided(self) -> bool:
        return True

    def __str__(self) -> str:
        return f"Found({self.witness})"


@dataclass(frozen=True)
class Refuted:
    reason: str = ""

    @property
    def decided(self) -> bool:
        return True

    def __str__(self) -> str:
        return "Refuted"


@dataclass(frozen=True)
class BoundExceeded:
    """The search budget ran out; nothing is claimed either way."""

    bound: Any = None
    detail: str = ""

    @property
    def decided(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"BoundExceeded({self.bound})"


Decision = Union[Found, Refuted, BoundExceeded]


def decision_to_json(d: Decision) -> dict:
    if isinstance(d, Found):
        w = d.witness
        if isinstance(w, tuple):
            w = list(w)
        return {"verdict": "found", "witness": w, "note": d.note}
    if isinstance(d, Refuted):
        return {"verdict": "refuted", "reason": d.reason}
    return {"verdict": "bound_exceeded", "bound": d.bound, "detail": d.detail}
