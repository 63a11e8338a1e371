from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Verdict:
    """Outcome of a pass/fail check.

    ``witness`` is a JSON-ready dict locating the first failure (indices are
    zero-based there; ``message`` uses one-based indices for humans).
    """

    passed: bool
    message: str = ""
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self, witnesses=True):
        out = {"passed": self.passed, "message": self.message}
        if witnesses and self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def PASS(message="", **details):
    return Verdict(True, message, None, details)


def FAIL(message, witness=None, **details):
    return Verdict(False, message, witness, details)
