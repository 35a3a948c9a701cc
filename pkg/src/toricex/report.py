"""Verdict/certificate reports and their JSON and text renderings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

SCHEMA = "toricex.report/1"


def _plain(obj: Any) -> Any:
    """Normalise to JSON-native values (tuples become lists, keys strings)."""
    return json.loads(json.dumps(obj))


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.detail = _plain(self.detail)


@dataclass
class Report:
    command: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    timing: Optional[float] = None

    def __post_init__(self):
        self.config = _plain(self.config)
        self.data = _plain(self.data)
        self.certificates = _plain(self.certificates)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA
        d["verdict"] = "pass" if self.passed else "fail"
        if self.timing is None:
            del d["timing"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unknown report schema {d.get('schema')!r}")
        return cls(
            command=d["command"],
            config=d["config"],
            checks=[Check(**c) for c in d["checks"]],
            data=d.get("data", {}),
            certificates=d.get("certificates", {}),
            timing=d.get("timing"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        cfg = " ".join(f"{k}={v}" for k, v in sorted(self.config.items()) if v is not None)
        lines = [f"{self.command}: {cfg}"]
        for key in sorted(self.data):
            lines.append(f"  {key}: {_short(self.data[key])}")
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = ", ".join(f"{k}={_short(v)}" for k, v in sorted(c.detail.items()))
            lines.append(f"[{mark}] {c.name}" + (f"  ({extra})" if extra else ""))
        for key in sorted(self.certificates):
            lines.append(f"  certificate {key}: {_short(self.certificates[key], 400)}")
        if self.timing is not None:
            lines.append(f"  time: {self.timing:.3f}s")
        lines.append(f"verdict: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _short(v: Any, width: int = 160) -> str:
    s = json.dumps(v, separators=(",", ":")) if not isinstance(v, str) else v
    return s if len(s) <= width else s[: width - 3] + "..."
