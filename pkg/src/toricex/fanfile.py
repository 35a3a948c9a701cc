"""JSON fan documents.

Fields: ``dimension`` (int), ``rays`` (list of integer lists),
``maximal_cones`` (lists of 1-based ray indices), optional ``labels`` and
optional ``family`` (``{"n": .., "b": ..}``) to mark a family fan.
"""

from __future__ import annotations

import json
from pathlib import Path

from .fan import Fan, FamilyParams, FanError, build_family_fan, is_complete, is_smooth


class FanFileError(ValueError):
    pass


def fan_to_dict(fan: Fan) -> dict:
    d = {
        "dimension": fan.dimension,
        "rays": [list(r) for r in fan.rays],
        "maximal_cones": [[i + 1 for i in c] for c in fan.maximal_cones],
    }
    if fan.labels:
        d["labels"] = list(fan.labels)
    if fan.family is not None:
        d["family"] = {"n": fan.family.n, "b": fan.family.b}
    return d


def dump_fan(fan: Fan, path) -> None:
    Path(path).write_text(json.dumps(fan_to_dict(fan), indent=2) + "\n")


def fan_from_dict(d: dict) -> Fan:
    if not isinstance(d, dict):
        raise FanFileError("parse error: top level must be an object")
    for key in ("dimension", "rays", "maximal_cones"):
        if key not in d:
            raise FanFileError(f"parse error: missing field {key!r}")
    if not _int_lists(d["rays"]) or not _int_lists(d["maximal_cones"]):
        raise FanFileError("parse error: rays and maximal_cones must be lists of integer lists")
    family = None
    if d.get("family") is not None:
        try:
            family = FamilyParams(int(d["family"]["n"]), int(d["family"]["b"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FanFileError(f"parse error: bad family field ({exc})") from None
    try:
        fan = Fan(
            dimension=d["dimension"],
            rays=tuple(tuple(r) for r in d["rays"]),
            maximal_cones=tuple(tuple(i - 1 for i in c) for c in d["maximal_cones"]),
            labels=tuple(d["labels"]) if d.get("labels") else None,
            family=family,
        )
    except FanError as exc:
        raise FanFileError(str(exc)) from None
    failed = [name for name, ok in (("smoothness", is_smooth(fan)), ("completeness", is_complete(fan))) if not ok]
    if failed:
        raise FanFileError(f"{' and '.join(failed)} check failed")
    if family is not None and fan != build_family_fan(family):
        raise FanFileError("fan does not match its declared family parameters")
    return fan


def load_fan(path) -> Fan:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FanFileError(f"parse error: {exc}") from None
    except OSError as exc:
        raise FanFileError(f"cannot read {path}: {exc.strerror}") from None
    return fan_from_dict(d)


def _int_lists(x) -> bool:
    return isinstance(x, list) and all(
        isinstance(r, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in r) for r in x
    )
