"""The ordered collection of 3n-1 line bundles and its verification.

Strong exceptionality is checked on the full Ext grid through the cohomology
engine. Fullness is certified by closing the collection under the two Koszul
rules until it contains ``B1 | B2 | B3``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

from .cohomology import (
    forbidden_subsets,
    h0,
    is_acyclic_closed_form,
    is_acyclic_oracle,
)
from .config import DEFAULT_LIMITS, EnumerationLimits
from .divisors import DivisorClass, hom_difference
from .fan import FamilyParams, build_family_fan, is_complete, is_smooth, primitive_collections
from .frobenius import bondal_set, saturation_scan
from .report import Check

DIFF_FAMILIES = {
    # tag: ((f, g), s-range as a function of (n, b))
    1: ((0, 0), lambda n, b: (-(n - 1), n - 1)),
    2: ((0, 1), lambda n, b: (b + 2 - n, n - 1 + b)),
    3: ((0, -1), lambda n, b: (-(n - 1 + b), n - b - 2)),
    4: ((1, 0), lambda n, b: (-(n - 1), n - 2)),
    5: ((-1, 0), lambda n, b: (-(n - 2), n - 1)),
    6: ((1, 1), lambda n, b: (b - (n - 1), b + n - 1)),
    7: ((-1, -1), lambda n, b: (-(b + n - 1), n - 1 - b)),
}


class DiffClassificationError(ValueError):
    pass


@dataclass(frozen=True)
class Collection:
    items: tuple[DivisorClass, ...]
    params: FamilyParams

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(DivisorClass(*c) for c in self.items))
        if len(set(self.items)) != len(self.items):
            raise ValueError("collection items must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.items)

    def reordered(self, items: Sequence[DivisorClass]) -> "Collection":
        return Collection(tuple(items), self.params)


def the_collection(params: FamilyParams) -> Collection:
    n, b = params.n, params.b
    col1 = []
    for k in range(n - 1 + b, b, -1):
        col1 += [DivisorClass(-k, -1, -1), DivisorClass(-k, 0, -1)]
    col1.append(DivisorClass(-b, -1, -1))
    col2 = [DivisorClass(-q, 0, 0) for q in range(n - 1, -1, -1)]
    return Collection(tuple(col1 + col2), params)


def classify_diff(params: FamilyParams, cls: Sequence[int]) -> Optional[tuple[int, int]]:
    """``(family tag, s)`` if ``cls = s D_v + ...`` lies in one of the seven
    difference families with ``s`` in range, else None."""
    s, f, g = cls
    for tag, ((ff, gg), rng) in DIFF_FAMILIES.items():
        lo, hi = rng(params.n, params.b)
        if (f, g) == (ff, gg) and lo <= s <= hi:
            return tag, s
    return None


def diff_families(c: Collection) -> list[tuple[int, int, DivisorClass, int, int]]:
    """Classify ``hom_difference(item_j, item_k)`` for every ordered pair ``j != k``.

    Returns ``(j, k, difference, tag, s)`` rows; raises if a difference escapes
    all seven families.
    """
    rows = []
    for j, a in enumerate(c.items):
        for k, b in enumerate(c.items):
            if j == k:
                continue
            d = hom_difference(a, b)
            hit = classify_diff(c.params, d)
            if hit is None:
                raise DiffClassificationError(f"difference {d} of items {j} and {k} fits no family")
            rows.append((j, k, d, hit[0], hit[1]))
    return rows


@dataclass
class ExtReport:
    size: int
    hom_dims: list[list[int]]  # h0(item_k - item_j) at [j][k]
    acyclic: list[list[bool]]  # item_k - item_j acyclic at [j][k]
    failures: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_strongly_exceptional(
    c: Collection,
    *,
    limits: EnumerationLimits = DEFAULT_LIMITS,
    acyclic: Optional[Callable[[DivisorClass], bool]] = None,
    backend: Optional[str] = None,
) -> ExtReport:
    """Full Ext grid over ordered pairs.

    Requires: each item exceptional; ``Ext^{>0}(F_j, F_k) = 0`` for ``j <= k``;
    ``Ext^*(F_k, F_j) = 0`` for ``j < k``.
    """
    fan = build_family_fan(c.params)
    if acyclic is None:
        def acyclic(d):
            return is_acyclic_oracle(fan, d, limits=limits, backend=backend)
    size = len(c)
    cache_h0: dict = {}
    cache_ac: dict = {}
    hom = [[0] * size for _ in range(size)]
    ac = [[True] * size for _ in range(size)]
    for j, a in enumerate(c.items):
        for k, b in enumerate(c.items):
            d = hom_difference(a, b)
            if d not in cache_ac:
                cache_ac[d] = acyclic(d)
                cache_h0[d] = h0(fan, d, limits=limits, backend=backend)
            hom[j][k] = cache_h0[d]
            ac[j][k] = cache_ac[d]
    failures = []
    for j in range(size):
        if not ac[j][j] or hom[j][j] != 1:
            failures.append((j, j, "not exceptional"))
        for k in range(j + 1, size):
            if not ac[j][k]:
                failures.append((j, k, "higher Ext forward"))
            if hom[k][j]:
                failures.append((k, j, "Hom backward"))
            if not ac[k][j]:
                failures.append((k, j, "higher Ext backward"))
    return ExtReport(size, hom, ac, failures)


# -- Koszul generation ---------------------------------------------------------


class TraceStep(NamedTuple):
    rule: str
    k: int
    produced: DivisorClass


@dataclass(frozen=True)
class GenerationState:
    generated: frozenset
    trace: tuple[TraceStep, ...] = ()


def _rule_a_premises(n: int, k: int) -> list[DivisorClass]:
    return [DivisorClass(-k - j, -1, -1) for j in range(0, n)] + [DivisorClass(-k - j, 0, -1) for j in range(1, n)]


def _rule_b_premises(n: int, k: int) -> list[DivisorClass]:
    return [DivisorClass(-k - j, -1, -1) for j in range(1, n)] + [DivisorClass(-k - j, 0, -1) for j in range(1, n + 1)]


RULES = {
    "A": (_rule_a_premises, lambda k: DivisorClass(-k, 0, -1)),
    "B": (_rule_b_premises, lambda k: DivisorClass(-k, -1, -1)),
}


def _apply(rule: str, params: FamilyParams, k: int, state: GenerationState) -> GenerationState:
    premises, target = RULES[rule]
    out = target(k)
    if out in state.generated or not all(x in state.generated for x in premises(params.n, k)):
        return state
    return GenerationState(state.generated | {out}, state.trace + (TraceStep(rule, k, out),))


def koszul_rule_A(params: FamilyParams, k: int, state: GenerationState) -> GenerationState:
    """Koszul complex of ``y, v_1..v_{n-1}`` twisted by ``O(-k D_v - D_t)``."""
    return _apply("A", params, k, state)


def koszul_rule_B(params: FamilyParams, k: int, state: GenerationState) -> GenerationState:
    """Dual Koszul complex of ``u, v_1..v_{n-1}`` twisted by ``O(-(n+k) D_v - D_t)``."""
    return _apply("B", params, k, state)


def twist_range(params: FamilyParams) -> range:
    return range(params.n - 1 + params.b, -1, -1)


def close(params: FamilyParams, state: GenerationState, order: Optional[list[tuple[str, int]]] = None) -> GenerationState:
    """Apply the rules until none fires. ``order`` fixes the scan order of
    (rule, twist) pairs; the default is twists descending, A before B."""
    if order is None:
        order = [(r, k) for k in twist_range(params) for r in ("A", "B")]
    while True:
        before = len(state.generated)
        for rule, k in order:
            state = _apply(rule, params, k, state)
        if len(state.generated) == before:
            return state


def verify_full(c: Collection) -> tuple[bool, GenerationState]:
    state = close(c.params, GenerationState(frozenset(c.items)))
    return bondal_set(c.params) <= state.generated, state


def replay(c: Collection, trace: Sequence[TraceStep]) -> bool:
    """True iff every recorded step had all its premises at the time it fired."""
    have = set(c.items)
    for step in trace:
        premises, target = RULES[step.rule]
        if target(step.k) != step.produced or not all(x in have for x in premises(c.params.n, step.k)):
            return False
        have.add(step.produced)
    return True


def random_closure(params: FamilyParams, items, seed: int) -> frozenset:
    order = [(r, k) for k in twist_range(params) for r in ("A", "B")]
    random.Random(seed).shuffle(order)
    return close(params, GenerationState(frozenset(items)), order).generated


# -- everything at once ----------------------------------------------------------


@dataclass
class VerificationResult:
    params: FamilyParams
    checks: list[Check]
    certificates: dict

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)


def verify_all(
    params: FamilyParams,
    *,
    limits: EnumerationLimits = DEFAULT_LIMITS,
    primes: Sequence[int] = (2, 3, 5, 7, 11),
    backend: Optional[str] = None,
) -> VerificationResult:
    fan = build_family_fan(params)
    c = the_collection(params)
    checks: list[Check] = []
    certs: dict = {}

    prims = set(primitive_collections(fan))
    checks.append(Check("fan", is_smooth(fan) and is_complete(fan) and prims == set(params.primitive_collections()),
                        {"rays": len(fan.rays), "maximal_cones": len(fan.maximal_cones)}))
    checks.append(Check("k0_rank", len(c) == len(fan.maximal_cones) == 3 * params.n - 1,
                        {"collection": len(c), "maximal_cones": len(fan.maximal_cones)}))

    ext = check_strongly_exceptional(c, limits=limits, backend=backend)
    checks.append(Check("strongly_exceptional", ext.passed,
                        {"pairs": ext.size * ext.size, "failures": [list(f) for f in ext.failures]}))

    diffs = {hom_difference(a, b) for a in c.items for b in c.items}
    mismatch = [list(d) for d in sorted(diffs)
                if is_acyclic_closed_form(params, d) != is_acyclic_oracle(fan, d, limits=limits, backend=backend)]
    checks.append(Check("acyclicity_agreement", not mismatch, {"differences": len(diffs), "mismatches": mismatch}))

    try:
        rows = diff_families(c)
        tags = sorted({r[3] for r in rows})
        checks.append(Check("diff_table", True, {"pairs": len(rows), "families": tags}))
    except DiffClassificationError as exc:
        checks.append(Check("diff_table", False, {"error": str(exc)}))

    full, state = verify_full(c)
    checks.append(Check("full", full and replay(c, state.trace), {"steps": len(state.trace)}))
    certs["generation_trace"] = [[s.rule, s.k, list(s.produced)] for s in state.trace]

    scan = saturation_scan(params, primes, backend=backend)
    covered = all(r["subset"] for r in scan["rows"])
    checks.append(Check("frobenius_split", covered, {
        "target_size": scan["target_size"],
        "distinct": {str(r["p"]): r["distinct"] for r in scan["rows"]},
        "p_sat": scan["p_sat"],
    }))
    certs["forbidden"] = [[i + 1 for i in sorted(I)] for I in forbidden_subsets(fan)]  # 1-based, as in fan files
    return VerificationResult(params, checks, certs)
