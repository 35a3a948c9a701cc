"""Frobenius pushforward splitting of toric line bundles, chart by chart.

For a reference maximal cone ``l`` and ``g`` in ``P_p = {0..p-1}^n`` (chart-l
coordinates), every maximal cone ``i`` contributes the exponent vector ``h``
solving ``C_li g + u_i = p h + r`` with ``0 <= r < p``, where
``C_li = A_i A_l^{-1}``. In a smooth chart the exponent of the j-th coordinate
is the coefficient of the j-th ray of the cone, so the charts assemble into a
torus-invariant Weil divisor ``D_g``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _linalg
from .divisors import DivisorClass, class_matrix
from .fan import Fan, FamilyParams, build_family_fan
from .kernels import frobenius_weil

DEFAULT_SATURATION_P = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class ConeChart:
    cone: tuple[int, ...]  # ray indices in row order
    A: tuple[tuple[int, ...], ...]
    B: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FrobeniusSplit:
    p: int
    summands: tuple[tuple[tuple[int, ...], int], ...]  # (class, multiplicity), sorted

    @property
    def total(self) -> int:
        return sum(k for _, k in self.summands)

    @property
    def classes(self) -> frozenset:
        return frozenset(c for c, _ in self.summands)

    def as_counter(self) -> Counter:
        return Counter(dict(self.summands))


def chart(fan: Fan, cone: Sequence[int]) -> ConeChart:
    """Ray matrix of ``cone`` (rows in the given order) and its exact inverse."""
    cone = tuple(int(i) for i in cone)
    if frozenset(cone) not in fan.cone_sets:
        raise ValueError(f"{list(cone)} is not a maximal cone")
    a = fan.ray_matrix(cone)
    d = _linalg.det(a)
    if abs(d) != 1:
        raise ValueError(f"cone {list(cone)} is not smooth (det {d})")
    b = _linalg.inverse_unimodular(a)
    return ConeChart(cone, tuple(map(tuple, a)), tuple(map(tuple, b)))


def decompose(C: Sequence[Sequence[int]], g: Sequence[int], w: Sequence[int], p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Unique ``(h, r)`` with ``C g + w = p h + r`` and ``0 <= r_i < p``."""
    if p < 2:
        raise ValueError("p must be >= 2")
    x = [a + b for a, b in zip(_linalg.matvec(C, g), w)]
    return tuple(v // p for v in x), tuple(v % p for v in x)


def cartier_from_weil(fan: Fan, coeffs: Sequence[int]) -> list[tuple[int, ...]]:
    """Chart exponents of ``sum a_i D_i``: on each cone, the coefficients of its rays."""
    return [tuple(int(coeffs[i]) for i in c) for c in fan.maximal_cones]


def _check_cartier(fan: Fan, cartier: Sequence[Sequence[int]]) -> None:
    if len(cartier) != len(fan.maximal_cones):
        raise ValueError("Cartier data needs one exponent vector per maximal cone")
    seen: dict[int, int] = {}
    for cone, u in zip(fan.maximal_cones, cartier):
        if len(u) != len(cone):
            raise ValueError("Cartier exponent vector has the wrong length")
        for ray, a in zip(cone, u):
            if seen.setdefault(ray, int(a)) != int(a):
                raise ValueError(f"inconsistent Cartier data on ray {fan.label(ray)}")


def chart_classes(
    fan: Fan,
    p: int,
    *,
    cartier: Optional[Sequence[Sequence[int]]] = None,
    reference: int = 0,
    backend: Optional[str] = None,
) -> np.ndarray:
    """Class of ``D_g`` for every ``g`` in ``P_p`` (chart-``reference`` coordinates).

    Rows follow ``g`` in lexicographic order, first coordinate slowest.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if cartier is None:
        cartier = [(0,) * fan.dimension for _ in fan.maximal_cones]
    _check_cartier(fan, cartier)
    ref = chart(fan, fan.maximal_cones[reference])
    C, cone_rays = [], []
    for cone in fan.maximal_cones:
        ch = chart(fan, cone)
        C.append(_linalg.matmul(ch.A, ref.B))
        cone_rays.append(cone)
    weil, consistent = frobenius_weil(
        np.array(C), np.array(cartier), np.array(cone_rays), fan.num_rays, p, backend=backend
    )
    if not consistent:
        raise ValueError("chart divisors disagree on a shared ray")
    Q = np.array(class_matrix(fan), dtype=np.int64)
    return weil @ Q.T


def pushforward_split(
    fan: Fan,
    p: int,
    *,
    cartier: Optional[Sequence[Sequence[int]]] = None,
    reference: int = 0,
    backend: Optional[str] = None,
) -> FrobeniusSplit:
    """Multiset of classes in the splitting of ``F_*(L)``; ``L`` trivial by default."""
    classes = chart_classes(fan, p, cartier=cartier, reference=reference, backend=backend)
    uniq, counts = np.unique(classes, axis=0, return_counts=True)
    wrap = DivisorClass if fan.family is not None else tuple
    summands = tuple(
        (wrap(*map(int, row)) if wrap is DivisorClass else tuple(map(int, row)), int(k))
        for row, k in zip(uniq, counts)
    )
    return FrobeniusSplit(p=p, summands=summands)


def residue_transport(fan: Fan, p: int, source: int, target: int) -> np.ndarray:
    """Index map sending ``g`` in chart ``source`` to the same residue of
    ``M / pM`` written in chart ``target`` coordinates."""
    a_t = np.array(chart(fan, fan.maximal_cones[target]).A, dtype=np.int64)
    b_s = np.array(chart(fan, fan.maximal_cones[source]).B, dtype=np.int64)
    n = fan.dimension
    grid = np.indices((p,) * n, dtype=np.int64).reshape(n, -1).T
    moved = np.mod(grid @ (a_t @ b_s).T, p)
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return moved @ weights


def family_split_sets(params: FamilyParams) -> tuple[list[DivisorClass], list[DivisorClass], list[DivisorClass]]:
    """``B1``, ``B2``, ``B3`` in ``(e, f, g)`` coordinates."""
    n, b = params.n, params.b
    b1 = [DivisorClass(-q, -1, -1) for q in range(0, n + b)]
    b2 = [DivisorClass(-q, 0, -1) for q in range(1, n + b)]
    b3 = [DivisorClass(-q, 0, 0) for q in range(0, n)]
    return b1, b2, b3


def bondal_set(params: FamilyParams) -> frozenset[DivisorClass]:
    b1, b2, b3 = family_split_sets(params)
    return frozenset(b1) | frozenset(b2) | frozenset(b3)


def saturation_scan(params: FamilyParams, primes: Sequence[int] = DEFAULT_SATURATION_P, *, backend=None) -> dict:
    """Distinct split classes for each ``p``, compared with ``B1 | B2 | B3``.

    ``p_sat`` is the first tested ``p`` reaching equality, or None.
    """
    fan = build_family_fan(params)
    target = bondal_set(params)
    rows = []
    p_sat = None
    prev: frozenset = frozenset()
    monotone = True
    for p in primes:
        split = pushforward_split(fan, p, backend=backend)
        got = split.classes
        monotone &= prev <= got
        prev = got
        rows.append(
            {
                "p": p,
                "summands": split.total,
                "distinct": len(got),
                "subset": got <= target,
                "equal": got == target,
            }
        )
        if got == target and p_sat is None:
            p_sat = p
    return {
        "target_size": len(target),
        "rows": rows,
        "p_sat": p_sat,
        "monotone": monotone,
        "all_subset": all(r["subset"] for r in rows),
    }
