"""Divisor class groups and exact arithmetic on line-bundle classes.

For the family fan the class of ``sum r_i D_i`` is written as
``e D_v + f D_y + g D_t`` using ``D_u = D_v - D_y`` and
``D_z = b D_v + D_y + D_t``. Other fans get coordinates from a Smith normal
form of the ray matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from . import _linalg
from .fan import Fan, FamilyParams

ClassVector = tuple[int, ...]


class DivisorClass(NamedTuple):
    """Class ``e D_v + f D_y + g D_t`` on a family variety."""

    e: int
    f: int
    g: int

    def __str__(self) -> str:
        return f"({self.e},{self.f},{self.g})"


class AlphaVector(NamedTuple):
    """Coefficients of ``D_v`` (all v-rays lumped), ``D_y``, ``D_z``, ``D_t``, ``D_u``."""

    a1: int
    a2: int
    a3: int
    a4: int
    a5: int


@dataclass(frozen=True)
class ClassGroupInfo:
    rank: int
    torsion_orders: tuple[int, ...]
    # Rows map a ray divisor to its free class coordinates.
    basis_map: tuple[tuple[int, ...], ...]
    # Rows whose values, reduced modulo ``torsion_orders``, give the torsion part.
    torsion_map: tuple[tuple[int, ...], ...] = ()


def family_class_matrix(params: FamilyParams) -> tuple[tuple[int, ...], ...]:
    """3 x m matrix sending ray coefficients to ``(e, f, g)``."""
    n, b = params.n, params.b
    cols = [(1, 0, 0)] * (n - 1) + [(0, 1, 0), (b, 1, 1), (0, 0, 1), (1, -1, 0)]
    return tuple(tuple(c[k] for c in cols) for k in range(3))


@lru_cache(maxsize=None)
def general_class_group(fan: Fan) -> ClassGroupInfo:
    """Class group ``Z^m / im(V)`` from the Smith form of the m x n ray matrix V."""
    v = [list(r) for r in fan.rays]
    u, d, _ = _linalg.smith_normal_form(v)
    diag = [d[i][i] for i in range(min(len(d), fan.dimension))]
    s = sum(1 for x in diag if x)
    torsion = [(i, diag[i]) for i in range(s) if diag[i] > 1]
    return ClassGroupInfo(
        rank=fan.num_rays - s,
        torsion_orders=tuple(x for _, x in torsion),
        basis_map=tuple(tuple(u[i]) for i in range(s, fan.num_rays)),
        torsion_map=tuple(tuple(u[i]) for i, _ in torsion),
    )


def class_group(fan: Fan) -> ClassGroupInfo:
    """Class group of ``fan``; family fans use the ``(D_v, D_y, D_t)`` basis."""
    if fan.family is not None:
        return ClassGroupInfo(rank=3, torsion_orders=(), basis_map=family_class_matrix(fan.family))
    return general_class_group(fan)


def class_matrix(fan: Fan) -> tuple[tuple[int, ...], ...]:
    info = class_group(fan)
    if info.torsion_orders:
        raise ValueError("class group has torsion; fan is not smooth")
    return info.basis_map


def reduce(fan: Fan, d: Sequence[int]) -> ClassVector:
    """Class coordinates of the ray divisor ``sum d_i D_i``."""
    d = [int(x) for x in d]
    if len(d) != fan.num_rays:
        raise ValueError(f"expected {fan.num_rays} coefficients, got {len(d)}")
    info = class_group(fan)
    free = tuple(_linalg.matvec(info.basis_map, d))
    tors = tuple(x % q for x, q in zip(_linalg.matvec(info.torsion_map, d), info.torsion_orders))
    if fan.family is not None:
        return DivisorClass(*free)
    return free + tors


def canonical_class(fan: Fan) -> ClassVector:
    return reduce(fan, [-1] * fan.num_rays)


def alpha_to_class(params: FamilyParams, alpha: Sequence[int]) -> DivisorClass:
    a1, a2, a3, a4, a5 = (int(x) for x in alpha)
    return DivisorClass(a1 + a5 + a3 * params.b, a2 + a3 - a5, a3 + a4)


def alpha_to_ray_divisor(params: FamilyParams, alpha: Sequence[int], split: Sequence[int] | None = None) -> list[int]:
    """Expand an alpha vector to ray coefficients.

    ``split`` distributes ``a1`` over the v-rays and must sum to it; by default
    everything sits on ``v_1``.
    """
    a1, a2, a3, a4, a5 = (int(x) for x in alpha)
    if split is None:
        split = [a1] + [0] * (params.n - 2)
    split = [int(x) for x in split]
    if len(split) != params.n - 1 or sum(split) != a1:
        raise ValueError("split must have n-1 entries summing to a1")
    return split + [a2, a3, a4, a5]


def class_add(a: Sequence[int], b: Sequence[int]) -> ClassVector:
    return _like(a, tuple(x + y for x, y in zip(a, b)))


def class_neg(a: Sequence[int]) -> ClassVector:
    return _like(a, tuple(-x for x in a))


def hom_difference(source: Sequence[int], target: Sequence[int]) -> ClassVector:
    """Class of ``source^dual (x) target``, i.e. ``target - source``."""
    return _like(source, tuple(y - x for x, y in zip(source, target)))


def _like(template, values: tuple[int, ...]):
    if isinstance(template, DivisorClass):
        return DivisorClass(*values)
    return values
