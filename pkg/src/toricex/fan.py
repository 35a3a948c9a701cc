"""Integer fans, the Picard-number-three family X(n, b), and fan combinatorics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from . import _linalg

LatticeVector = tuple[int, ...]


class FanError(ValueError):
    """Raised for malformed fan data."""


@dataclass(frozen=True)
class FamilyParams:
    """Parameters of the family: dimension ``n >= 2`` and twist ``b >= 0``."""

    n: int
    b: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.b, int) or self.b < 0:
            raise ValueError(f"b must be an integer >= 0, got {self.b!r}")

    @property
    def fano(self) -> bool:
        return self.b < self.n - 1

    @property
    def num_rays(self) -> int:
        return self.n + 3

    # Ray index conventions: (v_1, ..., v_{n-1}, y, z, t, u).
    @property
    def v(self) -> tuple[int, ...]:
        return tuple(range(self.n - 1))

    @property
    def y(self) -> int:
        return self.n - 1

    @property
    def z(self) -> int:
        return self.n

    @property
    def t(self) -> int:
        return self.n + 1

    @property
    def u(self) -> int:
        return self.n + 2

    def blocks(self) -> tuple[frozenset[int], ...]:
        """The five ray blocks X_0 = {v_i}, X_1 = {y}, X_2 = {z}, X_3 = {t}, X_4 = {u}."""
        return (
            frozenset(self.v),
            frozenset({self.y}),
            frozenset({self.z}),
            frozenset({self.t}),
            frozenset({self.u}),
        )

    def primitive_collections(self) -> tuple[frozenset[int], ...]:
        """Y_i = X_i | X_{i+1}, cyclically."""
        x = self.blocks()
        return tuple(x[i] | x[(i + 1) % 5] for i in range(5))


@dataclass(frozen=True)
class Fan:
    """A smooth simplicial fan given by primitive ray generators and maximal cones.

    Ray indices are 0-based. Maximal cones are stored as sorted tuples.
    """

    dimension: int
    rays: tuple[LatticeVector, ...]
    maximal_cones: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = None
    family: Optional[FamilyParams] = None

    def __post_init__(self):
        n = self.dimension
        if not isinstance(n, int) or n < 1:
            raise FanError(f"dimension must be a positive integer, got {n!r}")
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        for i, r in enumerate(rays):
            if len(r) != n:
                raise FanError(f"dimension mismatch: ray {i + 1} has {len(r)} coordinates, expected {n}")
            if not any(r):
                raise FanError(f"ray {i + 1} is the zero vector")
            if reduce(gcd, map(abs, r)) != 1:
                raise FanError(f"non-primitive ray {i + 1}: {list(r)}")
        if len(set(rays)) != len(rays):
            raise FanError("duplicate rays")
        cones = []
        for c in self.maximal_cones:
            c = tuple(sorted(int(i) for i in c))
            if len(c) != n or len(set(c)) != n:
                raise FanError(f"maximal cone {list(c)} does not have {n} distinct rays")
            if any(i < 0 or i >= len(rays) for i in c):
                raise FanError(f"maximal cone {list(c)} references a missing ray")
            cones.append(c)
        if len(set(cones)) != len(cones):
            raise FanError("duplicate maximal cones")
        object.__setattr__(self, "maximal_cones", tuple(cones))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(rays):
                raise FanError("labels must match the number of rays")
            object.__setattr__(self, "labels", labels)

    @property
    def num_rays(self) -> int:
        return len(self.rays)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"x{i + 1}"

    @cached_property
    def cone_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(c) for c in self.maximal_cones)

    def is_face(self, subset) -> bool:
        s = frozenset(subset)
        return any(s <= c for c in self.cone_sets)

    def ray_matrix(self, cone: Sequence[int]) -> list[list[int]]:
        return [list(self.rays[i]) for i in cone]

    def permuted(self, perm: Sequence[int]) -> "Fan":
        """The same fan with ray ``i`` moved to position ``perm[i]``."""
        inv = [0] * len(perm)
        for old, new in enumerate(perm):
            inv[new] = old
        return Fan(
            dimension=self.dimension,
            rays=tuple(self.rays[inv[k]] for k in range(len(perm))),
            maximal_cones=tuple(tuple(perm[i] for i in c) for c in self.maximal_cones),
            labels=tuple(self.labels[inv[k]] for k in range(len(perm))) if self.labels else None,
        )


def family_rays(params: FamilyParams) -> tuple[LatticeVector, ...]:
    n, b = params.n, params.b

    def e(i: int) -> list[int]:
        v = [0] * n
        v[i] = 1
        return v

    v = [tuple(e(i)) for i in range(n - 1)]
    y = tuple([-1] * (n - 1) + [-(b + 1)])
    z = tuple(e(n - 1))
    t = tuple([0] * (n - 1) + [-1])
    u = tuple([-1] * (n - 1) + [-b])
    return tuple(v) + (y, z, t, u)


def family_labels(params: FamilyParams) -> tuple[str, ...]:
    return tuple(f"v{i + 1}" for i in range(params.n - 1)) + ("y", "z", "t", "u")


def build_family_fan(params: FamilyParams) -> Fan:
    """Fan of X(n, b): maximal cones are the n-subsets of rays containing no
    primitive collection."""
    prims = params.primitive_collections()
    cones = tuple(
        c
        for c in combinations(range(params.num_rays), params.n)
        if not any(p <= frozenset(c) for p in prims)
    )
    return Fan(
        dimension=params.n,
        rays=family_rays(params),
        maximal_cones=cones,
        labels=family_labels(params),
        family=params,
    )


def primitive_collections(fan: Fan) -> list[frozenset[int]]:
    """All minimal non-faces, ordered by size then lexicographically."""
    out = []
    for k in range(1, min(fan.dimension + 1, fan.num_rays) + 1):
        for c in combinations(range(fan.num_rays), k):
            if fan.is_face(c):
                continue
            if all(fan.is_face(sub) for sub in combinations(c, k - 1)):
                out.append(frozenset(c))
    return out


def is_smooth(fan: Fan) -> bool:
    return all(abs(_linalg.det(fan.ray_matrix(c))) == 1 for c in fan.maximal_cones)


def is_complete(fan: Fan) -> bool:
    """Wall condition: every codimension-one face of a maximal cone lies in
    exactly two maximal cones."""
    walls: dict[tuple[int, ...], int] = {}
    for c in fan.maximal_cones:
        for w in combinations(c, len(c) - 1):
            walls[w] = walls.get(w, 0) + 1
    return bool(walls) and all(k == 2 for k in walls.values())


def cone_containing(fan: Fan, point: Sequence[int]) -> dict[int, int]:
    """Minimal cone containing ``point`` with the coefficients of its rays.

    Returns ``{ray index: positive coefficient}``; the empty dict is the zero cone.
    """
    point = [int(x) for x in point]
    if len(point) != fan.dimension:
        raise FanError("point has the wrong dimension")
    for c in fan.maximal_cones:
        inv = _linalg.inverse_unimodular(fan.ray_matrix(c))
        # point = lam @ A  =>  lam = point @ A^{-1}
        lam = [sum(point[i] * inv[i][j] for i in range(len(point))) for j in range(len(c))]
        if all(x >= 0 for x in lam):
            return {c[j]: x for j, x in enumerate(lam) if x > 0}
    raise FanError(f"no maximal cone contains {point}; fan is not complete")
