"""Line-bundle cohomology on smooth complete toric varieties.

Cohomology of ``O(sum r_i D_i)`` is assembled from the reduced homology of
the complexes ``C_I`` (faces of the fan supported in ``I``) over all integer
representatives ``r`` of the class, grouped by their sign pattern
``I = {i : r_i >= 0}``. Reduced degree ``d`` feeds ``H^{n-1-d}``: the full
pattern (a sphere ``S^{n-1}``) gives sections and the empty pattern gives
top cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import _linalg
from .config import DEFAULT_LIMITS, EnumerationLimits
from .divisors import AlphaVector, ClassVector, DivisorClass, alpha_to_class, class_matrix, hom_difference
from .fan import Fan, FamilyParams, primitive_collections
from .kernels import fiber_search

SupportPattern = frozenset


class EngineLimitError(RuntimeError):
    """Radius escalation ran out before the box covered the whole fibre."""

    def __init__(self, cls, pattern, radius):
        self.cls = tuple(cls)
        self.pattern = tuple(sorted(pattern))
        self.radius = radius
        super().__init__(
            f"enumeration for class {self.cls} on pattern {list(self.pattern)} "
            f"needs a box radius beyond {radius}"
        )


# -- simplicial complexes ---------------------------------------------------


@dataclass(frozen=True)
class SimplicialComplex:
    """Subsets of ``vertices`` containing none of ``nonfaces``."""

    vertices: frozenset
    nonfaces: tuple[frozenset, ...] = ()

    @cached_property
    def faces(self) -> tuple[frozenset, ...]:
        verts = sorted(self.vertices)
        out = []
        for k in range(len(verts) + 1):
            level = [frozenset(c) for c in combinations(verts, k)]
            level = [s for s in level if not any(p <= s for p in self.nonfaces)]
            if not level:
                break
            out.extend(level)
        return tuple(out)

    def faces_of_size(self, k: int) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(f)) for f in self.faces if len(f) == k)


@dataclass(frozen=True)
class BettiVector:
    """Reduced Betti numbers; ``values[0]`` is degree -1."""

    values: tuple[int, ...]

    def __getitem__(self, degree: int) -> int:
        i = degree + 1
        return self.values[i] if 0 <= i < len(self.values) else 0

    def nonzero(self) -> dict[int, int]:
        return {d - 1: v for d, v in enumerate(self.values) if v}

    @property
    def trivial(self) -> bool:
        return not any(self.values)


def build_complex(fan: Fan, pattern: Sequence[int]) -> SimplicialComplex:
    """``C_I``: subsets of ``I`` spanning a cone of the fan."""
    verts = frozenset(int(i) for i in pattern)
    prims = tuple(p for p in _primitive_collections(fan) if p <= verts)
    return SimplicialComplex(verts, prims)


@lru_cache(maxsize=None)
def _primitive_collections(fan: Fan) -> tuple[frozenset, ...]:
    return tuple(primitive_collections(fan))


def _boundary(lower: list[tuple[int, ...]], upper: list[tuple[int, ...]]) -> list[list[int]]:
    index = {f: i for i, f in enumerate(lower)}
    mat = [[0] * len(upper) for _ in lower]
    for j, face in enumerate(upper):
        for pos in range(len(face)):
            mat[index[face[:pos] + face[pos + 1:]]][j] = -1 if pos % 2 else 1
    return mat


def reduced_homology(c: SimplicialComplex) -> BettiVector:
    """Exact reduced Betti numbers over Q from the augmented chain complex."""
    by_size = []
    k = 0
    while True:
        fs = c.faces_of_size(k)
        if not fs:
            break
        by_size.append(fs)
        k += 1
    ranks = [0] * (len(by_size) + 1)  # ranks[k]: rank of boundary from size k to size k-1
    for k in range(1, len(by_size)):
        ranks[k] = _linalg.rank(_boundary(by_size[k - 1], by_size[k]))
    betti = [len(by_size[k]) - ranks[k] - ranks[k + 1] for k in range(len(by_size))]
    return BettiVector(tuple(betti))


def euler_check(c: SimplicialComplex) -> bool:
    """Alternating face count equals alternating Betti sum (degree -1 included)."""
    faces = sum((-1) ** (len(f) - 1) for f in c.faces)
    b = reduced_homology(c)
    return faces == sum((-1) ** (d - 1) * v for d, v in enumerate(b.values))


@lru_cache(maxsize=None)
def homology_patterns(fan: Fan) -> dict[frozenset, BettiVector]:
    """Every index set (the full set included) whose complex has nonzero
    reduced homology, with its Betti vector."""
    out = {}
    m = fan.num_rays
    for k in range(m + 1):
        for c in combinations(range(m), k):
            b = reduced_homology(build_complex(fan, c))
            if not b.trivial:
                out[frozenset(c)] = b
    return out


def forbidden_subsets(fan: Fan) -> list[frozenset]:
    """Proper index sets with nontrivial reduced homology (the empty set included)."""
    full = frozenset(range(fan.num_rays))
    return sorted((I for I in homology_patterns(fan) if I != full), key=lambda s: (len(s), sorted(s)))


# -- fibres of the class map ----------------------------------------------


class FiberEnumeration(NamedTuple):
    solutions: tuple[tuple[int, ...], ...]
    count: int
    touches_boundary: bool
    radius: int


@dataclass(frozen=True)
class _FiberContext:
    sigma: np.ndarray  # rays of the reference cone
    W: np.ndarray  # m x n, columns span the relation lattice
    off: tuple[int, ...]  # rays outside the reference cone
    lift: tuple[tuple[int, ...], ...]  # class -> coefficients on ``off``
    vrows: np.ndarray  # k x n row subsets of W that are invertible
    vinv: np.ndarray  # k x n x n their inverses (float)


@lru_cache(maxsize=None)
def _fiber_context(fan: Fan) -> _FiberContext:
    cone = fan.maximal_cones[0]
    binv = _linalg.inverse_unimodular(fan.ray_matrix(cone))
    V = [list(r) for r in fan.rays]
    W = _linalg.matmul(V, binv)
    off = tuple(i for i in range(fan.num_rays) if i not in cone)
    Q = class_matrix(fan)
    if len(Q) != len(off):
        raise ValueError("class group rank does not match m - n")
    lift = _linalg.inverse_unimodular([[row[i] for i in off] for row in Q])
    Wf = np.array(W, dtype=float)
    rows = [S for S in combinations(range(fan.num_rays), fan.dimension) if _linalg.det([W[i] for i in S])]
    vrows = np.array(rows, dtype=np.int64)
    vinv = np.linalg.inv(Wf[vrows])
    return _FiberContext(
        np.array(cone, dtype=np.int64), np.array(W, dtype=np.int64), off, tuple(map(tuple, lift)), vrows, vinv
    )


def _particular(fan: Fan, cls: Sequence[int]) -> np.ndarray:
    ctx = _fiber_context(fan)
    r0 = np.zeros(fan.num_rays, dtype=np.int64)
    r0[list(ctx.off)] = _linalg.matvec(ctx.lift, [int(x) for x in cls])
    return r0


_TOL = 1e-7


class UnboundedFibreError(ValueError):
    """The sign-pattern region has a recession direction, so it is not a polytope."""


@lru_cache(maxsize=None)
def recession_direction(fan: Fan, pattern: frozenset) -> Optional[tuple[int, ...]]:
    """A nonzero ``c`` with ``W c >= 0`` on ``pattern`` and ``<= 0`` off it, or None.

    The cone is pointed (``W`` has full column rank), so it is nonzero iff one
    of its candidate extreme rays, the kernel of ``n - 1`` rows, qualifies.
    """
    W = [list(map(int, row)) for row in _fiber_context(fan).W]
    n, m = fan.dimension, fan.num_rays
    for S in combinations(range(m), n - 1):
        rows = [W[i] for i in S]
        d = [(-1) ** j * _linalg.det([r[:j] + r[j + 1:] for r in rows]) if rows else 1 for j in range(n)]
        if not any(d):
            continue
        for sign in (1, -1):
            w = [sign * sum(a * b for a, b in zip(row, d)) for row in W]
            if all((x >= 0) if i in pattern else (x <= 0) for i, x in enumerate(w)):
                return tuple(sign * x for x in d)
    return None


def fibre_extent(fan: Fan, cls: Sequence[int], pattern: Sequence[int]) -> Optional[int]:
    """Bound on ``max |r_i|`` over real ``r`` of class ``cls`` with sign pattern
    ``pattern``, or None when that region is empty.

    The region is a polytope (bounded because the fan is complete), so the
    maximum sits at a vertex; every vertex is the solution of ``n`` tight
    sign constraints. The tolerance only ever enlarges the bound. Raises
    ``UnboundedFibreError`` for a nonempty region that is not bounded.
    """
    ctx = _fiber_context(fan)
    r0 = _particular(fan, cls).astype(float)
    nonneg = np.zeros(fan.num_rays, dtype=bool)
    nonneg[list(pattern)] = True
    tight = np.where(nonneg, 0.0, -1.0)
    rhs = tight[ctx.vrows] - r0[ctx.vrows]
    c = np.einsum("kij,kj->ki", ctx.vinv, rhs)
    r = r0 + c @ ctx.W.T.astype(float)
    feasible = np.where(nonneg, r >= -_TOL, r <= -1 + _TOL).all(axis=1)
    if not feasible.any():
        return None
    if recession_direction(fan, frozenset(int(i) for i in pattern)) is not None:
        raise UnboundedFibreError(f"sign pattern {sorted(pattern)} has an unbounded region")
    return int(np.ceil(np.abs(r[feasible]).max() - _TOL))


def default_radius(fan: Fan) -> int:
    b = fan.family.b if fan.family is not None else 0
    return fan.dimension + b + 4


def representations(
    fan: Fan,
    cls: Sequence[int],
    pattern: Sequence[int],
    radius: int,
    *,
    limit: int = 0,
    keep: int = 100_000,
    backend: Optional[str] = None,
) -> FiberEnumeration:
    """Integer ``r`` of class ``cls`` with ``r_i >= 0`` exactly on ``pattern``
    and ``|r_i| <= radius``. ``touches_boundary`` false certifies completeness."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    cls = tuple(int(x) for x in cls)
    if len(cls) != len(class_matrix(fan)):
        raise ValueError(f"class must have {len(class_matrix(fan))} coordinates")
    ctx = _fiber_context(fan)
    m = fan.num_rays
    nonneg = np.zeros(m, dtype=bool)
    nonneg[list(pattern)] = True
    lo = np.where(nonneg, 0, -radius)
    hi = np.where(nonneg, radius, -1)
    res = fiber_search(_particular(fan, cls), ctx.W, lo, hi, ctx.sigma, radius, limit=limit, keep=keep, backend=backend)
    sols = tuple(tuple(int(x) for x in row) for row in res.solutions)
    return FiberEnumeration(sols, res.count, res.touches_boundary, radius)


def certified_count(
    fan: Fan,
    cls: Sequence[int],
    pattern: Sequence[int],
    *,
    limits: EnumerationLimits = DEFAULT_LIMITS,
    limit: int = 0,
    backend: Optional[str] = None,
) -> FiberEnumeration:
    """Count representatives of ``cls`` on ``pattern`` exactly.

    The box radius doubles until it strictly exceeds the vertex bound of
    ``fibre_extent``, so nothing can lie outside it; ``EngineLimitError`` if
    the doublings run out first. With ``limit > 0`` a nonempty answer is
    returned as soon as it is found.
    """
    radius = limits.initial_radius or default_radius(fan)
    extent = fibre_extent(fan, cls, pattern)
    if extent is None:
        return FiberEnumeration((), 0, False, radius)
    for _ in range(limits.doublings + 1):
        if radius > extent:
            res = representations(fan, cls, pattern, radius, limit=limit, keep=0, backend=backend)
            assert not res.touches_boundary
            return res
        if limit:
            res = representations(fan, cls, pattern, radius, limit=limit, keep=0, backend=backend)
            if res.count >= limit:
                return res
        radius *= 2
    raise EngineLimitError(cls, pattern, radius // 2)


def h0(fan: Fan, cls: Sequence[int], *, limits: EnumerationLimits = DEFAULT_LIMITS, backend=None) -> int:
    """Number of effective torus-invariant representatives, i.e. ``dim H^0``."""
    return certified_count(fan, cls, range(fan.num_rays), limits=limits, backend=backend).count


def is_acyclic_oracle(fan: Fan, cls: Sequence[int], *, limits: EnumerationLimits = DEFAULT_LIMITS, backend=None) -> bool:
    """True iff no representative has its sign pattern on a proper forbidden set."""
    for pattern in forbidden_subsets(fan):
        if certified_count(fan, cls, pattern, limits=limits, limit=1, backend=backend).count:
            return False
    return True


def cohomology_dims(fan: Fan, cls: Sequence[int], *, limits: EnumerationLimits = DEFAULT_LIMITS, backend=None) -> tuple[int, ...]:
    """``(dim H^0, ..., dim H^n)``."""
    n = fan.dimension
    dims = [0] * (n + 1)
    for pattern, betti in homology_patterns(fan).items():
        count = certified_count(fan, cls, pattern, limits=limits, backend=backend).count
        if not count:
            continue
        for d, v in betti.nonzero().items():
            dims[n - 1 - d] += count * v
    return tuple(dims)


# -- closed-form criterion on the family --------------------------------------


def negative_blocks() -> list[frozenset[int]]:
    """Cyclic runs of 2 or 3 alpha positions (1-based), and all five."""
    runs = [frozenset(((i + k) % 5) + 1 for k in range(size)) for size in (2, 3) for i in range(5)]
    return runs + [frozenset(range(1, 6))]


def _alpha_solution(params: FamilyParams, cls: Sequence[int], negative: frozenset[int]) -> Optional[AlphaVector]:
    """An alpha of class ``cls`` negative exactly on ``negative`` (with
    ``a1 <= -(n-1)`` when position 1 is negative), or None.

    Exact: with ``a3 = x`` and ``a5 = y`` free every other alpha is affine in
    ``(x, y)`` with a unit coefficient on ``y``, so eliminating ``y`` leaves an
    integer interval for ``x``.
    """
    n, b = params.n, params.b
    e, f, g = (int(v) for v in cls)
    expr = {1: (-b, -1, e), 2: (-1, 1, f), 3: (1, 0, 0), 4: (-1, 0, g), 5: (0, 1, 0)}
    cons = []  # (cx, cy, c0): cx*x + cy*y + c0 >= 0
    for i, (cx, cy, c0) in expr.items():
        if i in negative:
            bound = -(n - 1) if i == 1 else -1
            cons.append((-cx, -cy, bound - c0))
        else:
            cons.append((cx, cy, c0))
    lower, upper, xonly = [], [], []
    for cx, cy, c0 in cons:
        if cy == 1:
            lower.append((-cx, -c0))  # y >= -cx*x - c0
        elif cy == -1:
            upper.append((cx, c0))  # y <= cx*x + c0
        else:
            xonly.append((cx, c0))
    xonly += [(a2 - a1, c2 - c1) for a1, c1 in lower for a2, c2 in upper]
    xlo, xhi = None, None
    for a, c in xonly:
        if a == 0:
            if c < 0:
                return None
        elif a > 0:
            v = -(c // a)
            xlo = v if xlo is None else max(xlo, v)
        else:
            v = c // (-a)
            xhi = v if xhi is None else min(xhi, v)
    if xlo is not None and xhi is not None and xlo > xhi:
        return None
    x = _clamp(0, xlo, xhi)
    ylo = max((a * x + c for a, c in lower), default=None)
    yhi = min((a * x + c for a, c in upper), default=None)
    y = _clamp(0, ylo, yhi)
    alpha = AlphaVector(e - y - b * x, f - x + y, x, g - x, y)
    assert alpha_to_class(params, alpha) == tuple(cls)
    return alpha


def _clamp(v: int, lo: Optional[int], hi: Optional[int]) -> int:
    if lo is not None and v < lo:
        v = lo
    if hi is not None and v > hi:
        v = hi
    return v


def acyclicity_witness(params: FamilyParams, cls: Sequence[int]) -> Optional[tuple[frozenset[int], AlphaVector]]:
    """A negative block and alpha exhibiting ``cls`` as non-acyclic, or None."""
    for block in negative_blocks():
        alpha = _alpha_solution(params, cls, block)
        if alpha is not None:
            return block, alpha
    return None


def is_acyclic_closed_form(params: FamilyParams, cls: Sequence[int]) -> bool:
    return acyclicity_witness(params, cls) is None


def section_form(params: FamilyParams, cls: Sequence[int]) -> Optional[AlphaVector]:
    """A nonnegative alpha of class ``cls`` (so ``H^0 != 0``), or None."""
    return _alpha_solution(params, cls, frozenset())


# -- Ext ----------------------------------------------------------------------


def ext_vanishes(
    fan: Fan,
    source: Sequence[int],
    target: Sequence[int],
    positive_only: bool = True,
    *,
    limits: EnumerationLimits = DEFAULT_LIMITS,
    backend=None,
) -> bool:
    """``Ext^i(source, target) = H^i(target - source)`` vanishing for ``i >= 1``
    (and ``i = 0`` too unless ``positive_only``)."""
    diff = hom_difference(source, target)
    if not is_acyclic_oracle(fan, diff, limits=limits, backend=backend):
        return False
    return positive_only or h0(fan, diff, limits=limits, backend=backend) == 0
