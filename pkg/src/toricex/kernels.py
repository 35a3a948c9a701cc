"""Integer enumeration kernels.

Two hot loops live here, each with a numba implementation and a vectorised
numpy implementation that must agree exactly:

* ``fiber_search``: lattice points ``r = r0 + W c`` with ``lo <= r <= hi``,
  where the rows of ``W`` indexed by ``sigma`` form the identity. This is the
  fibre of the class map over a fixed class, cut by a sign pattern and a box.
* ``frobenius_weil``: ray coefficients of the divisors ``D_g`` for every
  ``g`` in ``{0..p-1}^n``, computed chart by chart.

All arrays are int64. Callers keep magnitudes far below 2**62.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._accel import HAVE_NUMBA, default_backend, njit

BACKENDS = ("numba", "numpy")


class FiberResult(NamedTuple):
    count: int
    solutions: np.ndarray  # (stored, m)
    touches_boundary: bool


def _suffix_extremes(W, cmin, cmax, others):
    n = W.shape[1]
    no = others.shape[0]
    rmin = np.zeros((n + 1, no), dtype=np.int64)
    rmax = np.zeros((n + 1, no), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        for t in range(no):
            w = W[others[t], k]
            a = w * cmin[k]
            b = w * cmax[k]
            if a < b:
                rmin[k, t] = rmin[k + 1, t] + a
                rmax[k, t] = rmax[k + 1, t] + b
            else:
                rmin[k, t] = rmin[k + 1, t] + b
                rmax[k, t] = rmax[k + 1, t] + a
    return rmin, rmax


def _fiber_dfs(r0, W, lo, hi, sigma, others, radius, limit, keep):
    m = W.shape[0]
    n = W.shape[1]
    no = others.shape[0]
    cmin = np.empty(n, dtype=np.int64)
    cmax = np.empty(n, dtype=np.int64)
    for k in range(n):
        cmin[k] = lo[sigma[k]] - r0[sigma[k]]
        cmax[k] = hi[sigma[k]] - r0[sigma[k]]
    # extremes of the not-yet-chosen part of each constraint row
    rmin = np.zeros((n + 1, no), dtype=np.int64)
    rmax = np.zeros((n + 1, no), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        for t in range(no):
            w = W[others[t], k]
            lo_part = min(w * cmin[k], w * cmax[k])
            hi_part = max(w * cmin[k], w * cmax[k])
            rmin[k, t] = rmin[k + 1, t] + lo_part
            rmax[k, t] = rmax[k + 1, t] + hi_part

    sols = np.zeros((keep, m), dtype=np.int64)
    S = np.zeros((n + 1, m), dtype=np.int64)
    for i in range(m):
        S[0, i] = r0[i]
    c = np.zeros(n, dtype=np.int64)
    top = np.zeros(n, dtype=np.int64)
    count = 0
    stored = 0
    touched = False

    k = 0
    while True:
        # tighten the admissible range of c[k] given the prefix sums S[k]
        a = cmin[k]
        z = cmax[k]
        for t in range(no):
            j = others[t]
            w = W[j, k]
            s = S[k, j]
            need_lo = lo[j] - s - rmax[k + 1, t]
            need_hi = hi[j] - s - rmin[k + 1, t]
            if w == 0:
                if need_lo > 0 or need_hi < 0:
                    a = 1
                    z = 0
            elif w > 0:
                x = -((-need_lo) // w)
                if x > a:
                    a = x
                x = need_hi // w
                if x < z:
                    z = x
            else:
                x = need_lo // w
                if x < z:
                    z = x
                x = -((-need_hi) // w)
                if x > a:
                    a = x
        c[k] = a
        top[k] = z
        # advance: walk values at depth k, descending when possible
        while True:
            if c[k] > top[k]:
                if k == 0:
                    return count, sols[:stored], touched
                k -= 1
                c[k] += 1
                continue
            for i in range(m):
                S[k + 1, i] = S[k, i] + W[i, k] * c[k]
            if k == n - 1:
                count += 1
                for i in range(m):
                    v = S[n, i]
                    if v == radius or v == -radius:
                        touched = True
                if stored < keep:
                    for i in range(m):
                        sols[stored, i] = S[n, i]
                    stored += 1
                if limit > 0 and count >= limit:
                    return count, sols[:stored], touched
                c[k] += 1
                continue
            k += 1
            break


_fiber_dfs_jit = njit(_fiber_dfs) if HAVE_NUMBA else None


def _ceil_div(a, w):
    return -((-a) // w)


def _fiber_bfs(r0, W, lo, hi, sigma, others, radius, limit, keep):
    """Level-by-level frontier expansion, vectorised over the frontier."""
    m, n = W.shape
    cmin = lo[sigma] - r0[sigma]
    cmax = hi[sigma] - r0[sigma]
    rmin, rmax = _suffix_extremes(W, cmin, cmax, others)
    S = r0[None, :].copy()
    for k in range(n):
        a = np.full(S.shape[0], cmin[k], dtype=np.int64)
        z = np.full(S.shape[0], cmax[k], dtype=np.int64)
        for t, j in enumerate(others):
            w = W[j, k]
            need_lo = lo[j] - S[:, j] - rmax[k + 1, t]
            need_hi = hi[j] - S[:, j] - rmin[k + 1, t]
            if w == 0:
                bad = (need_lo > 0) | (need_hi < 0)
                z = np.where(bad, a - 1, z)
            elif w > 0:
                a = np.maximum(a, _ceil_div(need_lo, w))
                z = np.minimum(z, need_hi // w)
            else:
                z = np.minimum(z, need_lo // w)
                a = np.maximum(a, _ceil_div(need_hi, w))
        width = np.maximum(z - a + 1, 0)
        total = int(width.sum())
        parent = np.repeat(np.arange(S.shape[0]), width)
        starts = np.repeat(np.cumsum(width) - width, width)
        ck = a[parent] + (np.arange(total, dtype=np.int64) - starts)
        S = S[parent] + ck[:, None] * W[:, k][None, :]
    count = S.shape[0]
    if limit > 0 and count > limit:
        S = S[:limit]
        count = limit
    touched = bool(np.any(np.abs(S) == radius)) if S.size else False
    return count, S[:keep].copy(), touched


def fiber_search(r0, W, lo, hi, sigma, radius, *, limit=0, keep=0, backend=None) -> FiberResult:
    """Enumerate ``r = r0 + W c`` with ``lo <= r <= hi`` componentwise.

    ``sigma`` lists the rows of ``W`` forming the identity (one per column).
    ``limit > 0`` stops after that many solutions; at most ``keep`` are returned.
    ``touches_boundary`` reports a solution with some ``|r_i| == radius``.
    """
    backend = backend or default_backend()
    r0 = np.ascontiguousarray(r0, dtype=np.int64)
    W = np.ascontiguousarray(W, dtype=np.int64)
    lo = np.ascontiguousarray(lo, dtype=np.int64)
    hi = np.ascontiguousarray(hi, dtype=np.int64)
    sigma = np.ascontiguousarray(sigma, dtype=np.int64)
    mask = np.ones(W.shape[0], dtype=bool)
    mask[sigma] = False
    others = np.flatnonzero(mask).astype(np.int64)
    if backend == "numba":
        if _fiber_dfs_jit is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        count, sols, touched = _fiber_dfs_jit(r0, W, lo, hi, sigma, others, int(radius), int(limit), int(keep))
    elif backend == "numpy":
        count, sols, touched = _fiber_bfs(r0, W, lo, hi, sigma, others, int(radius), int(limit), int(keep))
    elif backend == "python":
        count, sols, touched = _fiber_dfs(r0, W, lo, hi, sigma, others, int(radius), int(limit), int(keep))
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return FiberResult(int(count), np.asarray(sols), bool(touched))


def _frobenius_numpy(C, U, cone_rays, m, p):
    q, n, _ = C.shape
    grid = np.indices((p,) * n, dtype=np.int64).reshape(n, -1).T
    weil = np.zeros((grid.shape[0], m), dtype=np.int64)
    filled = np.zeros(m, dtype=bool)
    consistent = True
    for i in range(q):
        h = np.floor_divide(grid @ C[i].T + U[i][None, :], p)
        for j in range(n):
            ray = cone_rays[i, j]
            if filled[ray]:
                if not np.array_equal(weil[:, ray], h[:, j]):
                    consistent = False
            else:
                weil[:, ray] = h[:, j]
                filled[ray] = True
    return weil, consistent


def _frobenius_loop(C, U, cone_rays, m, p):
    q = C.shape[0]
    n = C.shape[1]
    total = 1
    for _ in range(n):
        total *= p
    weil = np.zeros((total, m), dtype=np.int64)
    filled = np.zeros((total, m), dtype=np.bool_)
    g = np.zeros(n, dtype=np.int64)
    consistent = True
    for idx in range(total):
        rem = idx
        for j in range(n - 1, -1, -1):
            g[j] = rem % p
            rem //= p
        for i in range(q):
            for j in range(n):
                acc = U[i, j]
                for k in range(n):
                    acc += C[i, j, k] * g[k]
                h = acc // p
                ray = cone_rays[i, j]
                if filled[idx, ray]:
                    if weil[idx, ray] != h:
                        consistent = False
                else:
                    weil[idx, ray] = h
                    filled[idx, ray] = True
    return weil, consistent


_frobenius_jit = njit(_frobenius_loop) if HAVE_NUMBA else None


def frobenius_weil(C, U, cone_rays, m, p, *, backend=None):
    """Ray coefficients ``floor((C_i g + u_i) / p)`` assembled over all charts.

    ``C``: (q, n, n) transition matrices from the reference chart, ``U``:
    (q, n) chart exponents of the line bundle, ``cone_rays``: (q, n) ray index
    of each chart coordinate. Rows of the output follow ``g`` in lexicographic
    order (first coordinate slowest). Returns ``(weil, consistent)``; the flag
    is false when two charts disagree on a shared ray.
    """
    backend = backend or default_backend()
    C = np.ascontiguousarray(C, dtype=np.int64)
    U = np.ascontiguousarray(U, dtype=np.int64)
    cone_rays = np.ascontiguousarray(cone_rays, dtype=np.int64)
    if backend == "numba":
        if _frobenius_jit is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        weil, ok = _frobenius_jit(C, U, cone_rays, int(m), int(p))
    elif backend == "numpy":
        weil, ok = _frobenius_numpy(C, U, cone_rays, int(m), int(p))
    elif backend == "python":
        weil, ok = _frobenius_loop(C, U, cone_rays, int(m), int(p))
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return weil, bool(ok)
