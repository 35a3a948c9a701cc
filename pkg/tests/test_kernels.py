"""The three kernel backends must agree exactly, order included."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toricex import _accel
from toricex.cohomology import _fiber_context, _particular
from toricex.frobenius import chart_classes
from toricex.kernels import fiber_search

from conftest import family

BACKENDS = ["numpy", "python"] + (["numba"] if _accel.HAVE_NUMBA else [])


def _search(fan, cls, pattern, radius, backend, **kw):
    ctx = _fiber_context(fan)
    nonneg = np.zeros(fan.num_rays, dtype=bool)
    nonneg[list(pattern)] = True
    lo = np.where(nonneg, 0, -radius)
    hi = np.where(nonneg, radius, -1)
    return fiber_search(_particular(fan, cls), ctx.W, lo, hi, ctx.sigma, radius, backend=backend, **kw)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 0), (2, 2), (3, 1), (4, 0)]), st.integers(-5, 5), st.integers(-2, 2),
       st.integers(-2, 2), st.data())
def test_fiber_backends_agree(nb, e, f, g, data):
    fan = family(*nb)
    pattern = data.draw(st.sets(st.integers(0, fan.num_rays - 1)))
    radius = data.draw(st.integers(1, 8))
    results = [_search(fan, (e, f, g), pattern, radius, b, keep=10_000) for b in BACKENDS]
    first = results[0]
    for r in results[1:]:
        assert r.count == first.count
        assert r.touches_boundary == first.touches_boundary
        assert np.array_equal(r.solutions, first.solutions)


def test_fiber_limit_stops_early():
    fan = family(2, 0)
    for b in BACKENDS:
        res = _search(fan, (4, 0, 0), range(5), 10, b, limit=1)
        assert res.count == 1


def test_fiber_solutions_in_class():
    fan = family(3, 1)
    from toricex.divisors import reduce
    res = _search(fan, (3, 1, 1), range(fan.num_rays), 10, BACKENDS[0], keep=1000)
    assert res.count > 0
    assert all(reduce(fan, r) == (3, 1, 1) for r in res.solutions)


@pytest.mark.parametrize("nb,p", [((2, 0), 5), ((2, 1), 7), ((3, 2), 3), ((4, 1), 2)])
def test_frobenius_backends_agree(nb, p):
    fan = family(*nb)
    ref = chart_classes(fan, p, backend="python")
    for b in BACKENDS:
        assert np.array_equal(chart_classes(fan, p, backend=b), ref)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _search(family(2, 0), (0, 0, 0), (), 3, "fortran")


def test_env_flag_parsing(monkeypatch):
    import importlib
    monkeypatch.setenv("TORICEX_DISABLE_NUMBA", "1")
    mod = importlib.reload(_accel)
    try:
        assert not mod.NUMBA_ENABLED and mod.default_backend() == "numpy"
    finally:
        monkeypatch.delenv("TORICEX_DISABLE_NUMBA")
        importlib.reload(_accel)
