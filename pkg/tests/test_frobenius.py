import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toricex.fan import FamilyParams
from toricex.frobenius import (
    bondal_set,
    cartier_from_weil,
    chart,
    chart_classes,
    decompose,
    family_split_sets,
    pushforward_split,
    residue_transport,
    saturation_scan,
)
from toricex.divisors import reduce

from conftest import P2, family


def _cone(fan, *names):
    return tuple(fan.labels.index(x) for x in names)


def test_chart_sigma0_identity():
    fan = family(3, 1)
    c = chart(fan, _cone(fan, "v1", "v2", "z"))
    assert c.A == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_chart_sigma1():
    fan = family(3, 1)
    c = chart(fan, _cone(fan, "v1", "v2", "t"))
    assert c.A == ((1, 0, 0), (0, 1, 0), (0, 0, -1))


def test_chart_sigma2_n2_b0(fan20):
    c = chart(fan20, _cone(fan20, "u", "y"))
    assert c.A == ((-1, 0), (-1, -1))


def test_chart_rejects_non_cone(fan20):
    with pytest.raises(ValueError):
        chart(fan20, _cone(fan20, "z", "t"))


def test_decompose_examples():
    assert decompose([[1, 0], [0, 1]], (3, 2), (0, 0), 5) == ((0, 0), (3, 2))
    assert decompose([[1, 0], [0, 1]], (5, -1), (0, 0), 5) == ((1, -1), (0, 4))
    assert decompose([[1, 0], [0, -1]], (1, 1), (0, 0), 3) == ((0, -1), (1, 2))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-20, 20), min_size=3, max_size=3),
       st.lists(st.integers(-20, 20), min_size=3, max_size=3), st.integers(2, 13))
def test_decompose_invariant(C, g, w, p):
    h, r = decompose(C, g, w, p)
    Cg = [sum(a * b for a, b in zip(row, g)) + wi for row, wi in zip(C, w)]
    assert all(p * hi + ri == x and 0 <= ri < p for hi, ri, x in zip(h, r, Cg))


def test_split_sets_n2_b0():
    b1, b2, b3 = family_split_sets(FamilyParams(2, 0))
    assert set(b1) == {(0, -1, -1), (-1, -1, -1)}
    assert set(b2) == {(-1, 0, -1)}
    assert set(b3) == {(0, 0, 0), (-1, 0, 0)}


def test_split_sets_n3_b0():
    assert set(family_split_sets(FamilyParams(3, 0))[2]) == {(0, 0, 0), (-1, 0, 0), (-2, 0, 0)}


@pytest.mark.parametrize("n,b", [(n, b) for n in (2, 3, 4) for b in (0, 1, 2, 3)])
def test_bondal_set_size(n, b):
    assert len(bondal_set(FamilyParams(n, b))) == 3 * n + 2 * b - 1


def test_trivial_summand_at_g0(fan20):
    classes = chart_classes(fan20, 5)
    assert tuple(classes[0]) == (0, 0, 0)


@pytest.mark.parametrize("n,b,p", [(2, 0, 2), (2, 1, 7), (3, 2, 5), (4, 0, 3)])
def test_total_multiplicity(n, b, p):
    split = pushforward_split(family(n, b), p)
    assert split.total == p ** n
    assert split.classes <= bondal_set(FamilyParams(n, b))


def test_split_n2_b1_p7():
    # Six classes, not seven: (0,-1,-1) never splits off when b >= 1.
    split = pushforward_split(family(2, 1), 7)
    assert split.total == 49
    assert split.classes == bondal_set(FamilyParams(2, 1)) - {(0, -1, -1)}


@pytest.mark.parametrize("n,b", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_top_b1_class_absent_for_positive_b(n, b):
    for p in (2, 3, 5, 7, 11):
        assert (0, -1, -1) not in pushforward_split(family(n, b), p).classes


@pytest.mark.parametrize("n", [2, 3, 4])
def test_saturation_b0(n):
    scan = saturation_scan(FamilyParams(n, 0), (2, 3, 5, 7))
    assert scan["all_subset"] and scan["monotone"]
    assert scan["p_sat"] == (3 if n == 2 else 5)


@pytest.mark.parametrize("n,b,p", [(2, 0, 5), (2, 2, 5), (3, 1, 5), (3, 0, 3)])
def test_chart_independence(n, b, p):
    fan = family(n, b)
    base = chart_classes(fan, p, reference=0)
    for t in range(1, len(fan.maximal_cones)):
        moved = residue_transport(fan, p, 0, t)
        other = chart_classes(fan, p, reference=t)
        assert np.array_equal(base, other[moved])


def test_twisted_pushforward_projection_formula():
    # F_*(F^*M) = M (x) F_*O, and F^*O(D) = O(pD).
    fan = family(2, 1)
    p = 3
    d = [1, 0, 0, 0, 2]
    base = pushforward_split(fan, p).as_counter()
    twisted = pushforward_split(fan, p, cartier=cartier_from_weil(fan, [p * x for x in d])).as_counter()
    shift = reduce(fan, d)
    assert twisted == {tuple(a + s for a, s in zip(c, shift)): k for c, k in base.items()}


def test_inconsistent_cartier_rejected(fan20):
    bad = [(1, 0)] + [(0, 0)] * 4
    with pytest.raises(ValueError):
        pushforward_split(fan20, 3, cartier=bad)


def test_p2_split_is_beilinson():
    # F_*O on P^2 splits into O, O(-1), O(-2); O(-2) needs p >= 3.
    assert pushforward_split(P2, 2).as_counter() == {(0,): 1, (-1,): 3}
    for p in (3, 5):
        split = pushforward_split(P2, p)
        assert split.total == p * p
        assert split.classes == {(0,), (-1,), (-2,)}
