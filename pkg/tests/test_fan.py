from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from toricex.fan import (
    Fan,
    FamilyParams,
    FanError,
    build_family_fan,
    cone_containing,
    is_complete,
    is_smooth,
    primitive_collections,
)

from conftest import P1xP1, P2, family

params_st = st.builds(FamilyParams, st.integers(2, 5), st.integers(0, 4))


def test_family_rays_n2_b0(fan20):
    assert set(fan20.rays) == {(1, 0), (0, -1), (0, 1), (-1, 0), (-1, -1)}
    assert len(fan20.maximal_cones) == 5


def test_ray_order_and_labels():
    fan = family(3, 1)
    p = fan.family
    assert fan.rays[p.y] == (-1, -1, -2)
    assert fan.rays[p.z] == (0, 0, 1) and fan.rays[p.t] == (0, 0, -1)
    assert fan.rays[p.u] == (-1, -1, -1)
    assert fan.labels[p.y] == "y"


def test_n3_b1_counts():
    fan = family(3, 1)
    assert len(fan.rays) == 6 and len(fan.maximal_cones) == 8


def test_n2_b0_cones_are_non_primitive_pairs(fan20):
    prims = primitive_collections(fan20)
    pairs = {frozenset(c) for c in combinations(range(5), 2)} - set(prims)
    assert set(fan20.cone_sets) == pairs


def test_primitive_collections_n2_b0(fan20):
    lab = fan20.label
    got = {frozenset(lab(i) for i in p) for p in primitive_collections(fan20)}
    want = {frozenset(s) for s in (("v1", "y"), ("y", "z"), ("z", "t"), ("t", "u"), ("u", "v1"))}
    assert got == want


def test_primitive_collections_p2():
    assert primitive_collections(P2) == [frozenset({0, 1, 2})]


def test_primitive_collection_sizes_n4_b2():
    fan = family(4, 2)
    sizes = sorted(len(p) for p in primitive_collections(fan))
    assert sizes == [2, 2, 2, 4, 4]


@settings(max_examples=20, deadline=None)
@given(params_st)
def test_family_invariants(p):
    fan = build_family_fan(p)
    assert len(fan.maximal_cones) == 3 * p.n - 1
    assert is_smooth(fan) and is_complete(fan)
    assert set(primitive_collections(fan)) == set(p.primitive_collections())
    assert p.fano == (p.b < p.n - 1)


def test_non_smooth_fan():
    fan = Fan(dimension=2, rays=((1, 0), (1, 2), (-1, -1)), maximal_cones=((0, 1), (1, 2), (0, 2)))
    assert not is_smooth(fan)


def test_reference_fans():
    assert is_smooth(P2) and is_complete(P2)
    assert is_smooth(P1xP1) and is_complete(P1xP1)
    assert is_complete(family(3, 0))


def test_single_cone_incomplete():
    fan = Fan(dimension=2, rays=((1, 0), (0, 1)), maximal_cones=((0, 1),))
    assert not is_complete(fan)


def test_cone_containing_relations():
    for n, b in [(2, 0), (3, 2), (4, 1)]:
        fan = family(n, b)
        p = fan.family
        r = fan.rays

        def add(*idx):
            return tuple(sum(r[i][k] for i in idx) for k in range(n))

        assert cone_containing(fan, add(p.y, p.z)) == {p.u: 1}
        assert cone_containing(fan, add(p.z, p.t)) == {}
        assert cone_containing(fan, add(*p.v, p.y)) == {p.t: b + 1}


@pytest.mark.parametrize("kwargs, msg", [
    (dict(dimension=2, rays=((2, 0), (0, 1), (-1, -1)), maximal_cones=((0, 1), (1, 2), (0, 2))), "primitive"),
    (dict(dimension=2, rays=((0, 0), (0, 1), (-1, -1)), maximal_cones=((0, 1), (1, 2), (0, 2))), "zero"),
    (dict(dimension=2, rays=((1, 0), (1, 0), (-1, -1)), maximal_cones=((0, 1), (1, 2), (0, 2))), "duplicate"),
])
def test_fan_validation(kwargs, msg):
    with pytest.raises(FanError, match=msg):
        Fan(**kwargs)


def test_family_param_validation():
    with pytest.raises(ValueError):
        FamilyParams(1, 0)
    with pytest.raises(ValueError):
        FamilyParams(2, -1)


@settings(max_examples=15, deadline=None)
@given(params_st, st.randoms(use_true_random=False))
def test_permuted_fan_keeps_invariants(p, rnd):
    fan = build_family_fan(p)
    perm = list(range(fan.num_rays))
    rnd.shuffle(perm)
    g = fan.permuted(perm)
    assert is_smooth(g) and is_complete(g)
    assert len(primitive_collections(g)) == len(primitive_collections(fan))
